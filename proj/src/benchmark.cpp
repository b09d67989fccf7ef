#include "cfn/benchmark.hpp"

#include <chrono>

namespace cfn {

using Json = nlohmann::ordered_json;

Json run_benchmark(const BenchOptions& options) {
  Json report;
  report["family"] = family_name(options.family);
  report["model"] = options.model == Model::dag ? "dag" : "decomposition";
  Json settings = Json::array();
  for (int size : options.sizes) {
    Json instances = Json::array();
    int solved = 0;
    double nodes = 0;
    double backtracks = 0;
    double seconds = 0;
    for (int r = 0; r < options.repetitions; ++r) {
      GenSpec spec;
      spec.family = options.family;
      spec.size = size;
      spec.constraints = options.constraints;
      spec.seed = options.base_seed + static_cast<std::uint64_t>(r);
      spec.model = options.model;
      spec.parens = options.parens;
      const Cfn cfn = generate(spec);
      const auto begin = std::chrono::steady_clock::now();
      const SearchStats stats = solve(cfn, options.search);
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
      Json record;
      record["seed"] = spec.seed;
      record["solved"] = stats.proved_optimal;
      record["optimum"] = stats.best_assignment.empty() ? Json(nullptr) : Json(stats.best_cost);
      record["nodes"] = stats.nodes;
      record["backtracks"] = stats.backtracks;
      record["seconds"] = elapsed;
      instances.push_back(record);
      solved += stats.proved_optimal ? 1 : 0;
      nodes += static_cast<double>(stats.nodes);
      backtracks += static_cast<double>(stats.backtracks);
      seconds += elapsed;
    }
    const double count = options.repetitions > 0 ? options.repetitions : 1;
    Json aggregate;
    aggregate["instances"] = options.repetitions;
    aggregate["solved"] = solved;
    aggregate["mean_nodes"] = nodes / count;
    aggregate["mean_backtracks"] = backtracks / count;
    aggregate["mean_seconds"] = seconds / count;
    Json setting;
    setting["size"] = size;
    setting["instances"] = instances;
    setting["aggregate"] = aggregate;
    settings.push_back(setting);
  }
  report["settings"] = settings;
  return report;
}

std::string validate_report(const Json& report) {
  if (!report.is_object()) return "report is not an object";
  if (!report.contains("family") || !report["family"].is_string()) return "missing family";
  if (!report.contains("model") || !report["model"].is_string()) return "missing model";
  if (!report.contains("settings") || !report["settings"].is_array()) return "missing settings";
  for (const auto& s : report["settings"]) {
    if (!s.contains("size") || !s["size"].is_number_integer()) return "setting without size";
    if (!s.contains("instances") || !s["instances"].is_array()) return "setting without instances";
    for (const auto& r : s["instances"]) {
      for (const char* key : {"seed", "nodes", "backtracks"}) {
        if (!r.contains(key) || !r[key].is_number_unsigned()) return std::string("instance without ") + key;
      }
      if (!r.contains("solved") || !r["solved"].is_boolean()) return "instance without solved";
      if (!r.contains("optimum") || !(r["optimum"].is_null() || r["optimum"].is_number_unsigned())) {
        return "instance without optimum";
      }
      if (!r.contains("seconds") || !r["seconds"].is_number()) return "instance without seconds";
    }
    if (!s.contains("aggregate") || !s["aggregate"].is_object()) return "setting without aggregate";
    for (const char* key : {"instances", "solved", "mean_nodes", "mean_backtracks", "mean_seconds"}) {
      if (!s["aggregate"].contains(key) || !s["aggregate"][key].is_number()) return std::string("aggregate without ") + key;
    }
  }
  return "";
}

}  // namespace cfn
