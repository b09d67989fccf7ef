#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cfn/benchmark.hpp"
#include "cfn/consistency.hpp"
#include "cfn/decompose.hpp"
#include "cfn/generators.hpp"
#include "cfn/instance.hpp"
#include "cfn/solver.hpp"
#include "json.hpp"

namespace {

using namespace cfn;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLimit = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string cost_text(Cost c) { return c >= kInfinity ? "inf" : std::to_string(c); }

GlobalCostFunction& global_function(Cfn& cfn, int id) {
  if (id < 0 || id >= cfn.num_functions()) throw UsageError("no function with id " + std::to_string(id));
  auto* g = dynamic_cast<GlobalCostFunction*>(&cfn.function(id));
  if (!g) throw UsageError("function " + std::to_string(id) + " is not a global function");
  return *g;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

int run_solve(const std::string& file, const std::string& level, std::optional<Cost> ub, std::uint64_t node_limit,
              const std::string& route, bool json) {
  const Cfn cfn = load_instance(file);
  SearchConfig config;
  if (level == "nc") config.consistency = ConsistencyLevel::nc;
  else if (level == "gac") config.consistency = ConsistencyLevel::gac;
  else config.consistency = ConsistencyLevel::gac_tdac;
  config.route = route == "dedicated" ? MinRoute::dedicated : MinRoute::dag;
  config.initial_ub = ub;
  config.node_limit = node_limit;
  const SearchStats stats = solve(cfn, config);
  const bool found = !stats.best_assignment.empty();
  if (json) {
    Json out;
    out["optimum"] = found ? Json(stats.best_cost) : Json(nullptr);
    out["proved_optimal"] = stats.proved_optimal;
    out["node_limit_hit"] = stats.node_limit_hit;
    out["nodes"] = stats.nodes;
    out["backtracks"] = stats.backtracks;
    Json assignment = Json::object();
    if (found) {
      for (VarId x = 0; x < cfn.num_variables(); ++x) {
        if (cfn.variable(x).auxiliary) continue;
        assignment[cfn.variable(x).name] = cfn.variable(x).labels[static_cast<std::size_t>(stats.best_assignment[static_cast<std::size_t>(x)])];
      }
    }
    out["assignment"] = assignment;
    std::cout << out.dump(1) << "\n";
  } else {
    std::cout << "optimum " << (found ? cost_text(stats.best_cost) : "none") << (stats.proved_optimal ? " (proved)" : "")
              << "\nnodes " << stats.nodes << "\nbacktracks " << stats.backtracks << "\n";
    if (found) {
      for (VarId x = 0; x < cfn.num_variables(); ++x) {
        if (cfn.variable(x).auxiliary) continue;
        std::cout << cfn.variable(x).name << " = "
                  << cfn.variable(x).labels[static_cast<std::size_t>(stats.best_assignment[static_cast<std::size_t>(x)])]
                  << "\n";
      }
    }
  }
  if (stats.node_limit_hit) return kExitLimit;
  return found ? kExitOk : kExitFalse;
}

int run_min(const std::string& file, int id) {
  Cfn cfn = load_instance(file);
  auto& fn = global_function(cfn, id);
  const SignedCost by_dag = fn.dag().minimum(cfn.domains());
  const SignedCost by_dp = fn.dedicated_minimum(cfn.domains());
  std::cout << "kind " << fn.kind() << "\ndag " << (is_inf(by_dag) ? "inf" : std::to_string(by_dag)) << "\ndedicated "
            << (is_inf(by_dp) ? "inf" : std::to_string(by_dp)) << "\n";
  if (by_dag != by_dp) {
    std::cout << "DISAGREE\n";
    return kExitFalse;
  }
  return kExitOk;
}

int run_check(const std::string& file, const std::string& property) {
  const Cfn cfn = load_instance(file);
  bool holds = false;
  if (property == "nc") {
    holds = is_nc_star(cfn);
  } else if (property == "gac") {
    holds = is_gac_star(cfn);
  } else if (property == "tdac") {
    std::vector<VarId> order(static_cast<std::size_t>(cfn.num_variables()));
    for (VarId x = 0; x < cfn.num_variables(); ++x) order[static_cast<std::size_t>(x)] = cfn.num_variables() - 1 - x;
    holds = is_tdac(cfn, order);
  } else {
    holds = vac_check(cfn);
  }
  std::cout << property << " " << (holds ? "true" : "false") << "\n";
  return holds ? kExitOk : kExitFalse;
}

Model parse_model(const std::string& name) { return name == "decomposition" ? Model::decomposition : Model::dag; }

int run_generate(const std::string& family, int size, int constraints, std::uint64_t seed, const std::string& model,
                 const std::string& mode, const std::string& out) {
  GenSpec spec;
  spec.family = *parse_family(family);
  spec.size = size;
  spec.constraints = constraints;
  spec.seed = seed;
  spec.model = parse_model(model);
  spec.parens = mode == "hard" ? ParensMode::hard : ParensMode::soft;
  write_text(out, emit_instance(generate(spec)));
  return kExitOk;
}

int run_decompose(const std::string& file, int id, bool spliced, const std::string& out) {
  Cfn cfn = load_instance(file);
  const auto& fn = global_function(cfn, id);
  const Decomposition dec = decompose_function(fn);
  if (spliced) {
    write_text(out, emit_instance(splice(cfn, id, dec)));
    return kExitOk;
  }
  // Standalone network over the function scope, named after the host variables.
  Cfn standalone(cfn.top(), cfn.name() + "-f" + std::to_string(id));
  for (VarId x : fn.scope()) standalone.add_variable(cfn.variable(x).name, cfn.variable(x).labels);
  Scope scope(fn.scope().size());
  for (std::size_t i = 0; i < scope.size(); ++i) scope[i] = static_cast<VarId>(i);
  embed(standalone, scope, dec, "");
  write_text(out, emit_instance(standalone));
  return kExitOk;
}

int run_bench(const std::string& family, const std::vector<int>& sizes, int reps, std::uint64_t seed, int constraints,
              const std::string& model, const std::string& mode, std::uint64_t node_limit, const std::string& out) {
  BenchOptions options;
  options.family = *parse_family(family);
  options.sizes = sizes;
  options.repetitions = reps;
  options.base_seed = seed;
  options.constraints = constraints;
  options.model = parse_model(model);
  options.parens = mode == "hard" ? ParensMode::hard : ParensMode::soft;
  options.search.node_limit = node_limit;
  write_text(out, run_benchmark(options).dump(1) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cfnkit: cost function networks with global cost functions"};
  app.require_subcommand(1);
  const std::vector<std::string> families{"car-seq", "nonogram", "parens", "market-split"};

  std::string file;
  std::string out;
  std::string level = "gac+tdac";
  std::string route = "dag";
  std::optional<Cost> ub;
  std::uint64_t node_limit = 10'000'000;
  bool json = false;
  auto* solve_cmd = app.add_subcommand("solve", "Branch and bound to optimality");
  solve_cmd->add_option("file", file, "Instance file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--consistency", level, "nc, gac or gac+tdac")
      ->check(CLI::IsMember({"nc", "gac", "gac+tdac"}));
  solve_cmd->add_option("--ub", ub, "Initial upper bound");
  solve_cmd->add_option("--node-limit", node_limit, "Search node limit")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--route", route, "Global function minimization: dag or dedicated")
      ->check(CLI::IsMember({"dag", "dedicated"}));
  solve_cmd->add_flag("--json", json, "Print a JSON result");

  int function_id = -1;
  auto* min_cmd = app.add_subcommand("min", "Minimum of a global function via its DAG and its dedicated algorithm");
  min_cmd->add_option("file", file, "Instance file")->required()->check(CLI::ExistingFile);
  min_cmd->add_option("--function", function_id, "Function index")->required();

  std::string property;
  auto* check_cmd = app.add_subcommand("check", "Test a local consistency property");
  check_cmd->add_option("file", file, "Instance file")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--property", property, "nc, gac, tdac or vac")
      ->required()
      ->check(CLI::IsMember({"nc", "gac", "tdac", "vac"}));

  std::string family;
  int size = 0;
  int constraints = 1;
  std::uint64_t seed = 1;
  std::string model = "dag";
  std::string mode = "soft";
  auto* gen_cmd = app.add_subcommand("generate", "Generate a benchmark instance");
  gen_cmd->add_option("--family", family, "car-seq, nonogram, parens or market-split")
      ->required()
      ->check(CLI::IsMember(families));
  gen_cmd->add_option("--size", size, "Size parameter")->required();
  gen_cmd->add_option("--constraints", constraints, "Equalities of a market-split instance");
  gen_cmd->add_option("--seed", seed, "Random seed");
  gen_cmd->add_option("--model", model, "dag or decomposition")->check(CLI::IsMember({"dag", "decomposition"}));
  gen_cmd->add_option("--mode", mode, "Parentheses mode: soft or hard")->check(CLI::IsMember({"soft", "hard"}));
  gen_cmd->add_option("--out", out, "Output file (default stdout)");

  bool spliced = false;
  auto* dec_cmd = app.add_subcommand("decompose", "Write the bounded-arity decomposition of a global function");
  dec_cmd->add_option("file", file, "Instance file")->required()->check(CLI::ExistingFile);
  dec_cmd->add_option("--function", function_id, "Function index")->required();
  dec_cmd->add_flag("--splice", spliced, "Write the whole network with the function replaced");
  dec_cmd->add_option("--out", out, "Output file (default stdout)");

  std::vector<int> sizes;
  int reps = 5;
  auto* bench_cmd = app.add_subcommand("bench", "Solve generated instances and print a JSON report");
  bench_cmd->add_option("--family", family, "Benchmark family")->required()->check(CLI::IsMember(families));
  bench_cmd->add_option("--sizes", sizes, "Size parameters")->delimiter(',');
  bench_cmd->add_option("--reps", reps, "Instances per size")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--seed", seed, "Seed of the first instance");
  bench_cmd->add_option("--constraints", constraints, "Equalities of market-split instances");
  bench_cmd->add_option("--model", model, "dag or decomposition")->check(CLI::IsMember({"dag", "decomposition"}));
  bench_cmd->add_option("--mode", mode, "Parentheses mode")->check(CLI::IsMember({"soft", "hard"}));
  bench_cmd->add_option("--node-limit", node_limit, "Search node limit per instance")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return run_solve(file, level, ub, node_limit, route, json);
    if (*min_cmd) return run_min(file, function_id);
    if (*check_cmd) return run_check(file, property);
    if (*gen_cmd) return run_generate(family, size, constraints, seed, model, mode, out);
    if (*dec_cmd) return run_decompose(file, function_id, spliced, out);
    if (*bench_cmd) return run_bench(family, sizes, reps, seed, constraints, model, mode, node_limit, out);
  } catch (const CapExceeded& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitLimit;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
