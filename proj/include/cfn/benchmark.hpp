#pragma once

#include <cstdint>
#include <vector>

#include "cfn/generators.hpp"
#include "cfn/solver.hpp"
#include "json.hpp"

namespace cfn {

struct BenchOptions {
  Family family = Family::car_seq;
  std::vector<int> sizes;
  int repetitions = 5;
  std::uint64_t base_seed = 1;
  int constraints = 1;
  Model model = Model::dag;
  ParensMode parens = ParensMode::soft;
  SearchConfig search;
};

// Instance seeds are base_seed + repetition index, shared across sizes.
// Report layout: {"family", "model", "settings": [{"size", "instances":
// [{"seed", "solved", "optimum", "nodes", "backtracks", "seconds"}],
// "aggregate": {"instances", "solved", "mean_nodes", "mean_backtracks",
// "mean_seconds"}}]}. optimum is null when no solution was found.
nlohmann::ordered_json run_benchmark(const BenchOptions& options);

// Checks the report layout above; returns an empty string when valid.
std::string validate_report(const nlohmann::ordered_json& report);

}  // namespace cfn
