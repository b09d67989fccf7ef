#include <vector>

#include "cfn/generators.hpp"
#include "cfn/oracle.hpp"
#include "cfn/solver.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cfn;
using namespace cfn::testing;

namespace {

Cfn network_with_globals(Rng& rng, int n, int d) {
  Cfn cfn = random_table_network(rng, n, d, rng.uniform(1, 3));
  const char* kinds[] = {"among", "regular", "wregular", "grammar", "wmax", "wmin"};
  cfn.add_function(random_global(rng, kinds[rng.uniform(0, 5)], n, d));
  return cfn;
}

}  // namespace

TEST_CASE("unary-only network") {
  Cfn cfn;
  cfn.add_variable("x", 3);
  cfn.add_variable("y", 2);
  cfn.set_unary(0, 0, 4);
  cfn.set_unary(0, 1, 2);
  cfn.set_unary(0, 2, 5);
  cfn.set_unary(1, 0, 1);
  cfn.set_unary(1, 1, 0);
  const auto stats = solve(cfn);
  CHECK(stats.proved_optimal);
  CHECK(stats.best_cost == 2);
  CHECK(stats.best_assignment == std::vector<int>{1, 1});
}

TEST_CASE("infeasible and empty-domain networks") {
  Cfn cfn;
  cfn.add_variable("x", 2);
  auto table = std::make_unique<TableFunction>(Scope{0}, std::vector<int>{2}, kInfinity);
  cfn.add_function(std::move(table));
  auto stats = solve(cfn);
  CHECK(stats.proved_optimal);
  CHECK(stats.best_assignment.empty());

  Cfn empty;
  empty.add_variable("x", 1);
  empty.remove_value(0, 0);
  stats = solve(empty);
  CHECK(stats.proved_optimal);
  CHECK(stats.best_assignment.empty());
}

TEST_CASE("optimum matches enumeration on random networks") {
  Rng rng(61);
  const ConsistencyLevel levels[] = {ConsistencyLevel::nc, ConsistencyLevel::gac, ConsistencyLevel::gac_tdac};
  for (int trial = 0; trial < 120; ++trial) {
    const int n = rng.uniform(2, 5);
    const int d = rng.uniform(2, 3);
    Cfn cfn = trial % 2 == 0 ? random_table_network(rng, n, d, rng.uniform(1, 5), static_cast<Cost>(rng.uniform(15, 40)))
                             : network_with_globals(rng, n, d);
    const auto oracle = brute_force_solve(cfn);
    SearchConfig config;
    config.consistency = levels[trial % 3];
    config.route = trial % 4 < 2 ? MinRoute::dag : MinRoute::dedicated;
    const auto stats = solve(cfn, config);
    CHECK(stats.proved_optimal);
    if (oracle.cost >= cfn.top()) {
      CHECK(stats.best_assignment.empty());
    } else {
      REQUIRE(stats.best_assignment.size() == static_cast<std::size_t>(n));
      CHECK(stats.best_cost == oracle.cost);
      CHECK(eval_total(cfn, stats.best_assignment) == stats.best_cost);
    }
  }
}

TEST_CASE("car sequencing optimum matches enumeration") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Cfn cfn = gen_car_sequencing(5, seed, Model::dag);
    const auto oracle = brute_force_solve(cfn);
    const auto stats = solve(cfn);
    CHECK(stats.proved_optimal);
    CHECK(stats.best_cost == oracle.cost);
    const auto decomposed = solve(gen_car_sequencing(5, seed, Model::decomposition));
    CHECK(decomposed.best_cost == oracle.cost);
  }
}

TEST_CASE("assignment followed by undo restores the working network") {
  Rng rng(62);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.uniform(2, 4);
    const int d = rng.uniform(2, 3);
    Cfn cfn = network_with_globals(rng, n, d);
    SearchConfig config;
    config.consistency = trial % 2 == 0 ? ConsistencyLevel::gac : ConsistencyLevel::gac_tdac;
    SearchContext ctx(cfn, config);
    if (!ctx.propagate()) continue;
    const NetworkState before = capture_state(ctx.working());
    const auto mark = ctx.mark();
    const VarId x = rng.uniform(0, n - 1);
    const auto values = ctx.working().domain(x).values();
    ctx.assign_and_propagate(x, values[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(values.size()) - 1))]);
    ctx.undo(mark);
    CHECK(capture_state(ctx.working()) == before);
  }
}

TEST_CASE("node limit stops the search") {
  const Cfn cfn = gen_car_sequencing(8, 4, Model::dag);
  SearchConfig config;
  config.node_limit = 1;
  const auto stats = solve(cfn, config);
  CHECK(stats.node_limit_hit);
  CHECK_FALSE(stats.proved_optimal);
}

TEST_CASE("initial upper bound is strict") {
  Rng rng(63);
  Cfn cfn = random_table_network(rng, 4, 3, 4);
  const Cost optimum = brute_force_solve(cfn).cost;
  SearchConfig config;
  config.initial_ub = optimum;
  auto stats = solve(cfn, config);
  CHECK(stats.proved_optimal);
  CHECK(stats.best_assignment.empty());
  config.initial_ub = optimum + 1;
  stats = solve(cfn, config);
  CHECK(stats.best_cost == optimum);
}

TEST_CASE("decomposed nonogram with auxiliary variables") {
  const Cfn cfn = gen_nonogram(3, 2, Model::decomposition);
  SearchContext ctx(cfn, SearchConfig{});
  CHECK(ctx.tdac_order().size() == static_cast<std::size_t>(cfn.num_variables()));
  const auto stats = solve(cfn);
  CHECK(stats.proved_optimal);
  CHECK(eval_total(cfn, stats.best_assignment) == stats.best_cost);
}
