#include <algorithm>
#include <vector>

#include "cfn/among.hpp"
#include "cfn/grammar.hpp"
#include "cfn/oracle.hpp"
#include "cfn/regular.hpp"
#include "cfn/wmax.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cfn;
using namespace cfn::testing;

namespace {

constexpr int sym_a = 0;
constexpr int sym_b = 1;
constexpr int sym_c = 2;
constexpr int sym_d = 3;

Automaton a_star() {
  Automaton aut;
  aut.num_states = 1;
  aut.initial = 0;
  aut.finals = {0};
  aut.transitions = {{0, sym_a, 0}};
  return aut;
}

std::vector<Domain> singletons(std::span<const int> tuple, int size) {
  std::vector<Domain> out;
  for (int v : tuple) {
    Domain dom(size);
    for (int other = 0; other < size; ++other) {
      if (other != v) dom.remove(other);
    }
    out.push_back(dom);
  }
  return out;
}

// Dedicated and DAG minima and conditioned minima against enumeration.
void check_against_oracle(GlobalCostFunction& func, std::span<const Domain> domains) {
  const Cost expected = brute_force_min(func, domains).cost;
  CHECK(to_cost(func.dedicated_minimum(domains)) == expected);
  CHECK(to_cost(func.dag().minimum(domains)) == expected);
  func.set_route(MinRoute::dag);
  for (int pos = 0; pos < func.arity(); ++pos) {
    const auto by_dag = func.conditioned_minima(pos, domains);
    const auto by_dp = func.dedicated_conditioned_minima(pos, domains);
    for (int v = 0; v < func.domain_sizes()[static_cast<std::size_t>(pos)]; ++v) {
      const Cost oracle = brute_force_conditioned_min(func, domains, pos, v);
      CHECK(to_cost(by_dag[static_cast<std::size_t>(v)]) == oracle);
      CHECK(to_cost(by_dp[static_cast<std::size_t>(v)]) == oracle);
    }
  }
}

}  // namespace

TEST_CASE("among costs of the worked example") {
  const auto spec = make_among({0, 1, 2, 3}, {sym_a, sym_b}, 1, 2);
  CHECK(among_cost(spec, std::vector<int>{sym_a, sym_b, sym_c, sym_d}) == 0);
  CHECK(among_cost(spec, std::vector<int>{sym_c, sym_d, sym_c, sym_d}) == 1);
  CHECK(among_cost(spec, std::vector<int>{sym_a, sym_b, sym_a, sym_b}) == 2);
}

TEST_CASE("among parameter validation") {
  CHECK(make_among({0, 1}, {0}, 0, 5).ub == 2);
  CHECK_THROWS_AS(make_among({0, 1}, {0}, 2, 1), PreconditionError);
  CHECK_THROWS_AS(make_among({0, 1}, {0}, -1, 1), PreconditionError);
}

TEST_CASE("among minimum") {
  const std::vector<int> sizes{4, 4, 4, 4};
  const auto full = full_domains(sizes);
  SUBCASE("worked example over full domains") {
    const auto spec = make_among({0, 1, 2, 3}, {sym_a, sym_b}, 1, 2);
    CHECK(among_min(spec, full) == 0);
    AmongFunction func(spec, sizes);
    check_against_oracle(func, full);
  }
  SUBCASE("domains inside the value set") {
    auto domains = full;
    for (auto& dom : domains) {
      dom.remove(sym_c);
      dom.remove(sym_d);
    }
    CHECK(among_min(make_among({0, 1, 2, 3}, {sym_a, sym_b}, 0, 4), domains) == 0);
  }
  SUBCASE("value set excluded from every domain") {
    auto domains = full;
    for (auto& dom : domains) {
      dom.remove(sym_a);
      dom.remove(sym_b);
    }
    CHECK(among_min(make_among({0, 1, 2, 3}, {sym_a, sym_b}, 4, 4), domains) == 4);
  }
}

TEST_CASE("among DAG with lb = ub = 0 is a chain of complement leaves") {
  auto dag = among_build_dag(make_among({0, 1, 2}, {sym_a}, 0, 0), std::vector<int>{2, 2, 2});
  CHECK_NOTHROW(dag.validate());
  for (int id = 0; id < dag.size(); ++id) CHECK(dag.node(id).kind != DagNodeKind::min);
  CHECK(dag.minimum(full_domains(std::vector<int>{2, 2, 2})) == 0);
}

TEST_CASE("among DAG evaluates tuples like the closed form") {
  Rng rng(41);
  const std::vector<int> sizes{3, 3, 3, 3};
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = random_among(rng, 4, 3);
    auto dag = among_build_dag(spec, sizes);
    std::vector<int> tuple(4);
    for (auto& v : tuple) v = rng.uniform(0, 2);
    CHECK(to_cost(dag.minimum(singletons(tuple, 3))) == among_cost(spec, tuple));
    CHECK(to_cost(dag.evaluate(tuple)) == among_cost(spec, tuple));
  }
}

TEST_CASE("regular costs") {
  const auto aut = a_star();
  CHECK(regular_cost(aut, std::vector<int>{sym_a, sym_a, sym_a}) == 0);
  CHECK(regular_cost(aut, std::vector<int>{sym_a, sym_b, sym_a}) == 1);
  CHECK(regular_cost(aut, std::vector<int>{sym_b, sym_b, sym_b}) == 3);
  CHECK(aut.accepts(std::vector<int>{sym_a, sym_a}));
  CHECK_FALSE(aut.accepts(std::vector<int>{sym_a, sym_b}));
}

TEST_CASE("regular minimum") {
  const std::vector<int> sizes{2, 2, 2};
  SUBCASE("single-state loop accepting everything") {
    Automaton all;
    all.finals = {0};
    all.transitions = {{0, sym_a, 0}, {0, sym_b, 0}};
    CHECK(regular_min(all, {0, 1, 2}, full_domains(sizes)) == 0);
  }
  SUBCASE("domains forcing mismatches") {
    auto domains = full_domains(sizes);
    for (auto& dom : domains) dom.remove(sym_a);
    CHECK(regular_min(a_star(), {0, 1, 2}, domains) == 3);
    auto dag = regular_build_dag(a_star(), {0, 1, 2}, sizes);
    CHECK(dag.minimum(domains) == 3);
  }
  SUBCASE("no final state") {
    Automaton none = a_star();
    none.finals.clear();
    auto dag = regular_build_dag(none, {0, 1, 2}, sizes);
    CHECK(is_inf(dag.minimum(full_domains(sizes))));
    CHECK(regular_cost(none, std::vector<int>{sym_a, sym_a, sym_a}) == kInfinity);
  }
}

TEST_CASE("grammar costs of the worked example") {
  const auto grammar = example_grammar();
  CHECK(grammar_cost(grammar, std::vector<int>{sym_c, sym_a, sym_b, sym_c}) == 1);
  CHECK(grammar_cost(grammar, std::vector<int>{sym_a, sym_a, sym_b, sym_c}) == 0);
  CHECK(grammar_cost(grammar, std::vector<int>{sym_c, sym_a, sym_b, sym_c}, kInfinity) == kInfinity);
}

TEST_CASE("grammar generating only bb") {
  std::vector<Production> rules{{0, {GrammarSymbol{false, 1}, GrammarSymbol{false, 1}}}, {1, {GrammarSymbol{true, sym_b}}}};
  const auto grammar = make_cnf_grammar(2, 0, rules);
  CHECK(grammar_cost(grammar, std::vector<int>{sym_b, sym_b}) == 0);
  CHECK(grammar_cost(grammar, std::vector<int>{sym_a, sym_b}) == 1);
}

TEST_CASE("grammar input must be in normal form") {
  std::vector<Production> unit{{0, {GrammarSymbol{false, 1}}}};
  CHECK_THROWS_AS(make_cnf_grammar(2, 0, unit), NotCnfError);
  std::vector<Production> mixed{{0, {GrammarSymbol{true, sym_a}, GrammarSymbol{false, 0}}}};
  CHECK_THROWS_AS(make_cnf_grammar(1, 0, mixed), NotCnfError);
}

TEST_CASE("grammar minimum") {
  const auto grammar = example_grammar();
  const Scope scope{0, 1, 2, 3};
  const std::vector<int> sizes{3, 3, 3, 3};
  CHECK(grammar_min(grammar, scope, full_domains(sizes)) == 0);
  const std::vector<int> cabc{sym_c, sym_a, sym_b, sym_c};
  CHECK(grammar_min(grammar, scope, singletons(cabc, 3)) == 1);
  GrammarFunction func(scope, sizes, grammar);
  check_against_oracle(func, full_domains(sizes));

  std::vector<Production> orphan{{1, {GrammarSymbol{true, sym_a}}}};
  const auto unreachable = make_cnf_grammar(2, 0, orphan);
  CHECK(is_inf(grammar_min(unreachable, {0, 1}, full_domains(std::vector<int>{3, 3}))));
}

TEST_CASE("grammar DAG for a single terminal rule") {
  std::vector<Production> rules{{0, {GrammarSymbol{true, sym_a}}}};
  auto dag = grammar_build_dag(make_cnf_grammar(1, 0, rules), {0}, std::vector<int>{2});
  CHECK_NOTHROW(dag.validate());
  CHECK(dag.minimum(full_domains(std::vector<int>{2})) == 0);
}

TEST_CASE("grammar conditioned minima") {
  const auto grammar = example_grammar();
  const Scope scope{0, 1, 2, 3};
  const std::vector<int> sizes{4, 4, 4, 4};
  GrammarFunction func(scope, sizes, grammar);
  const auto domains = full_domains(sizes);
  // Value 3 has no terminal rule.
  for (int pos = 0; pos < 4; ++pos) {
    const auto minima = func.dedicated_conditioned_minima(pos, domains);
    CHECK(minima[3] == 1);
    CHECK(*std::min_element(minima.begin(), minima.end()) == func.dedicated_minimum(domains));
  }
  GrammarFunction hard(scope, sizes, grammar, kInfinity);
  CHECK(is_inf(hard.dedicated_conditioned_minima(0, domains)[3]));
}

TEST_CASE("grammar tables stay exact under shifts") {
  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.uniform(1, 5);
    const int dsize = rng.uniform(1, 3);
    auto fptr = random_global(rng, "grammar", n, dsize);
    auto& func = dynamic_cast<GrammarFunction&>(*fptr);
    auto domains = full_domains(func.domain_sizes());
    for (int step = 0; step < 8; ++step) {
      const int pos = rng.uniform(0, n - 1);
      const auto minima = func.dedicated_conditioned_minima(pos, domains);
      const int v = rng.uniform(0, dsize - 1);
      if (!is_inf(minima[static_cast<std::size_t>(v)]) && minima[static_cast<std::size_t>(v)] > 0) {
        func.shift(pos, v, minima[static_cast<std::size_t>(v)]);
      } else {
        func.shift(pos, v, -rng.uniform(1, 3));
      }
      if (rng.uniform(0, 3) == 0) {
        auto& dom = domains[static_cast<std::size_t>(rng.uniform(0, n - 1))];
        const int gone = rng.uniform(0, dsize - 1);
        if (dom.contains(gone) && dom.size() > 1) dom.remove(gone);
      }
      CHECK(func.dedicated_minimum(domains) == grammar_min(func.grammar(), func.scope(), domains, &func.shifts(), func.mismatch()));
      check_against_oracle(func, domains);
    }
  }
}

TEST_CASE("weighted maximum and minimum of the worked example") {
  WeightMap weights(3, std::vector<Cost>(5));
  for (auto& row : weights) {
    for (int v = 0; v < 5; ++v) row[static_cast<std::size_t>(v)] = static_cast<Cost>(3 * v);
  }
  CHECK(wmax_cost(weights, std::vector<int>{1, 2, 3}) == 9);
  CHECK(wmax_cost(weights, std::vector<int>{3, 4, 2}) == 12);
  CHECK(wmin_cost(weights, std::vector<int>{3, 4, 2}) == 6);

  auto domains = full_domains(std::vector<int>{5, 5, 5});
  const std::vector<std::vector<int>> keep{{1, 3}, {2, 4}, {2, 3}};
  for (int i = 0; i < 3; ++i) {
    for (int v = 0; v < 5; ++v) {
      if (std::find(keep[static_cast<std::size_t>(i)].begin(), keep[static_cast<std::size_t>(i)].end(), v) ==
          keep[static_cast<std::size_t>(i)].end()) {
        domains[static_cast<std::size_t>(i)].remove(v);
      }
    }
  }
  const Scope scope{0, 1, 2};
  CHECK(wmax_min(weights, scope, domains) == 6);
  auto dag = wmax_build_dag(weights, scope);
  CHECK_NOTHROW(dag.validate());
  CHECK(dag.minimum(domains) == 6);
  CHECK(dag.evaluate(std::vector<int>{1, 2, 3}) == 9);

  // Rows derived from the recursive guard definition on the tuple (1, 2, 3).
  const auto rows = wmax_sweep_table(weights, scope, domains, std::vector<int>{1, 2, 3});
  const SignedCost kTop = kSignedInf;
  const std::vector<Cost> alphas{0, 3, 6, 6, 9, 9, 12};
  const std::vector<SignedCost> selectors{kTop, 3, 6, kTop, kTop, 9, kTop};
  const std::vector<std::vector<SignedCost>> guards{{kTop, kTop, kTop}, {0, kTop, kTop}, {0, 0, kTop}, {0, 0, kTop},
                                                    {0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  REQUIRE(rows.size() == alphas.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].alpha == alphas[k]);
    CHECK(rows[k].selector == selectors[k]);
    CHECK(rows[k].guards == guards[k]);
  }
  CHECK_FALSE(rows[0].pair.has_value());
}

TEST_CASE("constant weights") {
  WeightMap weights(3, std::vector<Cost>(2, 4));
  CHECK(wmax_cost(weights, std::vector<int>{0, 1, 0}) == 4);
  CHECK(wmin_cost(weights, std::vector<int>{1, 1, 0}) == 4);
  CHECK(wmax_min(weights, {0, 1, 2}, full_domains(std::vector<int>{2, 2, 2})) == 4);
}

TEST_CASE("one variable minimum is the smallest weight") {
  WeightMap weights{{7, 2, 5}};
  CHECK(wmax_min(weights, {0}, full_domains(std::vector<int>{3})) == 2);
  CHECK(wmin_min(weights, {0}, full_domains(std::vector<int>{3})) == 2);
}

TEST_CASE("minimum of weights mirrors the maximum") {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform(1, 4);
    const int dsize = rng.uniform(1, 4);
    const auto weights = random_weights(rng, n, dsize);
    WeightMap mirrored = weights;
    for (auto& row : mirrored) {
      for (auto& x : row) x = 12 - x;
    }
    std::vector<int> tuple(static_cast<std::size_t>(n));
    for (auto& v : tuple) v = rng.uniform(0, dsize - 1);
    CHECK(wmin_cost(weights, tuple) == 12 - wmax_cost(mirrored, tuple));
  }
}

TEST_CASE("among compiled to a counting automaton gives the same costs") {
  Rng rng(44);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.uniform(1, 4);
    const int dsize = rng.uniform(1, 3);
    const auto spec = random_among(rng, n, dsize);
    const auto aut = among_automaton(spec, dsize);
    for_each_tuple(spec.scope, full_domains(std::vector<int>(static_cast<std::size_t>(n), dsize)),
                   [&](std::span<const int> t) {
                     CHECK(weighted_regular_cost(aut, t) == among_cost(spec, t));
                     return true;
                   });
  }
}

TEST_CASE("every global function agrees with the oracle on random instances") {
  Rng rng(45);
  const char* kinds[] = {"among", "regular", "wregular", "grammar", "wmax", "wmin"};
  for (int trial = 0; trial < 180; ++trial) {
    const int n = rng.uniform(1, 5);
    const int dsize = rng.uniform(1, 3);
    auto func = random_global(rng, kinds[trial % 6], n, dsize);
    auto domains = full_domains(func->domain_sizes());
    for (auto& dom : domains) {
      for (int v : dom.values()) {
        if (dom.size() > 1 && rng.uniform(0, 3) == 0) dom.remove(v);
      }
    }
    check_against_oracle(*func, domains);
    std::vector<int> tuple(static_cast<std::size_t>(n));
    for (auto& v : tuple) v = rng.uniform(0, dsize - 1);
    CHECK(to_cost(func->dedicated_minimum(singletons(tuple, dsize))) == func->reference_eval(tuple));
  }
}
