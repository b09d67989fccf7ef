#include <set>
#include <string>

#include "cfn/benchmark.hpp"
#include "cfn/decompose.hpp"
#include "cfn/generators.hpp"
#include "cfn/instance.hpp"
#include "cfn/oracle.hpp"
#include "cfn/solver.hpp"
#include "doctest.h"

using namespace cfn;

namespace {

std::set<std::string> accepted_words(const Automaton& aut, int width) {
  std::set<std::string> out;
  Scope scope;
  for (int i = 0; i < width; ++i) scope.push_back(i);
  for_each_tuple(scope, full_domains(std::vector<int>(static_cast<std::size_t>(width), 2)), [&](std::span<const int> t) {
    if (aut.accepts(t)) {
      std::string word;
      for (int v : t) word += static_cast<char>('0' + v);
      out.insert(word);
    }
    return true;
  });
  return out;
}

}  // namespace

TEST_CASE("family names") {
  for (Family family : {Family::car_seq, Family::nonogram, Family::parens, Family::market_split}) {
    CHECK(parse_family(family_name(family)) == family);
  }
  CHECK_FALSE(parse_family("sudoku").has_value());
}

TEST_CASE("generation is deterministic in the seed") {
  for (Family family : {Family::car_seq, Family::nonogram, Family::parens, Family::market_split}) {
    GenSpec spec;
    spec.family = family;
    spec.size = 5;
    spec.seed = 9;
    const std::string first = emit_instance(generate(spec));
    CHECK(emit_instance(generate(spec)) == first);
    spec.seed = 10;
    CHECK(emit_instance(generate(spec)) != first);
  }
}

TEST_CASE("segment automaton") {
  CHECK(accepted_words(segment_automaton({1}), 3) == std::set<std::string>{"100", "010", "001"});
  CHECK(accepted_words(segment_automaton({}), 3) == std::set<std::string>{"000"});
  CHECK(accepted_words(segment_automaton({1, 1}), 3) == std::set<std::string>{"101"});
  CHECK(accepted_words(segment_automaton({2}), 3) == std::set<std::string>{"110", "011"});
  CHECK_THROWS_AS(segment_automaton({0}), PreconditionError);
}

TEST_CASE("bracket grammar") {
  const auto g = bracket_grammar(3);
  CHECK(grammar_cost(g, std::vector<int>{0, 1, 2, 3}) == 0);
  CHECK(grammar_cost(g, std::vector<int>{0, 2, 3, 1}) == 0);
  CHECK(grammar_cost(g, std::vector<int>{0, 3}) == 1);
  CHECK(grammar_cost(g, std::vector<int>{1, 0}) == 2);
  CHECK(grammar_cost(g, std::vector<int>{0, 1, 4}, kInfinity) == kInfinity);
}

TEST_CASE("car sequencing structure") {
  const Cfn cfn = gen_car_sequencing(6, 3);
  CHECK(cfn.num_variables() == 6);
  for (int i = 0; i < cfn.num_functions(); ++i) {
    const auto& func = dynamic_cast<const AmongFunction&>(cfn.function(i));
    CHECK(func.spec().lb <= func.spec().ub);
    CHECK(func.spec().ub <= func.arity());
    CHECK_FALSE(func.spec().values.empty());
  }
  const Cfn flat = gen_car_sequencing(6, 3, Model::decomposition);
  for (int i = 0; i < flat.num_functions(); ++i) CHECK(flat.function(i).kind() == "table");
}

TEST_CASE("nonogram structure") {
  const Cfn cfn = gen_nonogram(3, 1);
  CHECK(cfn.num_variables() == 9);
  CHECK(cfn.num_functions() == 6);
  for (int i = 0; i < cfn.num_functions(); ++i) {
    CHECK(cfn.function(i).kind() == "regular");
    CHECK(cfn.function(i).arity() == 3);
  }
}

TEST_CASE("parentheses structure") {
  const Cfn soft = gen_parentheses(3, 2);
  CHECK(soft.num_variables() == 6);
  int full = 0;
  for (int i = 0; i < soft.num_functions(); ++i) {
    const auto& func = soft.function(i);
    CHECK(func.kind() == "grammar");
    CHECK(func.arity() % 2 == 0);
    full += func.arity() == 6 ? 1 : 0;
  }
  CHECK(full >= 1);
  const Cfn hard = gen_parentheses(2, 2, ParensMode::hard);
  CHECK(hard.function(0).kind() == "grammar");
  CHECK(hard.num_functions() == 1 + 6);
  const auto stats = solve(hard);
  REQUIRE_FALSE(stats.best_assignment.empty());
  CHECK(grammar_cost(bracket_grammar(3), stats.best_assignment, kInfinity) == 0);
}

TEST_CASE("market split structure") {
  const Cfn one = gen_market_split(6, 1, 4);
  CHECK(berge_acyclic_check(one));
  for (int i = 0; i < one.num_functions(); ++i) CHECK(one.function(i).kind() == "table");

  // Even coefficients with an odd right-hand side admit no solution.
  Cfn odd;
  for (int i = 0; i < 5; ++i) odd.add_variable("x" + std::to_string(i), 2);
  const std::vector<int> coeffs(5, 2);
  embed(odd, Scope{0, 1, 2, 3, 4}, decompose_linear_sum(coeffs, 5, Relation::eq, std::vector<int>(5, 2)), "s.");
  const auto stats = solve(odd);
  CHECK(stats.proved_optimal);
  CHECK(stats.best_assignment.empty());
}

TEST_CASE("generated instances solve to the enumerated optimum") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Cfn instances[] = {gen_car_sequencing(4, seed), gen_nonogram(3, seed), gen_parentheses(2, seed),
                             gen_parentheses(2, seed, ParensMode::hard), gen_market_split(6, 2, seed)};
    for (const auto& cfn : instances) {
      const auto stats = solve(cfn);
      CHECK(stats.proved_optimal);
      CHECK(stats.best_cost == brute_force_solve(cfn).cost);
    }
  }
}

TEST_CASE("both models reach the same optimum") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    CHECK(solve(gen_nonogram(4, seed, Model::dag)).best_cost == solve(gen_nonogram(4, seed, Model::decomposition)).best_cost);
    CHECK(solve(gen_car_sequencing(5, seed, Model::dag)).best_cost ==
          solve(gen_car_sequencing(5, seed, Model::decomposition)).best_cost);
  }
}

TEST_CASE("benchmark report") {
  BenchOptions options;
  options.family = Family::nonogram;
  options.sizes = {3, 4};
  options.repetitions = 2;
  auto report = run_benchmark(options);
  CHECK(validate_report(report) == "");
  REQUIRE(report["settings"].size() == 2);
  CHECK(report["settings"][0]["aggregate"]["solved"] == 2);
  CHECK(report["settings"][1]["instances"][1]["seed"] == 2);

  options.sizes.clear();
  const auto empty = run_benchmark(options);
  CHECK(validate_report(empty) == "");
  CHECK(empty["settings"].empty());

  report["settings"][0]["instances"][0].erase("nodes");
  CHECK(validate_report(report) != "");
  CHECK(validate_report(nlohmann::ordered_json::array()) != "");
}
