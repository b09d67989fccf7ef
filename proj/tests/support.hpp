#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cfn/among.hpp"
#include "cfn/ept.hpp"
#include "cfn/generators.hpp"
#include "cfn/grammar.hpp"
#include "cfn/model.hpp"
#include "cfn/regular.hpp"
#include "cfn/wmax.hpp"

namespace cfn::testing {

// Variables v0.. with d values each; unary costs in 0..4, tables of arity 2
// or 3 with costs in 0..9 and occasional top entries.
Cfn random_table_network(Rng& rng, int n, int d, int functions, Cost top = kInfinity);

Automaton random_automaton(Rng& rng, int states, int alphabet);
WeightedAutomaton random_weighted_automaton(Rng& rng, int states, int alphabet);
// At most `rules` productions over `symbols` nonterminals, at least one of
// them terminal.
CnfGrammar random_grammar(Rng& rng, int symbols, int alphabet, int rules);
AmongSpec random_among(Rng& rng, int n, int d);
WeightMap random_weights(Rng& rng, int n, int d);

// Random global function of the given kind over variables 0..n-1 with d values.
std::unique_ptr<GlobalCostFunction> random_global(Rng& rng, const std::string& kind, int n, int d);

// Removes random values, keeping every domain non-empty.
void thin_domains(Rng& rng, Cfn& cfn, int percent);

// Applies one random legal EPT: a unary projection or extension, a shift
// between a function and a unary cost, or a projection to W_zero.
void random_ept(Rng& rng, Cfn& cfn);

// Full observable state of a network: W_zero, unary costs, domains and the
// current cost of every tuple of every function.
struct NetworkState {
  Cost w_zero = 0;
  std::vector<std::vector<Cost>> unary;
  std::vector<Domain> domains;
  std::vector<std::vector<SignedCost>> tables;
  bool operator==(const NetworkState&) const = default;
};

NetworkState capture_state(const Cfn& cfn);

// Example grammar A0 -> A A; A -> a | A A | B C; B -> b | B B; C -> c | C C,
// over values a=0, b=1, c=2.
CnfGrammar example_grammar();

}  // namespace cfn::testing
