#pragma once

#include <span>
#include <vector>

#include "cfn/among.hpp"
#include "cfn/global_function.hpp"

namespace cfn {

struct Transition {
  int from = 0;
  int symbol = 0;
  int to = 0;
  bool operator==(const Transition&) const = default;
};

// Nondeterministic finite automaton over value ids.
struct Automaton {
  int num_states = 1;
  int initial = 0;
  std::vector<int> finals;
  std::vector<Transition> transitions;

  bool is_final(int q) const;
  bool accepts(std::span<const int> word) const;
};

// Throws PreconditionError on out-of-range states or negative symbols.
void check_automaton(const Automaton& aut);

// Weighted automaton: start costs, dense transition costs and final costs.
struct WeightedAutomaton {
  int num_states = 1;
  int alphabet = 1;
  std::vector<Cost> start;
  std::vector<Cost> final;
  std::vector<Cost> sigma;  // (q * alphabet + w) * num_states + q2

  WeightedAutomaton() = default;
  WeightedAutomaton(int states, int alphabet_size);
  Cost transition(int q, int w, int q2) const;
  void set_transition(int q, int w, int q2, Cost c);
};

void check_automaton(const WeightedAutomaton& aut);

// Minimal Hamming distance from the tuple to a word of the language of the
// tuple's length; kInfinity when there is none.
Cost regular_cost(const Automaton& aut, std::span<const int> tuple);

// Minimal weight of a run reading the tuple.
Cost weighted_regular_cost(const WeightedAutomaton& aut, std::span<const int> tuple);

FilterDag regular_build_dag(const Automaton& aut, const Scope& scope, std::span<const int> sizes);
FilterDag weighted_regular_build_dag(const WeightedAutomaton& aut, const Scope& scope, std::span<const int> sizes);

SignedCost regular_min(const Automaton& aut, const Scope& scope, std::span<const Domain> domains,
                       const DeltaStore* shifts = nullptr);
SignedCost weighted_regular_min(const WeightedAutomaton& aut, const Scope& scope, std::span<const Domain> domains,
                                const DeltaStore* shifts = nullptr);

// sigma = 0 on transitions, 1 between states linked by another symbol, top
// otherwise; start 0 on the initial state, final 0 on accepting states.
WeightedAutomaton hamming_encoding(const Automaton& aut, int alphabet);

// Counting automaton whose run weights equal among_cost.
WeightedAutomaton among_automaton(const AmongSpec& spec, int alphabet);

class RegularFunction : public GlobalCostFunction {
 public:
  RegularFunction(Scope scope, std::vector<int> domain_sizes, Automaton aut);

  const Automaton& automaton() const { return aut_; }
  std::string kind() const override { return "regular"; }
  Cost reference_eval(std::span<const int> tuple) const override;
  SignedCost dedicated_minimum(std::span<const Domain> domains) override;
  std::unique_ptr<CostFunction> clone() const override;

 protected:
  FilterDag build_dag() const override;

 private:
  Automaton aut_;
};

class WeightedRegularFunction : public GlobalCostFunction {
 public:
  WeightedRegularFunction(Scope scope, std::vector<int> domain_sizes, WeightedAutomaton aut);

  const WeightedAutomaton& automaton() const { return aut_; }
  std::string kind() const override { return "wregular"; }
  Cost reference_eval(std::span<const int> tuple) const override;
  SignedCost dedicated_minimum(std::span<const Domain> domains) override;
  std::unique_ptr<CostFunction> clone() const override;

 protected:
  FilterDag build_dag() const override;

 private:
  WeightedAutomaton aut_;
};

}  // namespace cfn
