#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfn/global_function.hpp"

namespace cfn {

class NotCnfError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

struct TerminalRule {
  int lhs = 0;
  int value = 0;
  bool operator==(const TerminalRule&) const = default;
};

struct BinaryRule {
  int lhs = 0;
  int left = 0;
  int right = 0;
  bool operator==(const BinaryRule&) const = default;
};

// Context-free grammar in Chomsky normal form. Nonterminals are 0..num_symbols-1,
// terminals are value ids.
struct CnfGrammar {
  int num_symbols = 1;
  int start = 0;
  std::vector<TerminalRule> terminals;
  std::vector<BinaryRule> binaries;
  std::vector<std::string> names;
};

// Right-hand side item of a general production.
struct GrammarSymbol {
  bool terminal = false;
  int id = 0;
};

struct Production {
  int lhs = 0;
  std::vector<GrammarSymbol> rhs;
};

// Accepts only A -> a and A -> B C productions; throws NotCnfError otherwise.
CnfGrammar make_cnf_grammar(int num_symbols, int start, const std::vector<Production>& rules,
                            std::vector<std::string> names = {});

void check_grammar(const CnfGrammar& g);

// Minimal cost of deriving the tuple when each position pays `mismatch` for
// holding a value other than the derived terminal. mismatch = 1 gives the
// Hamming distance to the language, kInfinity gives membership.
Cost grammar_cost(const CnfGrammar& g, std::span<const int> tuple, Cost mismatch = 1);

FilterDag grammar_build_dag(const CnfGrammar& g, const Scope& scope, std::span<const int> sizes, Cost mismatch = 1);

// Inside tables (leaf and span costs) and outside tables of the weighted CYK.
class GrammarPropagator {
 public:
  GrammarPropagator() = default;
  GrammarPropagator(CnfGrammar g, Scope scope, Cost mismatch);

  // Bottom-up tables from scratch.
  void compute(std::span<const Domain> domains, const DeltaStore* shifts);
  // Recomputes the leaf costs at the listed positions and every span containing one of them.
  void update(std::span<const Domain> domains, const DeltaStore* shifts, std::span<const int> positions);
  // Top-down tables; requires fresh inside tables.
  void precompute();

  SignedCost minimum() const { return inside(0, length() - 1, grammar_.start); }
  // Minimum over tuples with position pos holding v; requires precompute().
  SignedCost conditioned(int pos, int v, const Domain& dom, const DeltaStore* shifts) const;

  int length() const { return static_cast<int>(scope_.size()); }
  SignedCost inside(int i, int j, int symbol) const { return inside_[cell(i, j, symbol)]; }
  SignedCost outside(int i, int j, int symbol) const { return outer_[cell(i, j, symbol)]; }
  bool marked(int i, int j, int symbol) const { return marked_[cell(i, j, symbol)] != 0; }
  SignedCost unary(int i, int value) const;

 private:
  std::size_t cell(int i, int j, int symbol) const;
  SignedCost leaf_cost(int c, int v, int pos, const DeltaStore* shifts) const;
  void fill_unary(int pos, const Domain& dom, const DeltaStore* shifts);
  void fill_span(int i, int j);

  CnfGrammar grammar_;
  Scope scope_;
  Cost mismatch_ = 1;
  std::vector<int> terminal_values_;
  std::vector<std::vector<SignedCost>> leaf_;  // [pos][index in terminal_values_]
  std::vector<SignedCost> inside_;
  std::vector<SignedCost> outer_;
  std::vector<char> marked_;
};

// One-shot dedicated minimum.
SignedCost grammar_min(const CnfGrammar& g, const Scope& scope, std::span<const Domain> domains,
                       const DeltaStore* shifts = nullptr, Cost mismatch = 1);

class GrammarFunction : public GlobalCostFunction {
 public:
  GrammarFunction(Scope scope, std::vector<int> domain_sizes, CnfGrammar g, Cost mismatch = 1);

  const CnfGrammar& grammar() const { return grammar_; }
  Cost mismatch() const { return mismatch_; }
  bool hard() const { return mismatch_ >= kInfinity; }
  std::string kind() const override { return "grammar"; }
  Cost reference_eval(std::span<const int> tuple) const override;
  SignedCost dedicated_minimum(std::span<const Domain> domains) override;
  std::vector<SignedCost> dedicated_conditioned_minima(int pos, std::span<const Domain> domains) override;
  std::unique_ptr<CostFunction> clone() const override;

  // Inside/outside tables brought up to date with the domains and shifts.
  const GrammarPropagator& propagator(std::span<const Domain> domains);

 protected:
  FilterDag build_dag() const override;
  void on_shift(int pos, int value, SignedCost alpha) override;

 private:
  void refresh(std::span<const Domain> domains, bool need_outside);

  CnfGrammar grammar_;
  Cost mismatch_;
  GrammarPropagator tables_;
  bool built_ = false;
  bool outside_fresh_ = false;
  std::vector<std::uint64_t> stamps_;
  std::vector<char> dirty_;
};

}  // namespace cfn
