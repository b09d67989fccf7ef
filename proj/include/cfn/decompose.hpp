#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cfn/dag.hpp"
#include "cfn/grammar.hpp"
#include "cfn/model.hpp"
#include "cfn/oracle.hpp"
#include "cfn/regular.hpp"

namespace cfn {

class NotBergeAcyclicError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class RhsTooLargeError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class RelaxationError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A network over the original scope (local ids 0..num_original-1) plus
// auxiliary variables, whose minimum over the auxiliary variables equals the
// decomposed function.
struct Decomposition {
  Cfn network;
  int num_original = 0;

  int num_extra() const { return network.num_variables() - num_original; }
  std::vector<Scope> scopes() const;
};

inline constexpr int kDefaultArityBound = 3;
inline constexpr int kDefaultRhsCap = 4096;

// True iff the variable/scope incidence graph is a forest.
bool berge_acyclic_check(std::span<const Scope> scopes);
bool berge_acyclic_check(const Cfn& cfn);

// Table over the given variables (any order); cost(tuple in that order).
std::unique_ptr<TableFunction> make_table(const std::vector<VarId>& vars, const std::vector<int>& sizes,
                                          Cost default_cost, const std::function<Cost(std::span<const int>)>& cost);

// State variables Q_0..Q_n, start and final costs as unary tables, one
// ternary transition table per position.
Decomposition decompose_regular(const WeightedAutomaton& aut, std::span<const int> sizes);

// Span variables P_{i,j} valued by (symbol, split) pairs plus an unused
// marker. mismatch = kInfinity keeps only derivable tuples.
Decomposition decompose_grammar(const CnfGrammar& g, std::span<const int> sizes, Cost mismatch = kInfinity);

enum class Relation { eq, le, ge };

// sum_i coeffs[i] * value(x_i) relation rhs, 0 when it holds and top otherwise.
Cost linear_sum_cost(std::span<const int> coeffs, int rhs, Relation rel, std::span<const int> tuple);

// Chain of partial-sum variables q_k with domain 0..rhs.
Decomposition decompose_linear_sum(std::span<const int> coeffs, int rhs, Relation rel, std::span<const int> sizes,
                                   int rhs_cap = kDefaultRhsCap);

// Replaces each function of dec by its relaxation after checking, by
// enumeration, that the relaxation is pointwise no larger.
Decomposition relax_network(const Decomposition& dec, std::vector<std::unique_ptr<CostFunction>> relaxed,
                            std::uint64_t cap = kDefaultEnumerationCap);

// Copy of a table with every top entry replaced by penalty.
std::unique_ptr<TableFunction> soften(const TableFunction& table, Cost penalty);

// Decomposes a global function by kind (among, regular, wregular, grammar).
Decomposition decompose_function(const CostFunction& fn);

// Adds the auxiliary variables and tables of dec to host, mapping its
// original variables onto scope. Auxiliary names get the prefix.
void embed(Cfn& host, const Scope& scope, const Decomposition& dec, const std::string& prefix);

// Copy of host where function fn is replaced by the decomposition; the extra
// variables are added as auxiliary variables.
Cfn splice(const Cfn& host, int fn, const Decomposition& dec);

// Copy of host with every non-table function replaced by its decomposition.
Cfn decompose_globals(const Cfn& host);

struct DagCompileOptions {
  VarId root = -1;  // an original variable; -1 selects the highest
  std::uint64_t node_cap = 5'000'000;
};

// Filtering DAG over the original variables of a Berge-acyclic decomposition.
FilterDag decomposition_to_filter_dag(const Decomposition& dec, const DagCompileOptions& options = {});

}  // namespace cfn
