#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfn/model.hpp"

namespace cfn {

enum class DagNodeKind { leaf, constant, sum, min };

struct DagNode {
  DagNodeKind kind = DagNodeKind::leaf;
  Scope scope;
  VarId var = -1;                 // leaf only
  std::vector<SignedCost> costs;  // leaf only, indexed by value
  SignedCost constant = 0;        // constant only
  std::vector<int> children;      // sum and min only
};

class DagError : public std::logic_error {
 public:
  enum class Code {
    not_a_dag,
    disconnected,
    scope_composition,
    aggregator_precondition,
    non_unary_leaf,
    bad_reference,
  };
  DagError(Code code, const std::string& what) : std::logic_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

class StaleTableError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Rooted DAG of unary leaves combined by Sum and Min nodes. Memo tables are
// filled against a snapshot of the domains given to minimum() or
// build_min_plus(); leaf shifts keep them exact incrementally.
class FilterDag {
 public:
  int add_leaf(VarId x, std::vector<SignedCost> costs);
  // Nullary node, used for constant offsets inside Sum nodes.
  int add_constant(SignedCost c);
  int add_sum(std::vector<int> children);
  // A Min node without children is the constant top over `scope_if_empty`.
  int add_min(std::vector<int> children, Scope scope_if_empty = {});
  // Inserts a node exactly as given.
  int add_raw(DagNode node);
  void set_root(int id);
  // Drops nodes unreachable from the root and renumbers the rest.
  void compact();

  int root() const { return root_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const DagNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const Scope& scope() const { return node(root_).scope; }

  // Throws DagError when a structural condition fails.
  void validate() const;

  // Minimum over the root scope; fills the per-node minimum table.
  SignedCost minimum(std::span<const Domain> domains);
  SignedCost minimum() const;
  // Fills the conditioned minima of every node (and the minimum table).
  void build_min_plus(std::span<const Domain> domains);
  bool min_plus_fresh() const { return plus_fresh_; }
  bool min_fresh() const { return min_fresh_; }
  // Minimum over tuples with x = v; top for values outside the domain.
  SignedCost min_given(VarId x, int v) const;
  SignedCost node_min(int id) const;
  SignedCost node_min_given(int id, VarId x, int v) const;

  // Shifts entry v of every leaf over x by -alpha after checking alpha
  // against min_given(x, v).
  void project(VarId x, int v, SignedCost alpha);
  // Same shift without the bound check.
  void shift_leaves(VarId x, int v, SignedCost alpha);
  // Forgets the memo tables.
  void invalidate();

  // Value of the encoded function on a full assignment (indexed by variable id).
  SignedCost evaluate(std::span<const int> assignment) const;

  // One line per node: id, kind, scope, then leaf costs or children.
  std::string dump() const;

 private:
  void ensure_index();
  void recompute(int id);
  SignedCost child_given(int child, VarId x, int v) const;

  std::vector<DagNode> nodes_;
  int root_ = -1;

  bool indexed_ = false;
  std::vector<int> topo_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> leaves_of_;  // indexed by variable id

  std::vector<Domain> domains_;
  bool min_fresh_ = false;
  bool plus_fresh_ = false;
  std::vector<SignedCost> min_;
  std::vector<std::vector<std::vector<SignedCost>>> plus_;
};

}  // namespace cfn
