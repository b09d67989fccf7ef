#include "cfn/dag.hpp"

#include <algorithm>
#include <sstream>

namespace cfn {

namespace {

Scope merge_scopes(const std::vector<DagNode>& nodes, const std::vector<int>& children) {
  Scope out;
  for (int c : children) {
    const auto& s = nodes.at(static_cast<std::size_t>(c)).scope;
    Scope merged;
    std::set_union(out.begin(), out.end(), s.begin(), s.end(), std::back_inserter(merged));
    out = std::move(merged);
  }
  return out;
}

int scope_pos(const Scope& scope, VarId x) {
  auto it = std::lower_bound(scope.begin(), scope.end(), x);
  if (it == scope.end() || *it != x) return -1;
  return static_cast<int>(it - scope.begin());
}

std::string cost_text(SignedCost c) { return is_inf(c) ? "top" : std::to_string(c); }

}  // namespace

int FilterDag::add_raw(DagNode node) {
  nodes_.push_back(std::move(node));
  indexed_ = false;
  min_fresh_ = plus_fresh_ = false;
  return static_cast<int>(nodes_.size() - 1);
}

int FilterDag::add_leaf(VarId x, std::vector<SignedCost> costs) {
  DagNode n;
  n.kind = DagNodeKind::leaf;
  n.scope = {x};
  n.var = x;
  n.costs = std::move(costs);
  return add_raw(std::move(n));
}

int FilterDag::add_constant(SignedCost c) {
  DagNode n;
  n.kind = DagNodeKind::constant;
  n.constant = c;
  return add_raw(std::move(n));
}

int FilterDag::add_sum(std::vector<int> children) {
  DagNode n;
  n.kind = DagNodeKind::sum;
  n.scope = merge_scopes(nodes_, children);
  n.children = std::move(children);
  return add_raw(std::move(n));
}

int FilterDag::add_min(std::vector<int> children, Scope scope_if_empty) {
  DagNode n;
  n.kind = DagNodeKind::min;
  n.scope = children.empty() ? std::move(scope_if_empty) : merge_scopes(nodes_, children);
  n.children = std::move(children);
  return add_raw(std::move(n));
}

void FilterDag::set_root(int id) {
  root_ = id;
  indexed_ = false;
  min_fresh_ = plus_fresh_ = false;
}

void FilterDag::compact() {
  if (root_ < 0) return;
  std::vector<int> remap(nodes_.size(), -1);
  std::vector<int> stack{root_};
  std::vector<char> seen(nodes_.size(), 0);
  seen[static_cast<std::size_t>(root_)] = 1;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    for (int c : nodes_[static_cast<std::size_t>(id)].children) {
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = 1;
        stack.push_back(c);
      }
    }
  }
  std::vector<DagNode> kept;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (seen[i]) {
      remap[i] = static_cast<int>(kept.size());
      kept.push_back(std::move(nodes_[i]));
    }
  }
  for (auto& n : kept) {
    for (int& c : n.children) c = remap[static_cast<std::size_t>(c)];
  }
  nodes_ = std::move(kept);
  root_ = remap[static_cast<std::size_t>(root_)];
  indexed_ = false;
  min_fresh_ = plus_fresh_ = false;
}

void FilterDag::validate() const {
  const int n = size();
  if (root_ < 0 || root_ >= n) throw DagError(DagError::Code::bad_reference, "no root");
  for (int id = 0; id < n; ++id) {
    for (int c : nodes_[static_cast<std::size_t>(id)].children) {
      if (c < 0 || c >= n) throw DagError(DagError::Code::bad_reference, "node " + std::to_string(id) + " has a bad child");
    }
  }
  // Cycle detection over the whole node set.
  std::vector<int> color(static_cast<std::size_t>(n), 0);
  for (int start = 0; start < n; ++start) {
    if (color[static_cast<std::size_t>(start)]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
    color[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const auto& ch = nodes_[static_cast<std::size_t>(id)].children;
      if (next < ch.size()) {
        int c = ch[next++];
        if (color[static_cast<std::size_t>(c)] == 1) {
          throw DagError(DagError::Code::not_a_dag, "cycle through node " + std::to_string(c));
        }
        if (color[static_cast<std::size_t>(c)] == 0) {
          color[static_cast<std::size_t>(c)] = 1;
          stack.emplace_back(c, 0);
        }
      } else {
        color[static_cast<std::size_t>(id)] = 2;
        stack.pop_back();
      }
    }
  }
  std::vector<char> reach(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{root_};
  reach[static_cast<std::size_t>(root_)] = 1;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    for (int c : nodes_[static_cast<std::size_t>(id)].children) {
      if (!reach[static_cast<std::size_t>(c)]) {
        reach[static_cast<std::size_t>(c)] = 1;
        stack.push_back(c);
      }
    }
  }
  for (int id = 0; id < n; ++id) {
    if (!reach[static_cast<std::size_t>(id)]) {
      throw DagError(DagError::Code::disconnected, "node " + std::to_string(id) + " is unreachable from the root");
    }
  }
  for (int id = 0; id < n; ++id) {
    const auto& nd = nodes_[static_cast<std::size_t>(id)];
    const std::string where = "node " + std::to_string(id);
    switch (nd.kind) {
      case DagNodeKind::leaf:
        if (nd.scope.size() != 1 || nd.scope[0] != nd.var || !nd.children.empty()) {
          throw DagError(DagError::Code::non_unary_leaf, where + " is not a unary leaf");
        }
        if (nd.costs.empty()) throw DagError(DagError::Code::non_unary_leaf, where + " has no costs");
        break;
      case DagNodeKind::constant:
        if (!nd.scope.empty() || !nd.children.empty()) {
          throw DagError(DagError::Code::scope_composition, where + " is a constant with a scope");
        }
        break;
      case DagNodeKind::sum:
      case DagNodeKind::min: {
        if (nd.children.empty()) {
          if (nd.kind == DagNodeKind::sum && !nd.scope.empty()) {
            throw DagError(DagError::Code::scope_composition, where + " is an empty sum with a scope");
          }
          break;
        }
        if (merge_scopes(nodes_, nd.children) != nd.scope) {
          throw DagError(DagError::Code::scope_composition, where + " scope differs from its children's union");
        }
        if (nd.kind == DagNodeKind::sum) {
          std::size_t total = 0;
          for (int c : nd.children) total += nodes_[static_cast<std::size_t>(c)].scope.size();
          if (total != nd.scope.size()) {
            throw DagError(DagError::Code::aggregator_precondition, where + " sums children with overlapping scopes");
          }
        } else {
          for (int c : nd.children) {
            if (nodes_[static_cast<std::size_t>(c)].scope != nd.scope) {
              throw DagError(DagError::Code::aggregator_precondition, where + " takes a min over different scopes");
            }
          }
        }
        break;
      }
    }
  }
}

void FilterDag::ensure_index() {
  if (indexed_) return;
  if (root_ < 0) throw PreconditionError("filtering DAG has no root");
  const auto n = nodes_.size();
  topo_.clear();
  parents_.assign(n, {});
  std::vector<char> state(n, 0);
  std::vector<std::pair<int, std::size_t>> stack{{root_, 0}};
  state[static_cast<std::size_t>(root_)] = 1;
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    const auto& ch = nodes_[static_cast<std::size_t>(id)].children;
    if (next < ch.size()) {
      int c = ch[next++];
      if (state[static_cast<std::size_t>(c)] == 0) {
        state[static_cast<std::size_t>(c)] = 1;
        stack.emplace_back(c, 0);
      }
    } else {
      topo_.push_back(id);
      stack.pop_back();
    }
  }
  VarId max_var = -1;
  for (int id : topo_) {
    const auto& nd = nodes_[static_cast<std::size_t>(id)];
    for (int c : nd.children) parents_[static_cast<std::size_t>(c)].push_back(id);
    if (!nd.scope.empty()) max_var = std::max(max_var, nd.scope.back());
  }
  leaves_of_.assign(static_cast<std::size_t>(max_var + 1), {});
  for (int id : topo_) {
    const auto& nd = nodes_[static_cast<std::size_t>(id)];
    if (nd.kind == DagNodeKind::leaf) leaves_of_[static_cast<std::size_t>(nd.var)].push_back(id);
  }
  indexed_ = true;
}

SignedCost FilterDag::child_given(int child, VarId x, int v) const {
  const auto& cs = nodes_[static_cast<std::size_t>(child)].scope;
  int p = scope_pos(cs, x);
  if (p < 0) return min_[static_cast<std::size_t>(child)];
  return plus_[static_cast<std::size_t>(child)][static_cast<std::size_t>(p)][static_cast<std::size_t>(v)];
}

void FilterDag::recompute(int id) {
  const auto& nd = nodes_[static_cast<std::size_t>(id)];
  const auto i = static_cast<std::size_t>(id);
  switch (nd.kind) {
    case DagNodeKind::leaf: {
      SignedCost best = kSignedInf;
      const auto& dom = domains_[static_cast<std::size_t>(nd.var)];
      for (int v : dom.values()) best = std::min(best, nd.costs[static_cast<std::size_t>(v)]);
      min_[i] = best;
      break;
    }
    case DagNodeKind::constant:
      min_[i] = nd.constant;
      break;
    case DagNodeKind::sum: {
      SignedCost total = 0;
      for (int c : nd.children) total = sadd(total, min_[static_cast<std::size_t>(c)]);
      min_[i] = total;
      break;
    }
    case DagNodeKind::min: {
      SignedCost best = kSignedInf;
      for (int c : nd.children) best = std::min(best, min_[static_cast<std::size_t>(c)]);
      min_[i] = best;
      break;
    }
  }
  if (!plus_fresh_) return;
  auto& rows = plus_[i];
  rows.resize(nd.scope.size());
  for (std::size_t p = 0; p < nd.scope.size(); ++p) {
    const VarId x = nd.scope[p];
    const auto& dom = domains_[static_cast<std::size_t>(x)];
    auto& row = rows[p];
    row.assign(static_cast<std::size_t>(dom.initial_size()), kSignedInf);
    for (int v : dom.values()) {
      SignedCost val = kSignedInf;
      switch (nd.kind) {
        case DagNodeKind::leaf:
          val = nd.costs[static_cast<std::size_t>(v)];
          break;
        case DagNodeKind::constant:
          break;
        case DagNodeKind::sum:
          val = 0;
          for (int c : nd.children) val = sadd(val, child_given(c, x, v));
          break;
        case DagNodeKind::min:
          for (int c : nd.children) val = std::min(val, child_given(c, x, v));
          break;
      }
      row[static_cast<std::size_t>(v)] = val;
    }
  }
}

SignedCost FilterDag::minimum(std::span<const Domain> domains) {
  ensure_index();
  domains_.assign(domains.begin(), domains.end());
  min_.assign(nodes_.size(), kSignedInf);
  plus_fresh_ = false;
  for (int id : topo_) recompute(id);
  min_fresh_ = true;
  return min_[static_cast<std::size_t>(root_)];
}

SignedCost FilterDag::minimum() const {
  if (!min_fresh_) throw StaleTableError("minimum table is stale");
  return min_[static_cast<std::size_t>(root_)];
}

void FilterDag::build_min_plus(std::span<const Domain> domains) {
  ensure_index();
  domains_.assign(domains.begin(), domains.end());
  min_.assign(nodes_.size(), kSignedInf);
  plus_.assign(nodes_.size(), {});
  plus_fresh_ = true;
  for (int id : topo_) recompute(id);
  min_fresh_ = true;
}

SignedCost FilterDag::node_min(int id) const {
  if (!min_fresh_) throw StaleTableError("minimum table is stale");
  return min_.at(static_cast<std::size_t>(id));
}

SignedCost FilterDag::node_min_given(int id, VarId x, int v) const {
  if (!plus_fresh_) throw StaleTableError("conditioned minima are stale");
  const auto& nd = node(id);
  int p = scope_pos(nd.scope, x);
  if (p < 0) throw PreconditionError("variable not in the node scope");
  const auto& row = plus_[static_cast<std::size_t>(id)][static_cast<std::size_t>(p)];
  if (v < 0 || static_cast<std::size_t>(v) >= row.size()) throw PreconditionError("value out of range");
  return row[static_cast<std::size_t>(v)];
}

SignedCost FilterDag::min_given(VarId x, int v) const { return node_min_given(root_, x, v); }

void FilterDag::project(VarId x, int v, SignedCost alpha) {
  if (alpha > 0 && alpha > min_given(x, v)) {
    throw PreconditionError("projection exceeds the conditioned minimum");
  }
  shift_leaves(x, v, alpha);
}

void FilterDag::shift_leaves(VarId x, int v, SignedCost alpha) {
  if (alpha == 0) return;
  ensure_index();
  if (x < 0 || static_cast<std::size_t>(x) >= leaves_of_.size()) return;
  const auto& leaves = leaves_of_[static_cast<std::size_t>(x)];
  for (int id : leaves) {
    auto& c = nodes_[static_cast<std::size_t>(id)].costs[static_cast<std::size_t>(v)];
    if (!is_inf(c)) c -= alpha;
  }
  if (!min_fresh_) return;
  std::vector<char> mark(nodes_.size(), 0);
  std::vector<int> stack(leaves.begin(), leaves.end());
  for (int id : leaves) mark[static_cast<std::size_t>(id)] = 1;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    for (int p : parents_[static_cast<std::size_t>(id)]) {
      if (!mark[static_cast<std::size_t>(p)]) {
        mark[static_cast<std::size_t>(p)] = 1;
        stack.push_back(p);
      }
    }
  }
  for (int id : topo_) {
    if (mark[static_cast<std::size_t>(id)]) recompute(id);
  }
}

void FilterDag::invalidate() { min_fresh_ = plus_fresh_ = false; }

SignedCost FilterDag::evaluate(std::span<const int> assignment) const {
  // Children always have smaller topological rank; compute in post-order.
  std::vector<SignedCost> val(nodes_.size(), kSignedInf);
  std::vector<char> done(nodes_.size(), 0);
  std::vector<std::pair<int, std::size_t>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    const auto& nd = nodes_[static_cast<std::size_t>(id)];
    if (next < nd.children.size()) {
      int c = nd.children[next++];
      if (!done[static_cast<std::size_t>(c)]) stack.emplace_back(c, 0);
      continue;
    }
    SignedCost r = kSignedInf;
    switch (nd.kind) {
      case DagNodeKind::leaf:
        r = nd.costs[static_cast<std::size_t>(assignment[static_cast<std::size_t>(nd.var)])];
        break;
      case DagNodeKind::constant:
        r = nd.constant;
        break;
      case DagNodeKind::sum:
        r = 0;
        for (int c : nd.children) r = sadd(r, val[static_cast<std::size_t>(c)]);
        break;
      case DagNodeKind::min:
        for (int c : nd.children) r = std::min(r, val[static_cast<std::size_t>(c)]);
        break;
    }
    val[static_cast<std::size_t>(id)] = r;
    done[static_cast<std::size_t>(id)] = 1;
    stack.pop_back();
  }
  return val[static_cast<std::size_t>(root_)];
}

std::string FilterDag::dump() const {
  std::ostringstream out;
  out << "root " << root_ << '\n';
  for (int id = 0; id < size(); ++id) {
    const auto& nd = nodes_[static_cast<std::size_t>(id)];
    out << id << ' ';
    switch (nd.kind) {
      case DagNodeKind::leaf:
        out << "leaf";
        break;
      case DagNodeKind::constant:
        out << "const";
        break;
      case DagNodeKind::sum:
        out << "sum";
        break;
      case DagNodeKind::min:
        out << "min";
        break;
    }
    out << " {";
    for (std::size_t i = 0; i < nd.scope.size(); ++i) out << (i ? "," : "") << nd.scope[i];
    out << '}';
    if (nd.kind == DagNodeKind::leaf) {
      out << " [";
      for (std::size_t i = 0; i < nd.costs.size(); ++i) out << (i ? " " : "") << cost_text(nd.costs[i]);
      out << ']';
    } else if (nd.kind == DagNodeKind::constant) {
      out << ' ' << cost_text(nd.constant);
    } else {
      out << " ->";
      for (int c : nd.children) out << ' ' << c;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace cfn
