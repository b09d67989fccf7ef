#include <algorithm>
#include <map>

#include "cfn/decompose.hpp"

namespace cfn {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

class Compiler {
 public:
  Compiler(const Decomposition& dec, std::uint64_t cap) : dec_(dec), net_(dec.network), cap_(cap) {
    const int n = net_.num_variables();
    var_parent_.assign(at(n), -2);
    fn_parent_.assign(at(net_.num_functions()), -2);
    var_scope_.resize(at(n));
    fn_scope_.resize(at(net_.num_functions()));
  }

  FilterDag run(VarId root) {
    std::vector<int> parts;
    parts.push_back(component(root));
    for (VarId x = 0; x < net_.num_variables(); ++x) {
      if (var_parent_[at(x)] != -2) continue;
      parts.push_back(component(component_root(x)));
    }
    dag_.set_root(parts.size() == 1 ? parts[0] : dag_.add_sum(parts));
    dag_.compact();
    return std::move(dag_);
  }

 private:
  // Highest original variable reachable from x, or x itself.
  VarId component_root(VarId start) {
    std::vector<char> seen(at(net_.num_variables()), 0);
    std::vector<VarId> stack{start};
    seen[at(start)] = 1;
    VarId best = -1;
    while (!stack.empty()) {
      VarId x = stack.back();
      stack.pop_back();
      if (x < dec_.num_original) best = std::max(best, x);
      for (int fn : net_.functions_of(x)) {
        for (VarId y : net_.function(fn).scope()) {
          if (!seen[at(y)]) {
            seen[at(y)] = 1;
            stack.push_back(y);
          }
        }
      }
    }
    return best >= 0 ? best : start;
  }

  int component(VarId root) {
    orient_var(root, -1);
    std::vector<int> options;
    for (int a = 0; a < net_.domain(root).initial_size(); ++a) options.push_back(var_node(root, a));
    std::vector<int> kept;
    for (int id : options) kept.push_back(id < 0 ? dag_.add_constant(0) : id);
    return dag_.add_min(std::move(kept), var_scope_[at(root)]);
  }

  void orient_var(VarId x, int parent_fn) {
    var_parent_[at(x)] = parent_fn;
    Scope scope;
    if (x < dec_.num_original) scope.push_back(x);
    for (int fn : net_.functions_of(x)) {
      if (fn == parent_fn) continue;
      orient_fn(fn, x);
      scope = merge(scope, fn_scope_[at(fn)]);
    }
    var_scope_[at(x)] = std::move(scope);
  }

  void orient_fn(int fn, VarId parent_var) {
    fn_parent_[at(fn)] = parent_var;
    Scope scope;
    for (VarId y : net_.function(fn).scope()) {
      if (y == parent_var) continue;
      orient_var(y, fn);
      scope = merge(scope, var_scope_[at(y)]);
    }
    fn_scope_[at(fn)] = std::move(scope);
  }

  static Scope merge(const Scope& a, const Scope& b) {
    Scope out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }

  void check_cap() {
    if (static_cast<std::uint64_t>(dag_.size()) > cap_) throw CapExceeded("compiled DAG exceeds the node cap");
  }

  // Subtree below variable x with x = a; -1 stands for the constant 0.
  int var_node(VarId x, int a) {
    auto key = std::make_pair(x, a);
    auto it = var_memo_.find(key);
    if (it != var_memo_.end()) return it->second;
    std::vector<int> children;
    const SignedCost own = to_signed(net_.unary(x, a));
    if (x < dec_.num_original) {
      std::vector<SignedCost> costs(at(net_.domain(x).initial_size()), kSignedInf);
      costs[at(a)] = own;
      children.push_back(dag_.add_leaf(x, std::move(costs)));
    } else if (own != 0) {
      children.push_back(dag_.add_constant(own));
    }
    for (int fn : net_.functions_of(x)) {
      if (fn == var_parent_[at(x)]) continue;
      children.push_back(fn_node(fn, x, a));
    }
    int id = -1;
    if (children.size() == 1) id = children[0];
    else if (!children.empty()) id = dag_.add_sum(std::move(children));
    check_cap();
    return var_memo_[key] = id;
  }

  // Minimum of function fn and the subtrees of its other variables, given x = a.
  int fn_node(int fn, VarId x, int a) {
    const auto& func = net_.function(fn);
    const auto& scope = func.scope();
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < scope.size(); ++i) {
      if (scope[i] != x) others.push_back(i);
    }
    std::vector<int> tuple(scope.size(), 0);
    tuple[at(func.position_of(x))] = a;
    std::vector<int> branches;
    while (true) {
      const SignedCost c = func.eval(tuple);
      if (!is_inf(c)) {
        std::vector<int> parts;
        if (c != 0) parts.push_back(dag_.add_constant(c));
        for (std::size_t i : others) {
          int sub = var_node(scope[i], tuple[i]);
          if (sub >= 0) parts.push_back(sub);
        }
        if (parts.empty()) branches.push_back(dag_.add_constant(0));
        else if (parts.size() == 1) branches.push_back(parts[0]);
        else branches.push_back(dag_.add_sum(std::move(parts)));
      }
      std::size_t k = others.size();
      bool done = true;
      while (k > 0) {
        --k;
        const std::size_t i = others[k];
        if (++tuple[i] < func.domain_sizes()[i]) {
          done = false;
          break;
        }
        tuple[i] = 0;
      }
      if (done) break;
    }
    check_cap();
    return dag_.add_min(std::move(branches), fn_scope_[at(fn)]);
  }

  const Decomposition& dec_;
  const Cfn& net_;
  std::uint64_t cap_;
  FilterDag dag_;
  std::vector<int> var_parent_;
  std::vector<VarId> fn_parent_;
  std::vector<Scope> var_scope_;
  std::vector<Scope> fn_scope_;
  std::map<std::pair<VarId, int>, int> var_memo_;
};

}  // namespace

FilterDag decomposition_to_filter_dag(const Decomposition& dec, const DagCompileOptions& options) {
  if (!berge_acyclic_check(dec.network)) throw NotBergeAcyclicError("decomposition is not Berge-acyclic");
  if (dec.num_original < 1) throw PreconditionError("decomposition has no original variables");
  const VarId root = options.root < 0 ? dec.num_original - 1 : options.root;
  if (root >= dec.num_original) throw PreconditionError("root must be an original variable");
  Compiler compiler(dec, options.node_cap);
  return compiler.run(root);
}

}  // namespace cfn
