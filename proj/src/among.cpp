#include "cfn/among.hpp"

#include <algorithm>
#include <map>

namespace cfn {

bool AmongSpec::counts(int v) const { return std::find(values.begin(), values.end(), v) != values.end(); }

AmongSpec make_among(Scope scope, std::vector<int> values, int lb, int ub) {
  check_scope(scope);
  if (lb < 0 || ub < 0) throw PreconditionError("among bounds must be non-negative");
  ub = std::min(ub, static_cast<int>(scope.size()));
  if (lb > ub) throw PreconditionError("among lower bound exceeds the upper bound");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return AmongSpec{std::move(scope), std::move(values), lb, ub};
}

Cost among_cost(const AmongSpec& spec, std::span<const int> tuple) {
  int t = 0;
  for (int v : tuple) t += spec.counts(v) ? 1 : 0;
  return static_cast<Cost>(std::max({0, spec.lb - t, t - spec.ub}));
}

FilterDag among_build_dag(const AmongSpec& spec, std::span<const int> sizes) {
  FilterDag dag;
  const int n = static_cast<int>(spec.scope.size());
  std::vector<int> in_leaf(static_cast<std::size_t>(n));
  std::vector<int> out_leaf(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<SignedCost> in;
    std::vector<SignedCost> out;
    for (int v = 0; v < sizes[static_cast<std::size_t>(i)]; ++v) {
      in.push_back(spec.counts(v) ? 0 : 1);
      out.push_back(spec.counts(v) ? 1 : 0);
    }
    in_leaf[static_cast<std::size_t>(i)] = dag.add_leaf(spec.scope[static_cast<std::size_t>(i)], std::move(in));
    out_leaf[static_cast<std::size_t>(i)] = dag.add_leaf(spec.scope[static_cast<std::size_t>(i)], std::move(out));
  }
  // node(i, j): minimum cost of the first i positions when j of them are
  // declared in the set. node(0, j) is the constant j.
  std::map<std::pair<int, int>, int> memo;
  auto with_leaf = [&](int prefix, int leaf) {
    if (prefix < 0) return leaf;
    return dag.add_sum({prefix, leaf});
  };
  std::function<int(int, int)> node = [&](int i, int j) -> int {
    if (i == 0) {
      if (j == 0) return -1;  // constant 0: the neutral prefix
      auto it = memo.find({0, j});
      if (it != memo.end()) return it->second;
      return memo[{0, j}] = dag.add_constant(j);
    }
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    const auto p = static_cast<std::size_t>(i - 1);
    int id;
    if (j == 0) {
      id = with_leaf(node(i - 1, 0), out_leaf[p]);
    } else {
      int counted = with_leaf(node(i - 1, j - 1), in_leaf[p]);
      int skipped = with_leaf(node(i - 1, j), out_leaf[p]);
      id = dag.add_min({counted, skipped});
    }
    return memo[{i, j}] = id;
  };
  if (spec.lb == spec.ub) {
    int r = node(n, spec.lb);
    dag.set_root(r);
  } else {
    std::vector<int> tops;
    for (int j = spec.lb; j <= spec.ub; ++j) tops.push_back(node(n, j));
    dag.set_root(dag.add_min(std::move(tops)));
  }
  dag.compact();
  return dag;
}

SignedCost among_min(const AmongSpec& spec, std::span<const Domain> domains, const DeltaStore* shifts) {
  const int n = static_cast<int>(spec.scope.size());
  const int ub = spec.ub;
  // f[j] for the current prefix; f[0][j] = j.
  std::vector<SignedCost> by_count(static_cast<std::size_t>(ub) + 1);
  for (int j = 0; j <= ub; ++j) by_count[static_cast<std::size_t>(j)] = j;
  std::vector<SignedCost> next(by_count.size());
  for (int i = 0; i < n; ++i) {
    const auto& dom = domains[static_cast<std::size_t>(spec.scope[static_cast<std::size_t>(i)])];
    SignedCost in_cost = kSignedInf;
    SignedCost out_cost = kSignedInf;
    for (int v : dom.values()) {
      SignedCost off = shifts ? shifts->net(i, v) : 0;
      in_cost = std::min(in_cost, (spec.counts(v) ? 0 : 1) + off);
      out_cost = std::min(out_cost, (spec.counts(v) ? 1 : 0) + off);
    }
    next[0] = sadd(by_count[0], out_cost);
    for (int j = 1; j <= ub; ++j) {
      const auto k = static_cast<std::size_t>(j);
      next[k] = std::min(sadd(by_count[k - 1], in_cost), sadd(by_count[k], out_cost));
    }
    std::swap(by_count, next);
  }
  SignedCost best = kSignedInf;
  for (int j = spec.lb; j <= ub; ++j) best = std::min(best, by_count[static_cast<std::size_t>(j)]);
  return best;
}

AmongFunction::AmongFunction(AmongSpec spec, std::vector<int> domain_sizes)
    : GlobalCostFunction(spec.scope, std::move(domain_sizes)), spec_(std::move(spec)) {}

Cost AmongFunction::reference_eval(std::span<const int> tuple) const { return among_cost(spec_, tuple); }

SignedCost AmongFunction::dedicated_minimum(std::span<const Domain> domains) {
  return among_min(spec_, domains, &shifts());
}

std::unique_ptr<CostFunction> AmongFunction::clone() const { return std::make_unique<AmongFunction>(*this); }

FilterDag AmongFunction::build_dag() const { return among_build_dag(spec_, domain_sizes()); }

}  // namespace cfn
