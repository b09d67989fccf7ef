#include "cfn/wmax.hpp"

#include <algorithm>

namespace cfn {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

// true when weight a is at least as good as the threshold for the extreme.
bool within(Cost a, Cost threshold, bool minimum) { return minimum ? a >= threshold : a <= threshold; }

void check_weights(const WeightMap& weights, std::size_t arity) {
  if (weights.size() != arity) throw PreconditionError("weight map does not match the scope");
}

SignedCost sweep(const WeightMap& weights, const Scope& scope, std::span<const Domain> domains,
                 const DeltaStore* shifts, bool minimum) {
  const int n = static_cast<int>(scope.size());
  const auto pairs = sorted_pairs(weights, scope, domains, minimum);
  std::vector<SignedCost> g(at(n), kSignedInf);
  SignedCost finite_sum = 0;
  int infinite = n;
  SignedCost best = kSignedInf;
  for (const auto& p : pairs) {
    const SignedCost net = shifts ? shifts->net(p.pos, p.value) : 0;
    const SignedCost own = g[at(p.pos)];
    SignedCost others;
    if (is_inf(own)) {
      others = infinite == 1 ? finite_sum : kSignedInf;
    } else {
      others = infinite == 0 ? finite_sum - own : kSignedInf;
    }
    const SignedCost head = p.weight >= kInfinity ? kSignedInf : static_cast<SignedCost>(p.weight) + net;
    best = std::min(best, sadd(head, others));
    if (net < own) {
      if (is_inf(own)) {
        --infinite;
        finite_sum += net;
      } else {
        finite_sum += net - own;
      }
      g[at(p.pos)] = net;
    }
  }
  return best;
}

}  // namespace

Cost wmax_cost(const WeightMap& weights, std::span<const int> tuple) {
  Cost best = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) best = std::max(best, weights[i][at(tuple[i])]);
  return std::min(best, kInfinity);
}

Cost wmin_cost(const WeightMap& weights, std::span<const int> tuple) {
  Cost best = kInfinity;
  for (std::size_t i = 0; i < tuple.size(); ++i) best = std::min(best, weights[i][at(tuple[i])]);
  return best;
}

std::vector<WeightedPair> sorted_pairs(const WeightMap& weights, const Scope& scope,
                                       std::span<const Domain> domains, bool minimum) {
  std::vector<WeightedPair> pairs;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    for (int v : domains[at(scope[i])].values()) {
      pairs.push_back({std::min(weights[i][at(v)], kInfinity), static_cast<int>(i), v});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [minimum](const WeightedPair& a, const WeightedPair& b) {
    if (a.weight != b.weight) return minimum ? a.weight > b.weight : a.weight < b.weight;
    if (a.pos != b.pos) return a.pos < b.pos;
    return a.value < b.value;
  });
  return pairs;
}

FilterDag wmax_build_dag(const WeightMap& weights, const Scope& scope, bool minimum) {
  check_weights(weights, scope.size());
  const int n = static_cast<int>(scope.size());
  if (n == 0) throw PreconditionError("weighted extreme needs a non-empty scope");
  FilterDag dag;
  std::vector<WeightedPair> pairs;
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < static_cast<int>(weights[at(i)].size()); ++v) {
      pairs.push_back({std::min(weights[at(i)][at(v)], kInfinity), i, v});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [minimum](const WeightedPair& a, const WeightedPair& b) {
    if (a.weight != b.weight) return minimum ? a.weight > b.weight : a.weight < b.weight;
    if (a.pos != b.pos) return a.pos < b.pos;
    return a.value < b.value;
  });
  // guard[j]: node that is 0 on the values of position j reached by the threshold; -1 before any.
  std::vector<int> guard(at(n), -1);
  std::vector<int> branches;
  std::size_t k = 0;
  while (k < pairs.size()) {
    const Cost alpha = pairs[k].weight;
    std::size_t end = k;
    while (end < pairs.size() && pairs[end].weight == alpha) ++end;
    // Extend the guards with the values whose weight equals this threshold.
    for (int j = 0; j < n; ++j) {
      const auto& row = weights[at(j)];
      std::vector<SignedCost> reached(row.size(), kSignedInf);
      bool any = false;
      for (std::size_t value = 0; value < row.size(); ++value) {
        if (std::min(row[value], kInfinity) == alpha) {
          reached[value] = 0;
          any = true;
        }
      }
      if (!any) continue;
      int leaf = dag.add_leaf(scope[at(j)], std::move(reached));
      guard[at(j)] = guard[at(j)] < 0 ? dag.add_min({leaf}) : dag.add_min({guard[at(j)], leaf});
    }
    for (std::size_t p = k; p < end; ++p) {
      const auto& pr = pairs[p];
      if (alpha >= kInfinity) continue;
      std::vector<int> children;
      bool blocked = false;
      for (int j = 0; j < n && !blocked; ++j) {
        if (j == pr.pos) continue;
        if (guard[at(j)] < 0) blocked = true;
        else children.push_back(guard[at(j)]);
      }
      if (blocked) continue;
      std::vector<SignedCost> selector(weights[at(pr.pos)].size(), kSignedInf);
      selector[at(pr.value)] = static_cast<SignedCost>(alpha);
      children.insert(children.begin(), dag.add_leaf(scope[at(pr.pos)], std::move(selector)));
      branches.push_back(dag.add_sum(std::move(children)));
    }
    k = end;
  }
  dag.set_root(dag.add_min(std::move(branches), scope));
  dag.compact();
  return dag;
}

SignedCost wmax_min(const WeightMap& weights, const Scope& scope, std::span<const Domain> domains,
                    const DeltaStore* shifts) {
  return sweep(weights, scope, domains, shifts, false);
}

SignedCost wmin_min(const WeightMap& weights, const Scope& scope, std::span<const Domain> domains,
                    const DeltaStore* shifts) {
  return sweep(weights, scope, domains, shifts, true);
}

std::vector<SweepRow> wmax_sweep_table(const WeightMap& weights, const Scope& scope,
                                       std::span<const Domain> domains, std::span<const int> tuple) {
  const int n = static_cast<int>(scope.size());
  std::vector<SweepRow> rows;
  SweepRow base;
  base.alpha = 0;
  base.guards.assign(at(n), kSignedInf);
  rows.push_back(base);
  for (const auto& p : sorted_pairs(weights, scope, domains, false)) {
    SweepRow row;
    row.alpha = p.weight;
    row.pair = p;
    row.selector = tuple[at(p.pos)] == p.value ? static_cast<SignedCost>(p.weight) : kSignedInf;
    for (int j = 0; j < n; ++j) {
      row.guards.push_back(within(weights[at(j)][at(tuple[at(j)])], p.weight, false) ? 0 : kSignedInf);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

WMaxFunction::WMaxFunction(Scope scope, std::vector<int> domain_sizes, WeightMap weights, bool minimum)
    : GlobalCostFunction(std::move(scope), std::move(domain_sizes)), weights_(std::move(weights)), minimum_(minimum) {
  check_weights(weights_, static_cast<std::size_t>(arity()));
  if (arity() < 1) throw PreconditionError("weighted extreme needs a non-empty scope");
  for (int i = 0; i < arity(); ++i) {
    if (weights_[at(i)].size() != at(this->domain_sizes()[at(i)])) {
      throw PreconditionError("weight map does not cover the domain");
    }
  }
}

Cost WMaxFunction::reference_eval(std::span<const int> tuple) const {
  return minimum_ ? wmin_cost(weights_, tuple) : wmax_cost(weights_, tuple);
}

SignedCost WMaxFunction::dedicated_minimum(std::span<const Domain> domains) {
  return sweep(weights_, scope(), domains, &shifts(), minimum_);
}

std::unique_ptr<CostFunction> WMaxFunction::clone() const { return std::make_unique<WMaxFunction>(*this); }

FilterDag WMaxFunction::build_dag() const { return wmax_build_dag(weights_, scope(), minimum_); }

}  // namespace cfn
