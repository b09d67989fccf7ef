#include "cfn/global_function.hpp"

namespace cfn {

GlobalCostFunction::GlobalCostFunction(Scope scope, std::vector<int> domain_sizes)
    : CostFunction(std::move(scope), std::move(domain_sizes)), deltas_(this->domain_sizes()) {}

SignedCost GlobalCostFunction::eval(std::span<const int> tuple) const {
  Cost base = reference_eval(tuple);
  if (base >= kInfinity) return kSignedInf;
  SignedCost total = static_cast<SignedCost>(base);
  for (int pos = 0; pos < arity(); ++pos) total += deltas_.net(pos, tuple[static_cast<std::size_t>(pos)]);
  return total;
}

FilterDag& GlobalCostFunction::dag() {
  if (!dag_) {
    dag_ = build_dag();
    for (int pos = 0; pos < arity(); ++pos) {
      for (int v = 0; v < domain_sizes()[static_cast<std::size_t>(pos)]; ++v) {
        SignedCost net = deltas_.net(pos, v);
        if (net != 0) dag_->shift_leaves(scope()[static_cast<std::size_t>(pos)], v, -net);
      }
    }
    stamps_.clear();
  }
  return *dag_;
}

bool GlobalCostFunction::memo_fresh(std::span<const Domain> domains) const {
  if (!dag_ || !dag_->min_plus_fresh() || stamps_.size() != scope().size()) return false;
  for (std::size_t i = 0; i < scope().size(); ++i) {
    if (domains[static_cast<std::size_t>(scope()[i])].stamp() != stamps_[i]) return false;
  }
  return true;
}

void GlobalCostFunction::remember_domains(std::span<const Domain> domains) {
  stamps_.clear();
  for (VarId x : scope()) stamps_.push_back(domains[static_cast<std::size_t>(x)].stamp());
}

SignedCost GlobalCostFunction::minimum(std::span<const Domain> domains) {
  if (route_ == MinRoute::dedicated) return dedicated_minimum(domains);
  auto& d = dag();
  if (!memo_fresh(domains)) {
    d.build_min_plus(domains);
    remember_domains(domains);
  }
  return d.minimum();
}

std::vector<SignedCost> GlobalCostFunction::conditioned_minima(int pos, std::span<const Domain> domains) {
  if (route_ == MinRoute::dedicated) return dedicated_conditioned_minima(pos, domains);
  auto& d = dag();
  if (!memo_fresh(domains)) {
    d.build_min_plus(domains);
    remember_domains(domains);
  }
  const VarId x = scope()[static_cast<std::size_t>(pos)];
  std::vector<SignedCost> out(static_cast<std::size_t>(domain_sizes()[static_cast<std::size_t>(pos)]), kSignedInf);
  for (int v : domains[static_cast<std::size_t>(x)].values()) out[static_cast<std::size_t>(v)] = d.min_given(x, v);
  return out;
}

std::vector<SignedCost> GlobalCostFunction::dedicated_conditioned_minima(int pos, std::span<const Domain> domains) {
  const VarId x = scope()[static_cast<std::size_t>(pos)];
  std::vector<SignedCost> out(static_cast<std::size_t>(domain_sizes()[static_cast<std::size_t>(pos)]), kSignedInf);
  std::vector<Domain> local(domains.begin(), domains.end());
  const Domain original = local[static_cast<std::size_t>(x)];
  for (int v : original.values()) {
    Domain only = original;
    for (int w : original.values()) {
      if (w != v) only.remove(w);
    }
    local[static_cast<std::size_t>(x)] = only;
    out[static_cast<std::size_t>(v)] = dedicated_minimum(local);
  }
  return out;
}

void GlobalCostFunction::shift(int pos, int value, SignedCost alpha) {
  if (alpha == 0) return;
  deltas_.record(pos, value, alpha);
  if (dag_) dag_->shift_leaves(scope()[static_cast<std::size_t>(pos)], value, alpha);
  on_shift(pos, value, alpha);
}

void GlobalCostFunction::unshift(int pos, int value, SignedCost alpha) {
  if (alpha == 0) return;
  deltas_.unrecord(pos, value, alpha);
  if (dag_) dag_->shift_leaves(scope()[static_cast<std::size_t>(pos)], value, -alpha);
  on_shift(pos, value, -alpha);
}

}  // namespace cfn
