#pragma once

#include <span>
#include <vector>

#include "cfn/global_function.hpp"

namespace cfn {

// Soft among: cost max(0, lb - t, t - ub) where t counts the positions whose
// value is in `values`.
struct AmongSpec {
  Scope scope;
  std::vector<int> values;
  int lb = 0;
  int ub = 0;

  bool counts(int v) const;
};

// Clamps ub to the scope size; rejects lb > ub or negative bounds.
AmongSpec make_among(Scope scope, std::vector<int> values, int lb, int ub);

Cost among_cost(const AmongSpec& spec, std::span<const int> tuple);

// sizes: initial domain size of each scope position.
FilterDag among_build_dag(const AmongSpec& spec, std::span<const int> sizes);

// Counting DP over the domains (indexed by variable id). Leaf values are
// offset by the deltas when given.
SignedCost among_min(const AmongSpec& spec, std::span<const Domain> domains, const DeltaStore* shifts = nullptr);

class AmongFunction : public GlobalCostFunction {
 public:
  AmongFunction(AmongSpec spec, std::vector<int> domain_sizes);

  const AmongSpec& spec() const { return spec_; }
  std::string kind() const override { return "among"; }
  Cost reference_eval(std::span<const int> tuple) const override;
  SignedCost dedicated_minimum(std::span<const Domain> domains) override;
  std::unique_ptr<CostFunction> clone() const override;

 protected:
  FilterDag build_dag() const override;

 private:
  AmongSpec spec_;
};

}  // namespace cfn
