#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cfn/global_function.hpp"

namespace cfn {

// weights[pos][value]: cost of the pair (scope[pos], value).
using WeightMap = std::vector<std::vector<Cost>>;

Cost wmax_cost(const WeightMap& weights, std::span<const int> tuple);
Cost wmin_cost(const WeightMap& weights, std::span<const int> tuple);

struct WeightedPair {
  Cost weight = 0;
  int pos = 0;
  int value = 0;
};

// Pairs of the domains sorted by weight, ascending for the maximum and
// descending for the minimum; ties by position then value.
std::vector<WeightedPair> sorted_pairs(const WeightMap& weights, const Scope& scope,
                                       std::span<const Domain> domains, bool minimum);

// Each branch picks the pair whose weight is the extreme of the tuple; the
// other positions must hold values at least as good.
FilterDag wmax_build_dag(const WeightMap& weights, const Scope& scope, bool minimum = false);

SignedCost wmax_min(const WeightMap& weights, const Scope& scope, std::span<const Domain> domains,
                    const DeltaStore* shifts = nullptr);
SignedCost wmin_min(const WeightMap& weights, const Scope& scope, std::span<const Domain> domains,
                    const DeltaStore* shifts = nullptr);

// One row per threshold of the sweep, evaluated on a tuple: the first row is
// the base threshold 0 with no selector value.
struct SweepRow {
  Cost alpha = 0;
  std::optional<WeightedPair> pair;
  SignedCost selector = kSignedInf;  // selector leaf of the pair at the tuple
  std::vector<SignedCost> guards;    // guard of every position at the tuple
};

std::vector<SweepRow> wmax_sweep_table(const WeightMap& weights, const Scope& scope,
                                       std::span<const Domain> domains, std::span<const int> tuple);

class WMaxFunction : public GlobalCostFunction {
 public:
  WMaxFunction(Scope scope, std::vector<int> domain_sizes, WeightMap weights, bool minimum = false);

  const WeightMap& weights() const { return weights_; }
  bool is_minimum() const { return minimum_; }
  std::string kind() const override { return minimum_ ? "wmin" : "wmax"; }
  Cost reference_eval(std::span<const int> tuple) const override;
  SignedCost dedicated_minimum(std::span<const Domain> domains) override;
  std::unique_ptr<CostFunction> clone() const override;

 protected:
  FilterDag build_dag() const override;

 private:
  WeightMap weights_;
  bool minimum_;
};

}  // namespace cfn
