#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cfn/dag.hpp"
#include "cfn/ept.hpp"
#include "cfn/model.hpp"

namespace cfn {

// How a global function answers minimum and conditioned-minimum queries.
enum class MinRoute { dag, dedicated };

// Base of the global cost functions. Shifts are recorded in a DeltaStore and
// forwarded to the filtering DAG leaves; the reference evaluator is never
// rewritten.
class GlobalCostFunction : public CostFunction {
 public:
  GlobalCostFunction(Scope scope, std::vector<int> domain_sizes);

  const DeltaStore* deltas() const override { return &deltas_; }
  const DeltaStore& shifts() const { return deltas_; }

  SignedCost eval(std::span<const int> tuple) const override;
  SignedCost minimum(std::span<const Domain> domains) override;
  std::vector<SignedCost> conditioned_minima(int pos, std::span<const Domain> domains) override;
  void shift(int pos, int value, SignedCost alpha) override;
  void unshift(int pos, int value, SignedCost alpha) override;

  MinRoute route() const { return route_; }
  void set_route(MinRoute r) { route_ = r; }

  // The filtering DAG of the current (shifted) function, built on first use.
  FilterDag& dag();

  // Dedicated algorithms, applied to the current (shifted) function.
  virtual SignedCost dedicated_minimum(std::span<const Domain> domains) = 0;
  // Default: rerun dedicated_minimum with the domain reduced to each value.
  virtual std::vector<SignedCost> dedicated_conditioned_minima(int pos, std::span<const Domain> domains);

 protected:
  // DAG of the unshifted function.
  virtual FilterDag build_dag() const = 0;
  virtual void on_shift(int /*pos*/, int /*value*/, SignedCost /*alpha*/) {}

 private:
  bool memo_fresh(std::span<const Domain> domains) const;
  void remember_domains(std::span<const Domain> domains);

  DeltaStore deltas_;
  MinRoute route_ = MinRoute::dag;
  std::optional<FilterDag> dag_;
  std::vector<std::uint64_t> stamps_;
};

// Leaf cost of a value: 0 when it matches the set, else the mismatch cost.
inline SignedCost mismatch_cost(bool matches, Cost mismatch) {
  return matches ? 0 : to_signed(mismatch);
}

}  // namespace cfn
