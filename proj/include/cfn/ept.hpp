#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cfn/model.hpp"
#include "cfn/oracle.hpp"

namespace cfn {

// Per (scope position, value) record of the costs moved out of (minus) and
// into (plus) a global cost function.
class DeltaStore {
 public:
  DeltaStore() = default;
  explicit DeltaStore(std::span<const int> domain_sizes);

  int arity() const { return static_cast<int>(minus_.size()); }
  Cost minus(int pos, int v) const { return minus_[idx(pos)][static_cast<std::size_t>(v)]; }
  Cost plus(int pos, int v) const { return plus_[idx(pos)][static_cast<std::size_t>(v)]; }
  SignedCost net(int pos, int v) const {
    return static_cast<SignedCost>(plus(pos, v)) - static_cast<SignedCost>(minus(pos, v));
  }
  // alpha > 0 is a projection out of the function, alpha < 0 an extension into it.
  void record(int pos, int v, SignedCost alpha);
  void unrecord(int pos, int v, SignedCost alpha);
  bool all_zero() const;

  bool operator==(const DeltaStore& other) const = default;

 private:
  static std::size_t idx(int pos) { return static_cast<std::size_t>(pos); }
  std::vector<std::vector<Cost>> minus_;
  std::vector<std::vector<Cost>> plus_;
};

// Reference cost of the tuple adjusted by every delta of its values. Throws
// InvariantError if the result is negative.
Cost adjusted_eval(const CostFunction& func, const DeltaStore& deltas, std::span<const int> tuple);

// Largest alpha allowed by project(): the conditioned minimum of fn at (x, v).
SignedCost projection_bound(Cfn& cfn, int fn, VarId x, int v);

// Moves alpha from the unary function of x (every value in the domain) to
// W_zero. Negative alpha moves cost from W_zero back to the unary function.
void project_unary(Cfn& cfn, VarId x, SignedCost alpha);

// Moves alpha from function fn (tuples with x = v) to the unary cost W_x(v).
// Negative alpha extends the unary cost into the function. An alpha at or
// above top only raises W_x(v) to top: every tuple it covers is already top.
void project_to_unary(Cfn& cfn, int fn, VarId x, int v, SignedCost alpha);

// Same, for callers that already know alpha is within the bounds.
void project_to_unary_unchecked(Cfn& cfn, int fn, VarId x, int v, SignedCost alpha);

// Moves alpha from function fn (every tuple) to W_zero; alpha >= 0.
void project_to_zero(Cfn& cfn, int fn, SignedCost alpha);

// Dispatches one journal record.
void project(Cfn& cfn, const EptRecord& record);

// Applies the records, in order, to a copy of base.
Cfn replay(const Cfn& base, std::span<const EptRecord> journal);

// True iff eval_total agrees on every complete assignment over the values
// present in both networks' domains.
bool check_equivalence(const Cfn& before, const Cfn& after, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace cfn
