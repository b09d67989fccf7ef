#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cfn/model.hpp"

namespace cfn {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

struct MinResult {
  Cost cost = kInfinity;
  std::vector<int> witness;  // lexicographically smallest minimizer
};

// Exact minimum of f.eval over the current domains (indexed by variable id).
// Signed results are clamped to [0, kInfinity].
MinResult brute_force_min(const CostFunction& func, std::span<const Domain> domains,
                          std::uint64_t cap = kDefaultEnumerationCap);

// Minimum over tuples with scope position pos fixed to value.
Cost brute_force_conditioned_min(const CostFunction& func, std::span<const Domain> domains, int pos,
                                 int value, std::uint64_t cap = kDefaultEnumerationCap);

// Exact optimum of eval_total over the current domains. Auxiliary variables
// are not enumerated: for each assignment of the other variables they are
// minimized out by variable elimination, and the witness lists only the
// non-auxiliary variables' values (auxiliary entries are -1).
MinResult brute_force_solve(const Cfn& cfn, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace cfn
