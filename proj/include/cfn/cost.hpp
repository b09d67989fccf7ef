#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cfn {

using Cost = std::uint64_t;
using SignedCost = std::int64_t;

// Largest representable cost. Every network has its own top <= kInfinity.
inline constexpr Cost kInfinity = Cost{1} << 60;
// Absorbing sentinel for the signed arithmetic used inside cost functions.
inline constexpr SignedCost kSignedInf = SignedCost{1} << 60;
inline constexpr SignedCost kNegInf = -kSignedInf;

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// a (+) b, saturating at top.
constexpr Cost cost_add(Cost a, Cost b, Cost top = kInfinity) {
  if (a >= top || b >= top || a + b >= top) return top;
  return a + b;
}

// a (-) b. Requires a >= b; top minus anything stays top.
Cost cost_sub(Cost a, Cost b, Cost top = kInfinity);

// a (-) alpha for a signed alpha: a negative alpha adds -alpha.
Cost cost_shift(Cost a, SignedCost alpha, Cost top = kInfinity);

constexpr bool is_inf(SignedCost a) { return a >= kSignedInf; }

// Exact sum; kSignedInf absorbs.
constexpr SignedCost sadd(SignedCost a, SignedCost b) {
  if (a >= kSignedInf || b >= kSignedInf) return kSignedInf;
  SignedCost s = a + b;
  return s >= kSignedInf ? kSignedInf : s;
}

// Clamp a signed internal value into the cost algebra bounded by top.
Cost to_cost(SignedCost a, Cost top = kInfinity);

constexpr SignedCost to_signed(Cost c) {
  return c >= kInfinity ? kSignedInf : static_cast<SignedCost>(c);
}

std::string cost_to_string(Cost c, Cost top = kInfinity);

}  // namespace cfn
