#include "cfn/cost.hpp"

namespace cfn {

Cost cost_sub(Cost a, Cost b, Cost top) {
  if (a >= top) return top;
  if (a < b) {
    throw PreconditionError("cost_sub: " + std::to_string(a) + " < " + std::to_string(b));
  }
  return a - b;
}

Cost cost_shift(Cost a, SignedCost alpha, Cost top) {
  if (alpha >= 0) return cost_sub(a, static_cast<Cost>(alpha), top);
  return cost_add(a, static_cast<Cost>(-alpha), top);
}

Cost to_cost(SignedCost a, Cost top) {
  if (a < 0) throw InvariantError("negative cost " + std::to_string(a));
  if (a >= kSignedInf) return top;
  Cost c = static_cast<Cost>(a);
  return c >= top ? top : c;
}

std::string cost_to_string(Cost c, Cost top) {
  if (c >= top) return "top";
  return std::to_string(c);
}

}  // namespace cfn
