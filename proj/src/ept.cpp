#include "cfn/ept.hpp"

#include <algorithm>
#include <string>

namespace cfn {

DeltaStore::DeltaStore(std::span<const int> domain_sizes) {
  for (int d : domain_sizes) {
    minus_.emplace_back(static_cast<std::size_t>(d), 0);
    plus_.emplace_back(static_cast<std::size_t>(d), 0);
  }
}

void DeltaStore::record(int pos, int v, SignedCost alpha) {
  if (alpha > 0) {
    minus_[idx(pos)][static_cast<std::size_t>(v)] += static_cast<Cost>(alpha);
  } else if (alpha < 0) {
    plus_[idx(pos)][static_cast<std::size_t>(v)] += static_cast<Cost>(-alpha);
  }
}

void DeltaStore::unrecord(int pos, int v, SignedCost alpha) {
  if (alpha > 0) {
    minus_[idx(pos)][static_cast<std::size_t>(v)] -= static_cast<Cost>(alpha);
  } else if (alpha < 0) {
    plus_[idx(pos)][static_cast<std::size_t>(v)] -= static_cast<Cost>(-alpha);
  }
}

bool DeltaStore::all_zero() const {
  for (std::size_t p = 0; p < minus_.size(); ++p) {
    for (std::size_t v = 0; v < minus_[p].size(); ++v) {
      if (minus_[p][v] != 0 || plus_[p][v] != 0) return false;
    }
  }
  return true;
}

Cost adjusted_eval(const CostFunction& func, const DeltaStore& deltas, std::span<const int> tuple) {
  Cost base = func.reference_eval(tuple);
  if (base >= kInfinity) return kInfinity;
  // Each variable's pair is applied as one signed amount; only the final sum
  // has to be non-negative.
  SignedCost total = static_cast<SignedCost>(base);
  for (int pos = 0; pos < func.arity(); ++pos) {
    total += deltas.net(pos, tuple[static_cast<std::size_t>(pos)]);
  }
  if (total < 0) {
    throw InvariantError("adjusted evaluation underflows: " + std::to_string(total));
  }
  return to_cost(total);
}

SignedCost projection_bound(Cfn& cfn, int fn, VarId x, int v) {
  auto& func = cfn.function(fn);
  int pos = func.position_of(x);
  if (pos < 0) throw PreconditionError("variable not in the function's scope");
  return func.conditioned_minima(pos, cfn.domains())[static_cast<std::size_t>(v)];
}

void project_unary(Cfn& cfn, VarId x, SignedCost alpha) {
  if (alpha == 0) return;
  const Cost top = cfn.top();
  const auto& dom = cfn.domain(x);
  if (alpha > 0) {
    for (int v : dom.values()) {
      if (cfn.unary(x, v) < static_cast<Cost>(alpha)) {
        throw PreconditionError("unary projection exceeds the unary minimum");
      }
    }
  } else if (static_cast<Cost>(-alpha) > cfn.w_zero()) {
    throw PreconditionError("extension exceeds W_zero");
  }
  for (int v : dom.values()) cfn.set_unary(x, v, cost_shift(cfn.unary(x, v), alpha, top));
  cfn.set_w_zero(cost_shift(cfn.w_zero(), -alpha, top));
  cfn.append_journal({-1, x, -1, alpha});
}

namespace {

void shift_into_unary(Cfn& cfn, int fn, VarId x, int v, SignedCost alpha) {
  const Cost top = cfn.top();
  if (alpha >= static_cast<SignedCost>(top)) {
    cfn.set_unary(x, v, top);
    return;
  }
  int pos = cfn.function(fn).position_of(x);
  cfn.shift_function(fn, pos, v, alpha);
  cfn.set_unary(x, v, cost_shift(cfn.unary(x, v), -alpha, top));
}

}  // namespace

void project_to_unary(Cfn& cfn, int fn, VarId x, int v, SignedCost alpha) {
  if (alpha == 0) return;
  if (cfn.function(fn).position_of(x) < 0) throw PreconditionError("variable not in the function's scope");
  if (!cfn.domain(x).contains(v)) throw PreconditionError("value not in the domain");
  if (alpha < 0) {
    if (cfn.unary(x, v) < cfn.top() && static_cast<Cost>(-alpha) > cfn.unary(x, v)) {
      throw PreconditionError("extension exceeds the unary cost");
    }
  } else if (alpha > projection_bound(cfn, fn, x, v)) {
    throw PreconditionError("projection exceeds the conditioned minimum");
  }
  shift_into_unary(cfn, fn, x, v, alpha);
  cfn.append_journal({fn, x, v, alpha});
}

void project_to_unary_unchecked(Cfn& cfn, int fn, VarId x, int v, SignedCost alpha) {
  if (alpha == 0) return;
  shift_into_unary(cfn, fn, x, v, alpha);
  cfn.append_journal({fn, x, v, alpha});
}

void project_to_zero(Cfn& cfn, int fn, SignedCost alpha) {
  if (alpha == 0) return;
  auto& func = cfn.function(fn);
  if (alpha < 0) throw PreconditionError("extension from W_zero to a function is not supported");
  if (alpha > func.minimum(cfn.domains())) throw PreconditionError("projection exceeds the minimum");
  if (func.arity() == 0) throw PreconditionError("function has an empty scope");
  for (int v = 0; v < func.domain_sizes()[0]; ++v) cfn.shift_function(fn, 0, v, alpha);
  cfn.set_w_zero(cost_shift(cfn.w_zero(), -alpha, cfn.top()));
  cfn.append_journal({fn, -1, -1, alpha});
}

void project(Cfn& cfn, const EptRecord& r) {
  if (r.function < 0) {
    project_unary(cfn, r.var, r.alpha);
  } else if (r.var < 0) {
    project_to_zero(cfn, r.function, r.alpha);
  } else {
    project_to_unary(cfn, r.function, r.var, r.value, r.alpha);
  }
}

Cfn replay(const Cfn& base, std::span<const EptRecord> journal) {
  Cfn out(base);
  for (const auto& r : journal) project(out, r);
  return out;
}

bool check_equivalence(const Cfn& before, const Cfn& after, std::uint64_t cap) {
  if (before.num_variables() != after.num_variables()) return false;
  std::vector<Domain> common;
  Scope all;
  for (VarId x = 0; x < before.num_variables(); ++x) {
    if (before.domain(x).initial_size() != after.domain(x).initial_size()) return false;
    Domain d = before.domain(x);
    for (int v : before.domain(x).values()) {
      if (!after.domain(x).contains(v)) d.remove(v);
    }
    common.push_back(d);
    all.push_back(x);
  }
  if (count_tuples(all, common) > cap) throw CapExceeded("equivalence check exceeds the enumeration cap");
  bool same = true;
  for_each_tuple(all, common, [&](std::span<const int> t) {
    same = eval_total(before, t) == eval_total(after, t);
    return same;
  });
  return same;
}

}  // namespace cfn
