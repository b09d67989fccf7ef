#include "cfn/oracle.hpp"

#include <algorithm>
#include <string>

namespace cfn {

namespace {

void check_cap(std::uint64_t count, std::uint64_t cap) {
  if (count > cap) {
    throw CapExceeded("enumeration of " + std::to_string(count) + " tuples exceeds cap " +
                      std::to_string(cap));
  }
}

Cost clamp(SignedCost c) {
  if (c < 0) return 0;
  return to_cost(c);
}

// Dense min-sum factor over a few auxiliary variables.
struct Factor {
  std::vector<VarId> vars;
  std::vector<int> sizes;
  std::vector<SignedCost> table;

  std::size_t index(std::span<const int> vals) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      idx = idx * static_cast<std::size_t>(sizes[i]) + static_cast<std::size_t>(vals[i]);
    }
    return idx;
  }
};

Factor make_factor(std::vector<VarId> vars, const Cfn& cfn, std::uint64_t cap) {
  Factor func;
  std::sort(vars.begin(), vars.end());
  func.vars = std::move(vars);
  std::uint64_t total = 1;
  for (VarId x : func.vars) {
    func.sizes.push_back(cfn.domain(x).initial_size());
    total *= static_cast<std::uint64_t>(func.sizes.back());
    check_cap(total, cap);
  }
  func.table.assign(total, kSignedInf);
  return func;
}

// Sums the factors and minimizes var out of the result.
Factor eliminate(const std::vector<Factor>& parts, VarId var, const Cfn& cfn, std::uint64_t cap) {
  std::vector<VarId> all;
  for (const auto& p : parts) all.insert(all.end(), p.vars.begin(), p.vars.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<VarId> rest;
  for (VarId x : all) {
    if (x != var) rest.push_back(x);
  }
  Factor out = make_factor(rest, cfn, cap);
  const auto domains = cfn.domains();
  std::vector<int> part_vals;
  std::vector<int> rest_vals(rest.size());
  for_each_tuple(all, domains, [&](std::span<const int> t) {
    SignedCost sum = 0;
    for (const auto& p : parts) {
      part_vals.clear();
      for (VarId x : p.vars) {
        auto k = static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), x) - all.begin());
        part_vals.push_back(t[k]);
      }
      sum = sadd(sum, p.table[p.index(part_vals)]);
      if (is_inf(sum)) return true;
    }
    std::size_t r = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (all[i] != var) rest_vals[r++] = t[i];
    }
    auto& slot = out.table[out.index(rest_vals)];
    slot = std::min(slot, sum);
    return true;
  });
  return out;
}

}  // namespace

MinResult brute_force_min(const CostFunction& func, std::span<const Domain> domains, std::uint64_t cap) {
  check_cap(count_tuples(func.scope(), domains), cap);
  MinResult best;
  SignedCost best_signed = kSignedInf;
  bool first = true;
  for_each_tuple(func.scope(), domains, [&](std::span<const int> t) {
    SignedCost c = func.eval(t);
    if (first || c < best_signed) {
      best_signed = c;
      best.witness.assign(t.begin(), t.end());
      first = false;
    }
    return true;
  });
  best.cost = clamp(best_signed);
  return best;
}

Cost brute_force_conditioned_min(const CostFunction& func, std::span<const Domain> domains, int pos,
                                 int value, std::uint64_t cap) {
  const VarId x = func.scope()[static_cast<std::size_t>(pos)];
  if (!domains[static_cast<std::size_t>(x)].contains(value)) return kInfinity;
  std::vector<Domain> local(domains.begin(), domains.end());
  for (int v : local[static_cast<std::size_t>(x)].values()) {
    if (v != value) local[static_cast<std::size_t>(x)].remove(v);
  }
  return brute_force_min(func, local, cap).cost;
}

MinResult brute_force_solve(const Cfn& cfn, std::uint64_t cap) {
  Scope decision;
  std::vector<VarId> aux;
  for (VarId x = 0; x < cfn.num_variables(); ++x) {
    (cfn.variable(x).auxiliary ? aux : decision).push_back(x);
  }
  check_cap(count_tuples(decision, cfn.domains()), cap);

  std::vector<int> plain;
  std::vector<int> mixed;
  for (int i = 0; i < cfn.num_functions(); ++i) {
    const auto& s = cfn.function(i).scope();
    bool touches = std::any_of(s.begin(), s.end(), [&](VarId x) { return cfn.variable(x).auxiliary; });
    (touches ? mixed : plain).push_back(i);
  }

  const Cost top = cfn.top();
  const SignedCost stop = to_signed(top);
  MinResult best;
  best.cost = top;
  bool found = false;
  std::vector<int> full(static_cast<std::size_t>(cfn.num_variables()), -1);
  std::vector<int> tuple;

  for_each_tuple(decision, cfn.domains(), [&](std::span<const int> t) {
    for (std::size_t i = 0; i < decision.size(); ++i) full[static_cast<std::size_t>(decision[i])] = t[i];
    SignedCost total = to_signed(cfn.w_zero());
    for (VarId x : decision) total = sadd(total, to_signed(cfn.unary(x, full[static_cast<std::size_t>(x)])));
    for (int i : plain) {
      const auto& func = cfn.function(i);
      tuple.clear();
      for (VarId x : func.scope()) tuple.push_back(full[static_cast<std::size_t>(x)]);
      total = sadd(total, func.eval(tuple));
    }
    if (!aux.empty() && total < stop) {
      std::vector<Factor> factors;
      for (VarId q : aux) {
        Factor unary_factor = make_factor({q}, cfn, cap);
        for (int v : cfn.domain(q).values()) unary_factor.table[static_cast<std::size_t>(v)] = to_signed(cfn.unary(q, v));
        factors.push_back(std::move(unary_factor));
      }
      for (int i : mixed) {
        const auto& func = cfn.function(i);
        std::vector<VarId> avars;
        for (VarId x : func.scope()) {
          if (cfn.variable(x).auxiliary) avars.push_back(x);
        }
        Factor fac = make_factor(avars, cfn, cap);
        std::vector<int> avals(avars.size());
        auto fill = [&](std::span<const int> ft, SignedCost c) {
          std::size_t k = 0;
          for (std::size_t j = 0; j < func.scope().size(); ++j) {
            VarId x = func.scope()[j];
            if (cfn.variable(x).auxiliary) {
              if (!cfn.domain(x).contains(ft[j])) return;
              avals[k++] = ft[j];
            } else if (full[static_cast<std::size_t>(x)] != ft[j]) {
              return;
            }
          }
          auto& slot = fac.table[fac.index(avals)];
          slot = std::min(slot, c);
        };
        if (const auto* table = dynamic_cast<const TableFunction*>(&func); table && table->is_sparse()) {
          table->for_each_finite(fill);
        } else {
          std::vector<int> ft(func.scope().size());
          for_each_tuple(avars, cfn.domains(), [&](std::span<const int> at) {
            std::size_t k = 0;
            for (std::size_t j = 0; j < func.scope().size(); ++j) {
              VarId x = func.scope()[j];
              ft[j] = cfn.variable(x).auxiliary ? at[k++] : full[static_cast<std::size_t>(x)];
            }
            fill(ft, func.eval(ft));
            return true;
          });
        }
        factors.push_back(std::move(fac));
      }
      for (VarId q : aux) {
        std::vector<Factor> with;
        std::vector<Factor> without;
        for (auto& fac : factors) {
          bool has = std::find(fac.vars.begin(), fac.vars.end(), q) != fac.vars.end();
          (has ? with : without).push_back(std::move(fac));
        }
        without.push_back(eliminate(with, q, cfn, cap));
        factors = std::move(without);
      }
      for (const auto& fac : factors) total = sadd(total, fac.table.empty() ? kSignedInf : fac.table[0]);
    }
    Cost c = total >= stop ? top : clamp(total);
    if (!found || c < best.cost) {
      best.cost = c;
      best.witness = full;
      found = true;
    }
    return true;
  });
  return best;
}

}  // namespace cfn
