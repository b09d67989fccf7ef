#include "cfn/consistency.hpp"

#include <algorithm>
#include <deque>

#include "cfn/ept.hpp"

namespace cfn {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

// Moves a conditioned minimum into W_x(v); minima at or above top make the value top.
void absorb(Cfn& cfn, int fn, VarId x, int v, SignedCost alpha) {
  if (alpha < 0) throw InvariantError("negative conditioned minimum on a live value");
  if (alpha == 0) return;
  const SignedCost top = to_signed(cfn.top());
  project_to_unary_unchecked(cfn, fn, x, v, std::min(alpha, top));
}

std::vector<Cost> unary_row(const Cfn& cfn, VarId x) {
  std::vector<Cost> row;
  for (int v = 0; v < cfn.domain(x).initial_size(); ++v) row.push_back(cfn.unary(x, v));
  return row;
}

// Prunes every variable; returns the ones whose domain shrank.
std::vector<VarId> prune_all(Cfn& cfn, ConsistencyReport& report) {
  std::vector<VarId> changed;
  for (VarId x = 0; x < cfn.num_variables(); ++x) {
    if (!prune_var(cfn, x, report).empty()) changed.push_back(x);
    if (report.wipeout) break;
  }
  return changed;
}

// Sum of the unary costs of the other scope variables, on a tuple.
Cost unary_sum(const Cfn& cfn, const Scope& scope, std::span<const int> tuple, VarId skip) {
  Cost total = 0;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (scope[i] == skip) continue;
    total = cost_add(total, cfn.unary(scope[i], tuple[i]), cfn.top());
  }
  return total;
}

}  // namespace

void unary_project(Cfn& cfn, VarId x) {
  const auto& dom = cfn.domain(x);
  if (dom.empty()) return;
  Cost alpha = kInfinity;
  for (int v : dom.values()) alpha = std::min(alpha, cfn.unary(x, v));
  if (alpha > 0) project_unary(cfn, x, to_signed(alpha));
}

std::vector<int> prune_var(Cfn& cfn, VarId x, ConsistencyReport& report) {
  std::vector<int> removed;
  const Cost top = cfn.top();
  for (int v : cfn.domain(x).values()) {
    if (cost_add(cfn.unary(x, v), cfn.w_zero(), top) >= top) {
      cfn.remove_value(x, v);
      removed.push_back(v);
      report.pruned.emplace_back(x, v);
    }
  }
  if (cfn.domain(x).empty()) report.wipeout = true;
  return removed;
}

ConsistencyReport enforce_nc_star(Cfn& cfn) {
  ConsistencyReport report;
  const Cost before = cfn.w_zero();
  for (VarId x = 0; x < cfn.num_variables() && !report.wipeout; ++x) {
    ++report.iterations;
    if (cfn.domain(x).empty()) {
      report.wipeout = true;
      break;
    }
    unary_project(cfn, x);
  }
  if (!report.wipeout) prune_all(cfn, report);
  report.w_zero_gain = cfn.w_zero() - before;
  return report;
}

bool enforce_gac_star_var(Cfn& cfn, int fn, VarId x, ConsistencyReport& report) {
  auto& func = cfn.function(fn);
  const int pos = func.position_of(x);
  if (pos < 0) throw PreconditionError("variable not in the function's scope");
  const auto before_row = unary_row(cfn, x);
  const auto before_stamp = cfn.domain(x).stamp();
  const auto minima = func.conditioned_minima(pos, cfn.domains());
  for (int v : cfn.domain(x).values()) absorb(cfn, fn, x, v, minima[at(v)]);
  unary_project(cfn, x);
  prune_var(cfn, x, report);
  return before_stamp != cfn.domain(x).stamp() || before_row != unary_row(cfn, x);
}

ConsistencyReport propagate_gac_star(Cfn& cfn) {
  ConsistencyReport report = enforce_nc_star(cfn);
  const Cost start = cfn.w_zero() - report.w_zero_gain;
  if (report.wipeout) return report;
  const int n = cfn.num_variables();
  std::deque<VarId> queue;
  std::vector<char> queued(at(n), 1);
  for (VarId x = 0; x < n; ++x) queue.push_back(x);
  auto enqueue = [&](VarId y) {
    if (!queued[at(y)]) {
      queued[at(y)] = 1;
      queue.push_back(y);
    }
  };
  while (!queue.empty() && !report.wipeout) {
    const VarId x = queue.front();
    queue.pop_front();
    queued[at(x)] = 0;
    for (int fn : cfn.functions_of(x)) {
      const auto scope = cfn.function(fn).scope();
      for (VarId y : scope) {
        if (y == x && scope.size() > 1) continue;
        ++report.iterations;
        const Cost w_before = cfn.w_zero();
        if (enforce_gac_star_var(cfn, fn, y, report)) enqueue(y);
        if (report.wipeout) break;
        if (cfn.w_zero() != w_before) {
          for (VarId z : prune_all(cfn, report)) enqueue(z);
          if (report.wipeout) break;
        }
      }
      if (report.wipeout) break;
    }
  }
  report.w_zero_gain = cfn.w_zero() - start;
  return report;
}

ConsistencyReport enforce_tdac(Cfn& cfn, std::span<const VarId> order) {
  const int n = cfn.num_variables();
  if (static_cast<int>(order.size()) != n) throw PreconditionError("order must list every variable");
  std::vector<int> rank(at(n), -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const VarId x = order[i];
    if (x < 0 || x >= n || rank[at(x)] >= 0) throw PreconditionError("order is not a permutation");
    rank[at(x)] = static_cast<int>(i);
  }
  ConsistencyReport report = enforce_nc_star(cfn);
  const Cost start = cfn.w_zero() - report.w_zero_gain;
  if (report.wipeout) return report;

  auto first_var = [&](int fn) {
    const auto& s = cfn.function(fn).scope();
    return *std::min_element(s.begin(), s.end(), [&](VarId a, VarId b) { return rank[at(a)] < rank[at(b)]; });
  };
  std::vector<int> fns(at(cfn.num_functions()));
  for (int i = 0; i < cfn.num_functions(); ++i) fns[at(i)] = i;
  std::stable_sort(fns.begin(), fns.end(), [&](int a, int b) { return rank[at(first_var(a))] > rank[at(first_var(b))]; });

  for (int fn : fns) {
    ++report.iterations;
    const VarId m = first_var(fn);
    const auto scope = cfn.function(fn).scope();
    for (VarId y : scope) {
      if (y == m) continue;
      for (int a : cfn.domain(y).values()) {
        const Cost c = cfn.unary(y, a);
        if (c > 0) project_to_unary_unchecked(cfn, fn, y, a, -to_signed(c));
      }
    }
    const int pos = cfn.function(fn).position_of(m);
    const auto minima = cfn.function(fn).conditioned_minima(pos, cfn.domains());
    for (int v : cfn.domain(m).values()) absorb(cfn, fn, m, v, minima[at(v)]);
    unary_project(cfn, m);
    prune_all(cfn, report);
    if (report.wipeout) break;
  }
  report.w_zero_gain = cfn.w_zero() - start;
  return report;
}

std::vector<VarId> incidence_order(const Cfn& cfn, VarId root) {
  const int n = cfn.num_variables();
  std::vector<char> seen(at(n), 0);
  std::vector<char> used(at(cfn.num_functions()), 0);
  std::vector<VarId> order;
  auto visit = [&](VarId start) {
    std::deque<VarId> queue{start};
    seen[at(start)] = 1;
    while (!queue.empty()) {
      const VarId x = queue.front();
      queue.pop_front();
      order.push_back(x);
      for (int fn : cfn.functions_of(x)) {
        if (used[at(fn)]) continue;
        used[at(fn)] = 1;
        for (VarId y : cfn.function(fn).scope()) {
          if (!seen[at(y)]) {
            seen[at(y)] = 1;
            queue.push_back(y);
          }
        }
      }
    }
  };
  visit(root);
  for (VarId x = 0; x < n; ++x) {
    if (!seen[at(x)]) visit(x);
  }
  return order;
}

bool is_nc_star(const Cfn& cfn) {
  const Cost top = cfn.top();
  for (VarId x = 0; x < cfn.num_variables(); ++x) {
    const auto& dom = cfn.domain(x);
    if (dom.empty()) return false;
    bool zero = false;
    for (int v : dom.values()) {
      if (cost_add(cfn.unary(x, v), cfn.w_zero(), top) >= top) return false;
      zero = zero || cfn.unary(x, v) == 0;
    }
    if (!zero) return false;
  }
  return true;
}

bool is_gac_star(const Cfn& cfn, std::uint64_t cap) {
  if (!is_nc_star(cfn)) return false;
  for (int fn = 0; fn < cfn.num_functions(); ++fn) {
    const auto& func = cfn.function(fn);
    for (int pos = 0; pos < func.arity(); ++pos) {
      for (int v : cfn.domain(func.scope()[at(pos)]).values()) {
        if (brute_force_conditioned_min(func, cfn.domains(), pos, v, cap) != 0) return false;
      }
    }
  }
  return true;
}

bool is_tdac(const Cfn& cfn, std::span<const VarId> order, std::uint64_t cap) {
  if (!is_nc_star(cfn)) return false;
  std::vector<int> rank(at(cfn.num_variables()), 0);
  for (std::size_t i = 0; i < order.size(); ++i) rank[at(order[i])] = static_cast<int>(i);
  for (int fn = 0; fn < cfn.num_functions(); ++fn) {
    const auto& func = cfn.function(fn);
    const auto& scope = func.scope();
    const VarId m = *std::min_element(scope.begin(), scope.end(), [&](VarId a, VarId b) { return rank[at(a)] < rank[at(b)]; });
    if (count_tuples(scope, cfn.domains()) > cap) throw CapExceeded("T-DAC check exceeds the enumeration cap");
    std::vector<Domain> doms(cfn.domains().begin(), cfn.domains().end());
    for (int v : cfn.domain(m).values()) {
      Domain only(doms[at(m)].initial_size());
      for (int w = 0; w < only.initial_size(); ++w) {
        if (w != v) only.remove(w);
      }
      std::swap(doms[at(m)], only);
      bool supported = false;
      for_each_tuple(scope, doms, [&](std::span<const int> t) {
        const SignedCost c = func.eval(t);
        supported = c == 0 && unary_sum(cfn, scope, t, m) == 0;
        return !supported;
      });
      std::swap(doms[at(m)], only);
      if (!supported) return false;
    }
  }
  return true;
}

bool vac_check(const Cfn& cfn, std::uint64_t cap) {
  std::vector<Domain> doms;
  for (VarId x = 0; x < cfn.num_variables(); ++x) {
    Domain d = cfn.domain(x);
    for (int v : cfn.domain(x).values()) {
      if (cfn.unary(x, v) != 0) d.remove(v);
    }
    if (d.empty()) return false;
    doms.push_back(std::move(d));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int fn = 0; fn < cfn.num_functions(); ++fn) {
      const auto& func = cfn.function(fn);
      const auto& scope = func.scope();
      if (count_tuples(scope, doms) > cap) throw CapExceeded("VAC check exceeds the enumeration cap");
      std::vector<std::vector<char>> seen(scope.size());
      for (std::size_t i = 0; i < scope.size(); ++i) seen[i].assign(at(doms[at(scope[i])].initial_size()), 0);
      for_each_tuple(scope, doms, [&](std::span<const int> t) {
        if (func.eval(t) == 0) {
          for (std::size_t i = 0; i < t.size(); ++i) seen[i][at(t[i])] = 1;
        }
        return true;
      });
      for (std::size_t i = 0; i < scope.size(); ++i) {
        auto& d = doms[at(scope[i])];
        for (int v : d.values()) {
          if (!seen[i][at(v)]) {
            d.remove(v);
            changed = true;
          }
        }
        if (d.empty()) return false;
      }
    }
  }
  return true;
}

}  // namespace cfn
