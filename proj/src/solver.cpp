#include "cfn/solver.hpp"

#include <algorithm>
#include <numeric>

namespace cfn {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

struct Search {
  const Cfn& original;
  const SearchConfig& config;
  SearchContext& ctx;
  SearchStats stats;
  bool aborted = false;

  VarId choose() const {
    const Cfn& w = ctx.working();
    VarId best = -1;
    for (int pass = 0; pass < 2 && best < 0; ++pass) {
      const bool aux = pass == 1;
      for (VarId x = 0; x < w.num_variables(); ++x) {
        if (w.variable(x).auxiliary != aux || w.domain(x).size() <= 1) continue;
        if (best < 0) {
          best = x;
          if (config.var_order == VarOrder::static_order) break;
        } else if (w.domain(x).size() < w.domain(best).size()) {
          best = x;
        }
      }
    }
    return best;
  }

  std::vector<int> value_order(VarId x) const {
    const Cfn& w = ctx.working();
    auto values = w.domain(x).values();
    if (config.value_order == ValueOrder::unary_cost) {
      std::stable_sort(values.begin(), values.end(), [&](int a, int b) { return w.unary(x, a) < w.unary(x, b); });
    }
    return values;
  }

  void leaf() {
    const Cfn& w = ctx.working();
    std::vector<int> assignment;
    for (VarId x = 0; x < w.num_variables(); ++x) assignment.push_back(w.domain(x).first());
    const Cost cost = eval_total(original, assignment);
    if (cost < ctx.working().top()) {
      stats.best_cost = cost;
      stats.best_assignment = std::move(assignment);
      ctx.set_bound(cost);
    }
  }

  void dfs() {
    if (aborted) return;
    if (++stats.nodes > config.node_limit) {
      aborted = true;
      stats.node_limit_hit = true;
      return;
    }
    const VarId x = choose();
    if (x < 0) {
      leaf();
      return;
    }
    for (int v : value_order(x)) {
      if (aborted) return;
      if (!ctx.working().domain(x).contains(v)) continue;
      const auto mark = ctx.mark();
      if (ctx.assign_and_propagate(x, v)) {
        dfs();
      } else {
        ++stats.backtracks;
      }
      ctx.undo(mark);
    }
  }
};

}  // namespace

SearchContext::SearchContext(const Cfn& cfn, SearchConfig config) : config_(config), work_(cfn) {
  work_.set_journaling(false);
  for (int i = 0; i < work_.num_functions(); ++i) {
    if (auto* g = dynamic_cast<GlobalCostFunction*>(&work_.function(i))) g->set_route(config_.route);
  }
  work_.attach_trail(&trail_);
  order_.resize(at(work_.num_variables()));
  std::iota(order_.rbegin(), order_.rend(), 0);
}

bool SearchContext::propagate() {
  ConsistencyReport report;
  switch (config_.consistency) {
    case ConsistencyLevel::nc:
      report = enforce_nc_star(work_);
      break;
    case ConsistencyLevel::gac:
      report = propagate_gac_star(work_);
      break;
    case ConsistencyLevel::gac_tdac:
      report = propagate_gac_star(work_);
      if (!report.wipeout) report = enforce_tdac(work_, order_);
      if (!report.wipeout) report = propagate_gac_star(work_);
      break;
  }
  return !report.wipeout && work_.w_zero() < work_.top();
}

bool SearchContext::assign_and_propagate(VarId x, int v) {
  if (!work_.domain(x).contains(v)) throw PreconditionError("value not in the domain");
  for (int w : work_.domain(x).values()) {
    if (w != v) work_.remove_value(x, w);
  }
  return propagate();
}

SearchStats solve(const Cfn& cfn, const SearchConfig& config) {
  SearchContext ctx(cfn, config);
  if (config.initial_ub) ctx.set_bound(std::min(cfn.top(), *config.initial_ub));
  Search search{cfn, config, ctx, {}, false};
  search.stats.best_cost = ctx.working().top();
  for (VarId x = 0; x < cfn.num_variables(); ++x) {
    if (cfn.domain(x).empty()) {
      search.stats.proved_optimal = true;
      return search.stats;
    }
  }
  if (ctx.propagate()) {
    search.dfs();
  } else {
    ++search.stats.backtracks;
  }
  search.stats.proved_optimal = !search.aborted;
  return search.stats;
}

}  // namespace cfn
