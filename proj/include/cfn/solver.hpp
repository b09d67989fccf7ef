#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfn/consistency.hpp"
#include "cfn/global_function.hpp"
#include "cfn/model.hpp"

namespace cfn {

enum class ConsistencyLevel { nc, gac, gac_tdac };
enum class VarOrder { static_order, min_domain };
enum class ValueOrder { unary_cost, index };

struct SearchConfig {
  ConsistencyLevel consistency = ConsistencyLevel::gac_tdac;
  VarOrder var_order = VarOrder::min_domain;
  ValueOrder value_order = ValueOrder::unary_cost;
  std::optional<Cost> initial_ub;
  std::uint64_t node_limit = 10'000'000;
  std::uint64_t seed = 0;
  MinRoute route = MinRoute::dag;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t backtracks = 0;
  Cost best_cost = kInfinity;
  std::vector<int> best_assignment;  // one value per variable; empty when none found
  bool proved_optimal = false;
  bool node_limit_hit = false;
};

// Working copy of a network with a trail, maintaining the configured consistency.
class SearchContext {
 public:
  SearchContext(const Cfn& cfn, SearchConfig config);
  SearchContext(const SearchContext&) = delete;
  SearchContext& operator=(const SearchContext&) = delete;

  Cfn& working() { return work_; }
  const Cfn& working() const { return work_; }
  const std::vector<VarId>& tdac_order() const { return order_; }

  // Enforces the consistency; false on a wipeout or when W_zero reaches top.
  bool propagate();
  // Restricts x to v and propagates.
  bool assign_and_propagate(VarId x, int v);
  std::size_t mark() const { return trail_.mark(); }
  void undo(std::size_t mark) { trail_.undo_to(mark, work_); }
  void set_bound(Cost ub) { work_.set_top(ub); }

 private:
  SearchConfig config_;
  Cfn work_;
  Trail trail_;
  std::vector<VarId> order_;
};

SearchStats solve(const Cfn& cfn, const SearchConfig& config = {});

}  // namespace cfn
