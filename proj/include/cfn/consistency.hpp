#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cfn/model.hpp"
#include "cfn/oracle.hpp"

namespace cfn {

struct ConsistencyReport {
  std::vector<std::pair<VarId, int>> pruned;
  Cost w_zero_gain = 0;
  int iterations = 0;
  bool wipeout = false;
};

// Moves the minimum unary cost of x into W_zero.
void unary_project(Cfn& cfn, VarId x);

// Removes the values whose unary cost plus W_zero reaches top. Sets
// report.wipeout when the domain empties.
std::vector<int> prune_var(Cfn& cfn, VarId x, ConsistencyReport& report);

ConsistencyReport enforce_nc_star(Cfn& cfn);

// Projects the conditioned minima of function fn onto x, then restores NC*
// on x. Returns true when the unary table or domain of x changed.
bool enforce_gac_star_var(Cfn& cfn, int fn, VarId x, ConsistencyReport& report);

ConsistencyReport propagate_gac_star(Cfn& cfn);

// order lists every variable, smallest first. Each function's smallest scope
// variable receives full supports.
ConsistencyReport enforce_tdac(Cfn& cfn, std::span<const VarId> order);

// Breadth-first order of the variables over the incidence graph, starting at root.
std::vector<VarId> incidence_order(const Cfn& cfn, VarId root);

bool is_nc_star(const Cfn& cfn);
bool is_gac_star(const Cfn& cfn, std::uint64_t cap = kDefaultEnumerationCap);
bool is_tdac(const Cfn& cfn, std::span<const VarId> order, std::uint64_t cap = kDefaultEnumerationCap);

// Arc consistency closure of the zero-cost tuples leaves every domain non-empty.
bool vac_check(const Cfn& cfn, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace cfn
