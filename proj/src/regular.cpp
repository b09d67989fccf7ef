#include "cfn/regular.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cfn {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

SignedCost min_over_domain(const Domain& dom, int pos, const DeltaStore* shifts,
                           const std::function<SignedCost(int)>& base) {
  SignedCost best = kSignedInf;
  for (int v : dom.values()) {
    SignedCost b = base(v);
    if (is_inf(b)) continue;
    best = std::min(best, sadd(b, shifts ? shifts->net(pos, v) : 0));
  }
  return best;
}

std::vector<int> symbols_of(const Automaton& aut) {
  std::set<int> s;
  for (const auto& t : aut.transitions) s.insert(t.symbol);
  return {s.begin(), s.end()};
}

}  // namespace

bool Automaton::is_final(int q) const { return std::find(finals.begin(), finals.end(), q) != finals.end(); }

bool Automaton::accepts(std::span<const int> word) const {
  std::vector<char> cur(at(num_states), 0);
  cur[at(initial)] = 1;
  for (int c : word) {
    std::vector<char> next(at(num_states), 0);
    for (const auto& t : transitions) {
      if (t.symbol == c && cur[at(t.from)]) next[at(t.to)] = 1;
    }
    cur = std::move(next);
  }
  for (int q = 0; q < num_states; ++q) {
    if (cur[at(q)] && is_final(q)) return true;
  }
  return false;
}

void check_automaton(const Automaton& aut) {
  auto ok = [&](int q) { return q >= 0 && q < aut.num_states; };
  if (aut.num_states < 1 || !ok(aut.initial)) throw PreconditionError("automaton has a bad initial state");
  for (int q : aut.finals) {
    if (!ok(q)) throw PreconditionError("automaton has a bad final state");
  }
  for (const auto& t : aut.transitions) {
    if (!ok(t.from) || !ok(t.to) || t.symbol < 0) throw PreconditionError("automaton has a bad transition");
  }
}

WeightedAutomaton::WeightedAutomaton(int states, int alphabet_size)
    : num_states(states),
      alphabet(alphabet_size),
      start(at(states), kInfinity),
      final(at(states), kInfinity),
      sigma(at(states) * at(states) * at(alphabet_size), kInfinity) {}

Cost WeightedAutomaton::transition(int q, int w, int q2) const {
  if (w < 0 || w >= alphabet) return kInfinity;
  return sigma[(at(q) * at(alphabet) + at(w)) * at(num_states) + at(q2)];
}

void WeightedAutomaton::set_transition(int q, int w, int q2, Cost c) {
  sigma.at((at(q) * at(alphabet) + at(w)) * at(num_states) + at(q2)) = std::min(c, kInfinity);
}

void check_automaton(const WeightedAutomaton& aut) {
  if (aut.num_states < 1 || aut.alphabet < 1) throw PreconditionError("weighted automaton is empty");
  if (aut.start.size() != at(aut.num_states) || aut.final.size() != at(aut.num_states) ||
      aut.sigma.size() != at(aut.num_states) * at(aut.num_states) * at(aut.alphabet)) {
    throw PreconditionError("weighted automaton tables have the wrong size");
  }
}

Cost regular_cost(const Automaton& aut, std::span<const int> tuple) {
  std::vector<SignedCost> reach(at(aut.num_states), kSignedInf);
  reach[at(aut.initial)] = 0;
  for (int v : tuple) {
    std::vector<SignedCost> next(reach.size(), kSignedInf);
    for (const auto& t : aut.transitions) {
      next[at(t.to)] = std::min(next[at(t.to)], sadd(reach[at(t.from)], t.symbol == v ? 0 : 1));
    }
    reach = std::move(next);
  }
  SignedCost best = kSignedInf;
  for (int q : aut.finals) best = std::min(best, reach[at(q)]);
  return to_cost(best);
}

Cost weighted_regular_cost(const WeightedAutomaton& aut, std::span<const int> tuple) {
  const int states = aut.num_states;
  std::vector<SignedCost> reach(at(states));
  for (int q = 0; q < states; ++q) reach[at(q)] = to_signed(aut.start[at(q)]);
  for (int v : tuple) {
    std::vector<SignedCost> next(reach.size(), kSignedInf);
    for (int q = 0; q < states; ++q) {
      if (is_inf(reach[at(q)])) continue;
      for (int q2 = 0; q2 < states; ++q2) {
        next[at(q2)] = std::min(next[at(q2)], sadd(reach[at(q)], to_signed(aut.transition(q, v, q2))));
      }
    }
    reach = std::move(next);
  }
  SignedCost best = kSignedInf;
  for (int q = 0; q < states; ++q) best = std::min(best, sadd(reach[at(q)], to_signed(aut.final[at(q)])));
  return to_cost(best);
}

FilterDag regular_build_dag(const Automaton& aut, const Scope& scope, std::span<const int> sizes) {
  check_automaton(aut);
  FilterDag dag;
  const int n = static_cast<int>(scope.size());
  std::map<std::pair<int, int>, int> leaf;  // (position, symbol)
  auto leaf_of = [&](int i, int c) {
    auto it = leaf.find({i, c});
    if (it != leaf.end()) return it->second;
    std::vector<SignedCost> costs(at(sizes[at(i)]));
    for (int w = 0; w < sizes[at(i)]; ++w) costs[at(w)] = w == c ? 0 : 1;
    return leaf[{i, c}] = dag.add_leaf(scope[at(i)], std::move(costs));
  };
  // layer[q]: node for "state q after positions 0..i", -1 when unreachable.
  std::vector<int> layer(at(aut.num_states), -1);
  for (int i = 0; i < n; ++i) {
    std::vector<std::vector<int>> children(at(aut.num_states));
    std::map<std::pair<int, int>, int> sums;  // (from state, symbol)
    for (const auto& t : aut.transitions) {
      int child;
      if (i == 0) {
        if (t.from != aut.initial) continue;
        child = leaf_of(0, t.symbol);
      } else {
        int prev = layer[at(t.from)];
        if (prev < 0) continue;
        auto it = sums.find({t.from, t.symbol});
        if (it != sums.end()) {
          child = it->second;
        } else {
          child = sums[{t.from, t.symbol}] = dag.add_sum({prev, leaf_of(i, t.symbol)});
        }
      }
      auto& ch = children[at(t.to)];
      if (std::find(ch.begin(), ch.end(), child) == ch.end()) ch.push_back(child);
    }
    std::vector<int> next(at(aut.num_states), -1);
    for (int q = 0; q < aut.num_states; ++q) {
      if (!children[at(q)].empty()) next[at(q)] = dag.add_min(std::move(children[at(q)]));
    }
    layer = std::move(next);
  }
  std::vector<int> finals;
  for (int q = 0; q < aut.num_states; ++q) {
    if (aut.is_final(q) && layer[at(q)] >= 0) finals.push_back(layer[at(q)]);
  }
  dag.set_root(dag.add_min(std::move(finals), scope));
  dag.compact();
  return dag;
}

FilterDag weighted_regular_build_dag(const WeightedAutomaton& aut, const Scope& scope, std::span<const int> sizes) {
  check_automaton(aut);
  FilterDag dag;
  const int n = static_cast<int>(scope.size());
  const int states = aut.num_states;
  std::vector<int> layer(at(states), -1);
  for (int i = 0; i < n; ++i) {
    std::vector<int> next(at(states), -1);
    for (int q2 = 0; q2 < states; ++q2) {
      std::vector<int> children;
      for (int q = 0; q < states; ++q) {
        if (i == 0 ? aut.start[at(q)] >= kInfinity : layer[at(q)] < 0) continue;
        std::vector<SignedCost> costs(at(sizes[at(i)]));
        bool finite = false;
        for (int w = 0; w < sizes[at(i)]; ++w) {
          SignedCost c = to_signed(aut.transition(q, w, q2));
          if (i == 0) c = sadd(c, to_signed(aut.start[at(q)]));
          if (i == n - 1) c = sadd(c, to_signed(aut.final[at(q2)]));
          costs[at(w)] = c;
          finite = finite || !is_inf(c);
        }
        if (!finite) continue;
        int lf = dag.add_leaf(scope[at(i)], std::move(costs));
        children.push_back(i == 0 ? lf : dag.add_sum({layer[at(q)], lf}));
      }
      if (!children.empty()) next[at(q2)] = dag.add_min(std::move(children));
    }
    layer = std::move(next);
  }
  std::vector<int> ends;
  for (int q = 0; q < states; ++q) {
    if (layer[at(q)] >= 0) ends.push_back(layer[at(q)]);
  }
  dag.set_root(dag.add_min(std::move(ends), scope));
  dag.compact();
  return dag;
}

SignedCost regular_min(const Automaton& aut, const Scope& scope, std::span<const Domain> domains,
                       const DeltaStore* shifts) {
  const auto symbols = symbols_of(aut);
  std::vector<SignedCost> reach(at(aut.num_states), kSignedInf);
  reach[at(aut.initial)] = 0;
  std::map<int, SignedCost> symbol_cost;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    const auto& dom = domains[at(scope[i])];
    const int pos = static_cast<int>(i);
    for (int c : symbols) symbol_cost[c] = min_over_domain(dom, pos, shifts, [c](int v) -> SignedCost { return v == c ? 0 : 1; });
    std::vector<SignedCost> next(reach.size(), kSignedInf);
    for (const auto& t : aut.transitions) {
      next[at(t.to)] = std::min(next[at(t.to)], sadd(reach[at(t.from)], symbol_cost[t.symbol]));
    }
    reach = std::move(next);
  }
  SignedCost best = kSignedInf;
  for (int q : aut.finals) best = std::min(best, reach[at(q)]);
  return best;
}

SignedCost weighted_regular_min(const WeightedAutomaton& aut, const Scope& scope, std::span<const Domain> domains,
                                const DeltaStore* shifts) {
  const int states = aut.num_states;
  const int n = static_cast<int>(scope.size());
  std::vector<SignedCost> reach(at(states), 0);
  for (int i = 0; i < n; ++i) {
    const auto& dom = domains[at(scope[at(i)])];
    std::vector<SignedCost> next(at(states), kSignedInf);
    for (int q = 0; q < states; ++q) {
      SignedCost before = i == 0 ? to_signed(aut.start[at(q)]) : reach[at(q)];
      if (is_inf(before)) continue;
      for (int q2 = 0; q2 < states; ++q2) {
        SignedCost step = min_over_domain(dom, i, shifts, [&](int v) { return to_signed(aut.transition(q, v, q2)); });
        next[at(q2)] = std::min(next[at(q2)], sadd(before, step));
      }
    }
    reach = std::move(next);
  }
  SignedCost best = kSignedInf;
  for (int q = 0; q < states; ++q) best = std::min(best, sadd(reach[at(q)], to_signed(aut.final[at(q)])));
  return best;
}

WeightedAutomaton hamming_encoding(const Automaton& aut, int alphabet) {
  check_automaton(aut);
  WeightedAutomaton out(aut.num_states, alphabet);
  out.start[at(aut.initial)] = 0;
  for (int q : aut.finals) out.final[at(q)] = 0;
  for (const auto& t : aut.transitions) {
    for (int w = 0; w < alphabet; ++w) {
      Cost c = w == t.symbol ? 0 : 1;
      if (c < out.transition(t.from, w, t.to)) out.set_transition(t.from, w, t.to, c);
    }
  }
  return out;
}

WeightedAutomaton among_automaton(const AmongSpec& spec, int alphabet) {
  const int ub = spec.ub;
  WeightedAutomaton out(ub + 1, alphabet);
  out.start[0] = 0;
  for (int c = 0; c <= ub; ++c) {
    out.final[at(c)] = static_cast<Cost>(std::max(0, spec.lb - c));
    for (int v = 0; v < alphabet; ++v) {
      const Cost in = spec.counts(v) ? 0 : 1;
      const Cost out_cost = spec.counts(v) ? 1 : 0;
      if (c < ub) {
        out.set_transition(c, v, c + 1, in);
        out.set_transition(c, v, c, out_cost);
      } else {
        out.set_transition(c, v, c, std::min(in + 1, out_cost));
      }
    }
  }
  return out;
}

RegularFunction::RegularFunction(Scope scope, std::vector<int> domain_sizes, Automaton aut)
    : GlobalCostFunction(std::move(scope), std::move(domain_sizes)), aut_(std::move(aut)) {
  check_automaton(aut_);
  if (arity() < 1) throw PreconditionError("regular needs a non-empty scope");
}

Cost RegularFunction::reference_eval(std::span<const int> tuple) const { return regular_cost(aut_, tuple); }

SignedCost RegularFunction::dedicated_minimum(std::span<const Domain> domains) {
  return regular_min(aut_, scope(), domains, &shifts());
}

std::unique_ptr<CostFunction> RegularFunction::clone() const { return std::make_unique<RegularFunction>(*this); }

FilterDag RegularFunction::build_dag() const { return regular_build_dag(aut_, scope(), domain_sizes()); }

WeightedRegularFunction::WeightedRegularFunction(Scope scope, std::vector<int> domain_sizes, WeightedAutomaton aut)
    : GlobalCostFunction(std::move(scope), std::move(domain_sizes)), aut_(std::move(aut)) {
  check_automaton(aut_);
  if (arity() < 1) throw PreconditionError("regular needs a non-empty scope");
}

Cost WeightedRegularFunction::reference_eval(std::span<const int> tuple) const {
  return weighted_regular_cost(aut_, tuple);
}

SignedCost WeightedRegularFunction::dedicated_minimum(std::span<const Domain> domains) {
  return weighted_regular_min(aut_, scope(), domains, &shifts());
}

std::unique_ptr<CostFunction> WeightedRegularFunction::clone() const {
  return std::make_unique<WeightedRegularFunction>(*this);
}

FilterDag WeightedRegularFunction::build_dag() const {
  return weighted_regular_build_dag(aut_, scope(), domain_sizes());
}

}  // namespace cfn
