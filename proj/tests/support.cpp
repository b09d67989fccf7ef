#include "support.hpp"

#include <algorithm>
#include <numeric>

namespace cfn::testing {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

Scope iota_scope(int n) {
  Scope s(at(n));
  std::iota(s.begin(), s.end(), 0);
  return s;
}

}  // namespace

Cfn random_table_network(Rng& rng, int n, int d, int functions, Cost top) {
  Cfn cfn(top);
  for (int i = 0; i < n; ++i) cfn.add_variable("v" + std::to_string(i), d);
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < d; ++v) cfn.set_unary(i, v, static_cast<Cost>(rng.uniform(0, 4)));
  }
  for (int k = 0; k < functions && n >= 2; ++k) {
    const int arity = n >= 3 ? rng.uniform(2, 3) : 2;
    Scope s;
    while (static_cast<int>(s.size()) < arity) {
      const int x = rng.uniform(0, n - 1);
      if (std::find(s.begin(), s.end(), x) == s.end()) s.push_back(x);
    }
    std::sort(s.begin(), s.end());
    auto table = std::make_unique<TableFunction>(s, std::vector<int>(at(arity), d), 0);
    std::vector<int> t(at(arity), 0);
    while (true) {
      table->set(t, rng.uniform(0, 11) == 0 ? kInfinity : static_cast<Cost>(rng.uniform(0, 9)));
      int i = arity - 1;
      while (i >= 0 && ++t[at(i)] == d) t[at(i--)] = 0;
      if (i < 0) break;
    }
    cfn.add_function(std::move(table));
  }
  return cfn;
}

Automaton random_automaton(Rng& rng, int states, int alphabet) {
  Automaton aut;
  aut.num_states = states;
  aut.initial = rng.uniform(0, states - 1);
  for (int q = 0; q < states; ++q) {
    if (rng.coin()) aut.finals.push_back(q);
    for (int w = 0; w < alphabet; ++w) {
      for (int q2 = 0; q2 < states; ++q2) {
        if (rng.uniform(0, 2) == 0) aut.transitions.push_back({q, w, q2});
      }
    }
  }
  if (aut.finals.empty()) aut.finals.push_back(rng.uniform(0, states - 1));
  return aut;
}

WeightedAutomaton random_weighted_automaton(Rng& rng, int states, int alphabet) {
  WeightedAutomaton aut(states, alphabet);
  auto draw = [&] { return rng.uniform(0, 3) == 0 ? kInfinity : static_cast<Cost>(rng.uniform(0, 3)); };
  for (int q = 0; q < states; ++q) {
    aut.start[at(q)] = draw();
    aut.final[at(q)] = draw();
    for (int w = 0; w < alphabet; ++w) {
      for (int q2 = 0; q2 < states; ++q2) aut.set_transition(q, w, q2, draw());
    }
  }
  return aut;
}

CnfGrammar random_grammar(Rng& rng, int symbols, int alphabet, int rules) {
  std::vector<Production> prods;
  prods.push_back({rng.uniform(0, symbols - 1), {GrammarSymbol{true, rng.uniform(0, alphabet - 1)}}});
  const int count = rng.uniform(1, rules);
  for (int k = 1; k < count; ++k) {
    const int lhs = rng.uniform(0, symbols - 1);
    if (rng.uniform(0, 2) == 0) {
      prods.push_back({lhs, {GrammarSymbol{true, rng.uniform(0, alphabet - 1)}}});
    } else {
      prods.push_back({lhs, {GrammarSymbol{false, rng.uniform(0, symbols - 1)}, GrammarSymbol{false, rng.uniform(0, symbols - 1)}}});
    }
  }
  return make_cnf_grammar(symbols, 0, prods);
}

AmongSpec random_among(Rng& rng, int n, int d) {
  std::vector<int> values;
  for (int v = 0; v < d; ++v) {
    if (rng.coin()) values.push_back(v);
  }
  const int lb = rng.uniform(0, n);
  const int ub = rng.uniform(lb, n);
  return make_among(iota_scope(n), values, lb, ub);
}

WeightMap random_weights(Rng& rng, int n, int d) {
  WeightMap w(at(n), std::vector<Cost>(at(d)));
  for (auto& row : w) {
    for (auto& c : row) c = static_cast<Cost>(rng.uniform(0, 12));
  }
  return w;
}

std::unique_ptr<GlobalCostFunction> random_global(Rng& rng, const std::string& kind, int n, int d) {
  const Scope s = iota_scope(n);
  const std::vector<int> sizes(at(n), d);
  if (kind == "among") return std::make_unique<AmongFunction>(random_among(rng, n, d), sizes);
  if (kind == "regular") return std::make_unique<RegularFunction>(s, sizes, random_automaton(rng, rng.uniform(1, 4), d));
  if (kind == "wregular") {
    return std::make_unique<WeightedRegularFunction>(s, sizes, random_weighted_automaton(rng, rng.uniform(1, 4), d));
  }
  if (kind == "grammar") {
    const Cost mismatch = rng.uniform(0, 3) == 0 ? kInfinity : static_cast<Cost>(rng.uniform(1, 2));
    return std::make_unique<GrammarFunction>(s, sizes, random_grammar(rng, rng.uniform(1, 3), d, 8), mismatch);
  }
  if (kind == "wmax") return std::make_unique<WMaxFunction>(s, sizes, random_weights(rng, n, d), false);
  if (kind == "wmin") return std::make_unique<WMaxFunction>(s, sizes, random_weights(rng, n, d), true);
  throw PreconditionError("unknown kind " + kind);
}

void thin_domains(Rng& rng, Cfn& cfn, int percent) {
  for (VarId x = 0; x < cfn.num_variables(); ++x) {
    for (int v : cfn.domain(x).values()) {
      if (cfn.domain(x).size() > 1 && rng.uniform(0, 99) < percent) cfn.remove_value(x, v);
    }
  }
}

void random_ept(Rng& rng, Cfn& cfn) {
  const int kind = cfn.num_functions() == 0 ? 0 : rng.uniform(0, 5);
  if (kind == 0) {
    const VarId x = rng.uniform(0, cfn.num_variables() - 1);
    Cost low = kInfinity;
    for (int v : cfn.domain(x).values()) low = std::min(low, cfn.unary(x, v));
    const SignedCost up = static_cast<SignedCost>(std::min<Cost>(low, 6));
    const SignedCost down = static_cast<SignedCost>(std::min<Cost>(cfn.w_zero(), 6));
    project_unary(cfn, x, rng.uniform(static_cast<int>(-down), static_cast<int>(up)));
    return;
  }
  const int fn = rng.uniform(0, cfn.num_functions() - 1);
  if (kind == 5) {
    const SignedCost low = cfn.function(fn).minimum(cfn.domains());
    const SignedCost cap = std::min<SignedCost>(low, 6);
    if (cap > 0) project_to_zero(cfn, fn, rng.uniform(0, static_cast<int>(cap)));
    return;
  }
  const auto& scope = cfn.function(fn).scope();
  const VarId x = scope[at(rng.uniform(0, static_cast<int>(scope.size()) - 1))];
  const auto values = cfn.domain(x).values();
  const int v = values[at(rng.uniform(0, static_cast<int>(values.size()) - 1))];
  const SignedCost bound = std::min<SignedCost>(projection_bound(cfn, fn, x, v), 6);
  const Cost unary = cfn.unary(x, v);
  const SignedCost down = unary >= cfn.top() ? 0 : static_cast<SignedCost>(std::min<Cost>(unary, 6));
  project_to_unary(cfn, fn, x, v, rng.uniform(static_cast<int>(-down), static_cast<int>(std::max<SignedCost>(bound, -down))));
}

NetworkState capture_state(const Cfn& cfn) {
  NetworkState s;
  s.w_zero = cfn.w_zero();
  for (VarId x = 0; x < cfn.num_variables(); ++x) {
    std::vector<Cost> row;
    for (int v = 0; v < cfn.domain(x).initial_size(); ++v) row.push_back(cfn.unary(x, v));
    s.unary.push_back(row);
    s.domains.push_back(cfn.domain(x));
  }
  for (int i = 0; i < cfn.num_functions(); ++i) {
    const auto& func = cfn.function(i);
    std::vector<SignedCost> entries;
    for_each_tuple(iota_scope(func.arity()), full_domains(func.domain_sizes()), [&](std::span<const int> t) {
      entries.push_back(func.eval(t));
      return true;
    });
    s.tables.push_back(entries);
  }
  return s;
}

CnfGrammar example_grammar() {
  // Nonterminals: A0 = 0, A = 1, B = 2, C = 3. Terminals a = 0, b = 1, c = 2.
  auto nt = [](int id) { return GrammarSymbol{false, id}; };
  auto t = [](int id) { return GrammarSymbol{true, id}; };
  std::vector<Production> rules{
      {0, {nt(1), nt(1)}}, {1, {t(0)}}, {1, {nt(1), nt(1)}}, {1, {nt(2), nt(3)}},
      {2, {t(1)}},         {2, {nt(2), nt(2)}}, {3, {t(2)}}, {3, {nt(3), nt(3)}},
  };
  return make_cnf_grammar(4, 0, rules, {"A0", "A", "B", "C"});
}

}  // namespace cfn::testing
