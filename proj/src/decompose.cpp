#include "cfn/decompose.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cfn/among.hpp"

namespace cfn {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

Decomposition start_decomposition(std::span<const int> sizes, const std::string& prefix) {
  Decomposition dec;
  dec.num_original = static_cast<int>(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) dec.network.add_variable(prefix + std::to_string(i), sizes[i]);
  return dec;
}

std::unique_ptr<TableFunction> copy_table(const TableFunction& table, Scope scope) {
  auto out = std::make_unique<TableFunction>(std::move(scope), table.domain_sizes(), table.default_cost());
  for (const auto& [tuple, cost] : table.listed_tuples()) out->set(tuple, cost);
  return out;
}

// Union-find over variable and function vertices.
struct Forest {
  std::vector<int> parent;
  explicit Forest(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[at(a)] != a) a = parent[at(a)] = parent[at(parent[at(a)])];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[at(a)] = b;
    return true;
  }
};

}  // namespace

std::vector<Scope> Decomposition::scopes() const {
  std::vector<Scope> out;
  for (int i = 0; i < network.num_functions(); ++i) out.push_back(network.function(i).scope());
  return out;
}

bool berge_acyclic_check(std::span<const Scope> scopes) {
  int max_var = -1;
  for (const auto& s : scopes) {
    for (VarId x : s) max_var = std::max(max_var, x);
  }
  const std::size_t vars = at(max_var + 1);
  Forest forest(vars + scopes.size());
  for (std::size_t func = 0; func < scopes.size(); ++func) {
    for (VarId x : scopes[func]) {
      if (!forest.unite(x, static_cast<int>(vars + func))) return false;
    }
  }
  return true;
}

bool berge_acyclic_check(const Cfn& cfn) {
  std::vector<Scope> scopes;
  for (int i = 0; i < cfn.num_functions(); ++i) scopes.push_back(cfn.function(i).scope());
  return berge_acyclic_check(scopes);
}

std::unique_ptr<TableFunction> make_table(const std::vector<VarId>& vars, const std::vector<int>& sizes,
                                          Cost default_cost, const std::function<Cost(std::span<const int>)>& cost) {
  const std::size_t k = vars.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return vars[a] < vars[b]; });
  Scope scope;
  std::vector<int> sorted_sizes;
  for (std::size_t p : perm) {
    scope.push_back(vars[p]);
    sorted_sizes.push_back(sizes[p]);
  }
  auto table = std::make_unique<TableFunction>(scope, sorted_sizes, default_cost);
  std::vector<int> given(k, 0);
  std::vector<int> sorted(k, 0);
  while (true) {
    const Cost c = std::min(cost(given), kInfinity);
    if (c != default_cost) {
      for (std::size_t i = 0; i < k; ++i) sorted[i] = given[perm[i]];
      table->set(sorted, c);
    }
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++given[i] < sizes[i]) break;
      given[i] = 0;
      if (i == 0) return table;
    }
    if (k == 0) return table;
  }
}

Decomposition decompose_regular(const WeightedAutomaton& aut, std::span<const int> sizes) {
  check_automaton(aut);
  const int n = static_cast<int>(sizes.size());
  if (n == 0) throw PreconditionError("regular decomposition needs a non-empty scope");
  Decomposition dec = start_decomposition(sizes, "x");
  const int states = aut.num_states;
  std::vector<VarId> q;
  for (int i = 0; i <= n; ++i) q.push_back(dec.network.add_variable("Q" + std::to_string(i), states, true));
  dec.network.add_function(make_table({q.front()}, {states}, kInfinity, [&](std::span<const int> t) {
    return aut.start[at(t[0])];
  }));
  for (int i = 0; i < n; ++i) {
    dec.network.add_function(make_table({i, q[at(i)], q[at(i + 1)]}, {sizes[at(i)], states, states}, kInfinity,
                                        [&](std::span<const int> t) { return aut.transition(t[1], t[0], t[2]); }));
  }
  dec.network.add_function(make_table({q.back()}, {states}, kInfinity, [&](std::span<const int> t) {
    return aut.final[at(t[0])];
  }));
  return dec;
}

Decomposition decompose_grammar(const CnfGrammar& g, std::span<const int> sizes, Cost mismatch) {
  check_grammar(g);
  const int n = static_cast<int>(sizes.size());
  if (n == 0) throw PreconditionError("grammar decomposition needs a non-empty scope");
  Decomposition dec = start_decomposition(sizes, "x");
  const int symbols = g.num_symbols;
  // Span [i, j] of length len: value s * (len - 1) + (k - i) for symbol s
  // split after k; symbol s alone when len == 1; the last value is unused.
  auto span_size = [&](int len) { return len == 1 ? symbols + 1 : symbols * (len - 1) + 1; };
  std::vector<VarId> span_var(at(n) * at(n), -1);
  auto var_of = [&](int i, int j) { return span_var[at(i) * at(n) + at(j)]; };
  for (int len = 1; len <= n; ++len) {
    for (int i = 0; i + len - 1 < n; ++i) {
      const int j = i + len - 1;
      span_var[at(i) * at(n) + at(j)] =
          dec.network.add_variable("P" + std::to_string(i) + "_" + std::to_string(j), span_size(len), true);
    }
  }
  auto unused = [&](int len, int value) { return value == span_size(len) - 1; };
  auto symbol_of = [&](int len, int value) { return len == 1 ? value : value / (len - 1); };
  auto split_of = [&](int len, int value) { return value % (len - 1); };

  for (int i = 0; i < n; ++i) {
    dec.network.add_function(make_table({i, var_of(i, i)}, {sizes[at(i)], span_size(1)}, 0, [&](std::span<const int> t) {
      if (unused(1, t[1])) return Cost{0};
      Cost best = kInfinity;
      for (const auto& r : g.terminals) {
        if (r.lhs == t[1]) best = std::min(best, t[0] == r.value ? Cost{0} : mismatch);
      }
      return best;
    }));
  }
  for (int len = 2; len <= n; ++len) {
    for (int i = 0; i + len - 1 < n; ++i) {
      const int j = i + len - 1;
      for (int k = i; k < j; ++k) {
        const int left_len = k - i + 1;
        const int right_len = j - k;
        dec.network.add_function(make_table(
            {var_of(i, j), var_of(i, k), var_of(k + 1, j)}, {span_size(len), span_size(left_len), span_size(right_len)}, 0,
            [&](std::span<const int> t) {
              if (unused(len, t[0]) || split_of(len, t[0]) != k - i) return Cost{0};
              if (unused(left_len, t[1]) || unused(right_len, t[2])) return kInfinity;
              const int a = symbol_of(len, t[0]);
              const int b = symbol_of(left_len, t[1]);
              const int c = symbol_of(right_len, t[2]);
              for (const auto& r : g.binaries) {
                if (r.lhs == a && r.left == b && r.right == c) return Cost{0};
              }
              return kInfinity;
            }));
      }
    }
  }
  const VarId root = var_of(0, n - 1);
  dec.network.add_function(make_table({root}, {span_size(n)}, kInfinity, [&](std::span<const int> t) {
    if (unused(n, t[0])) return kInfinity;
    return symbol_of(n, t[0]) == g.start ? Cost{0} : kInfinity;
  }));
  return dec;
}

Cost linear_sum_cost(std::span<const int> coeffs, int rhs, Relation rel, std::span<const int> tuple) {
  long long total = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) total += static_cast<long long>(coeffs[i]) * tuple[i];
  bool ok = rel == Relation::eq ? total == rhs : rel == Relation::le ? total <= rhs : total >= rhs;
  return ok ? 0 : kInfinity;
}

Decomposition decompose_linear_sum(std::span<const int> coeffs, int rhs, Relation rel, std::span<const int> sizes,
                                   int rhs_cap) {
  const int n = static_cast<int>(sizes.size());
  if (coeffs.size() != sizes.size()) throw PreconditionError("one coefficient per variable is required");
  if (n == 0) throw PreconditionError("linear sum needs a non-empty scope");
  if (rhs < 0 || std::any_of(coeffs.begin(), coeffs.end(), [](int a) { return a < 0; })) {
    throw PreconditionError("linear sum coefficients and right-hand side must be non-negative");
  }
  if (rhs > rhs_cap) throw RhsTooLargeError("right-hand side " + std::to_string(rhs) + " exceeds the cap");
  Decomposition dec = start_decomposition(sizes, "x");
  const std::vector<int> a(coeffs.begin(), coeffs.end());
  if (n <= 3) {
    std::vector<VarId> vars(at(n));
    std::iota(vars.begin(), vars.end(), 0);
    dec.network.add_function(make_table(vars, {sizes.begin(), sizes.end()}, kInfinity, [&](std::span<const int> t) {
      return linear_sum_cost(a, rhs, rel, t);
    }));
    return dec;
  }
  // q value for a partial sum: sums above rhs are dropped, except for >= where
  // they saturate at rhs.
  auto partial = [&](long long s) -> int {
    if (s <= rhs) return static_cast<int>(s);
    return rel == Relation::ge ? rhs : -1;
  };
  std::vector<VarId> q;
  for (int k = 1; k <= n - 3; ++k) q.push_back(dec.network.add_variable("q" + std::to_string(k), rhs + 1, true));
  dec.network.add_function(make_table({0, 1, q[0]}, {sizes[0], sizes[1], rhs + 1}, kInfinity, [&](std::span<const int> t) {
    return partial(static_cast<long long>(a[0]) * t[0] + static_cast<long long>(a[1]) * t[1]) == t[2] ? Cost{0} : kInfinity;
  }));
  for (int k = 1; k <= n - 4; ++k) {
    dec.network.add_function(make_table({q[at(k - 1)], k + 1, q[at(k)]}, {rhs + 1, sizes[at(k + 1)], rhs + 1}, kInfinity,
                                        [&](std::span<const int> t) {
                                          return partial(t[0] + static_cast<long long>(a[at(k + 1)]) * t[1]) == t[2] ? Cost{0}
                                                                                                                  : kInfinity;
                                        }));
  }
  const std::vector<int> tail{1, a[at(n - 2)], a[at(n - 1)]};
  dec.network.add_function(make_table({q.back(), n - 2, n - 1}, {rhs + 1, sizes[at(n - 2)], sizes[at(n - 1)]}, kInfinity,
                                      [&](std::span<const int> t) { return linear_sum_cost(tail, rhs, rel, t); }));
  return dec;
}

Decomposition relax_network(const Decomposition& dec, std::vector<std::unique_ptr<CostFunction>> relaxed,
                            std::uint64_t cap) {
  if (static_cast<int>(relaxed.size()) != dec.network.num_functions()) {
    throw PreconditionError("one relaxation per function is required");
  }
  Decomposition out;
  out.num_original = dec.num_original;
  out.network = Cfn(dec.network.top(), dec.network.name());
  for (VarId x = 0; x < dec.network.num_variables(); ++x) {
    const auto& info = dec.network.variable(x);
    out.network.add_variable(info.name, info.labels, info.auxiliary);
  }
  const auto full = full_domains(dec.network.initial_sizes([&] {
    Scope all(at(dec.network.num_variables()));
    std::iota(all.begin(), all.end(), 0);
    return all;
  }()));
  for (std::size_t i = 0; i < relaxed.size(); ++i) {
    const auto& original = dec.network.function(static_cast<int>(i));
    auto& relax = relaxed[i];
    if (relax->scope() != original.scope()) throw RelaxationError("relaxation changes the scope");
    if (count_tuples(original.scope(), full) > cap) throw CapExceeded("relaxation check exceeds the enumeration cap");
    for_each_tuple(original.scope(), full, [&](std::span<const int> t) {
      if (relax->reference_eval(t) > original.reference_eval(t)) {
        throw RelaxationError("relaxation exceeds the function on a tuple");
      }
      return true;
    });
    out.network.add_function(std::move(relax));
  }
  return out;
}

std::unique_ptr<TableFunction> soften(const TableFunction& table, Cost penalty) {
  const auto sizes = table.domain_sizes();
  std::vector<VarId> vars(table.scope().begin(), table.scope().end());
  return make_table(vars, sizes, std::min(penalty, table.default_cost()), [&](std::span<const int> t) {
    const Cost c = table.reference_eval(t);
    return c >= kInfinity ? penalty : c;
  });
}

Decomposition decompose_function(const CostFunction& fn) {
  const auto& sizes = fn.domain_sizes();
  const int alphabet = *std::max_element(sizes.begin(), sizes.end());
  if (const auto* among = dynamic_cast<const AmongFunction*>(&fn)) {
    return decompose_regular(among_automaton(among->spec(), alphabet), sizes);
  }
  if (const auto* reg = dynamic_cast<const RegularFunction*>(&fn)) {
    return decompose_regular(hamming_encoding(reg->automaton(), alphabet), sizes);
  }
  if (const auto* wreg = dynamic_cast<const WeightedRegularFunction*>(&fn)) {
    return decompose_regular(wreg->automaton(), sizes);
  }
  if (const auto* gram = dynamic_cast<const GrammarFunction*>(&fn)) {
    return decompose_grammar(gram->grammar(), sizes, gram->mismatch());
  }
  throw PreconditionError("no decomposition for functions of kind " + fn.kind());
}

void embed(Cfn& host, const Scope& scope, const Decomposition& dec, const std::string& prefix) {
  if (static_cast<int>(scope.size()) != dec.num_original) throw PreconditionError("decomposition does not match the scope");
  std::vector<VarId> map(at(dec.network.num_variables()));
  for (int i = 0; i < dec.num_original; ++i) map[at(i)] = scope[at(i)];
  for (VarId x = dec.num_original; x < dec.network.num_variables(); ++x) {
    const auto& info = dec.network.variable(x);
    map[at(x)] = host.add_variable(prefix + info.name, info.labels, true);
    for (int v = 0; v < dec.network.domain(x).initial_size(); ++v) host.set_unary(map[at(x)], v, dec.network.unary(x, v));
  }
  for (int i = 0; i < dec.num_original; ++i) {
    for (int v = 0; v < dec.network.domain(i).initial_size(); ++v) {
      const Cost extra = dec.network.unary(i, v);
      if (extra > 0) host.set_unary(map[at(i)], v, cost_add(host.unary(map[at(i)], v), extra, host.top()));
    }
  }
  host.set_w_zero(cost_add(host.w_zero(), dec.network.w_zero(), host.top()));
  for (int i = 0; i < dec.network.num_functions(); ++i) {
    const auto* table = dynamic_cast<const TableFunction*>(&dec.network.function(i));
    if (!table) throw PreconditionError("decomposition functions must be tables");
    Scope remapped;
    for (VarId x : table->scope()) remapped.push_back(map[at(x)]);
    host.add_function(copy_table(*table, std::move(remapped)));
  }
}

Cfn splice(const Cfn& host, int fn, const Decomposition& dec) {
  const auto& target = host.function(fn);
  if (target.arity() != dec.num_original) throw PreconditionError("decomposition does not match the function scope");
  Cfn out(host.top(), host.name());
  for (VarId x = 0; x < host.num_variables(); ++x) {
    const auto& info = host.variable(x);
    out.add_variable(info.name, info.labels, info.auxiliary);
    for (int v = 0; v < host.domain(x).initial_size(); ++v) {
      out.set_unary(x, v, host.unary(x, v));
      if (!host.domain(x).contains(v)) out.remove_value(x, v);
    }
  }
  out.set_w_zero(host.w_zero());
  for (int i = 0; i < host.num_functions(); ++i) {
    if (i != fn) out.add_function(host.function(i).clone());
  }
  embed(out, target.scope(), dec, "f" + std::to_string(fn) + ".");
  return out;
}

Cfn decompose_globals(const Cfn& host) {
  Cfn out = host;
  int serial = 0;
  for (int i = 0; i < out.num_functions();) {
    if (dynamic_cast<const TableFunction*>(&out.function(i))) {
      ++i;
      continue;
    }
    const Decomposition dec = decompose_function(out.function(i));
    Cfn next(out.top(), out.name());
    for (VarId x = 0; x < out.num_variables(); ++x) {
      const auto& info = out.variable(x);
      next.add_variable(info.name, info.labels, info.auxiliary);
      for (int v = 0; v < out.domain(x).initial_size(); ++v) {
        next.set_unary(x, v, out.unary(x, v));
        if (!out.domain(x).contains(v)) next.remove_value(x, v);
      }
    }
    next.set_w_zero(out.w_zero());
    for (int k = 0; k < out.num_functions(); ++k) {
      if (k != i) next.add_function(out.function(k).clone());
    }
    embed(next, out.function(i).scope(), dec, "g" + std::to_string(serial++) + ".");
    out = std::move(next);
  }
  return out;
}

}  // namespace cfn
