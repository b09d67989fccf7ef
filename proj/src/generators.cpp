#include "cfn/generators.hpp"

#include <algorithm>
#include <numeric>

#include "cfn/among.hpp"
#include "cfn/decompose.hpp"

namespace cfn {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

Cfn finish(Cfn cfn, Model model) { return model == Model::decomposition ? decompose_globals(cfn) : cfn; }

}  // namespace

std::optional<Family> parse_family(std::string_view name) {
  if (name == "car-seq") return Family::car_seq;
  if (name == "nonogram") return Family::nonogram;
  if (name == "parens") return Family::parens;
  if (name == "market-split") return Family::market_split;
  return std::nullopt;
}

std::string family_name(Family family) {
  switch (family) {
    case Family::car_seq:
      return "car-seq";
    case Family::nonogram:
      return "nonogram";
    case Family::parens:
      return "parens";
    case Family::market_split:
      return "market-split";
  }
  return "";
}

Automaton segment_automaton(const std::vector<int>& lengths) {
  for (int l : lengths) {
    if (l < 1) throw PreconditionError("segment lengths must be positive");
  }
  // State 0 reads leading zeros. Segment k owns states for counts 1..l_k
  // followed by a gap state that reads zeros.
  Automaton aut;
  aut.initial = 0;
  std::vector<int> first(lengths.size());
  std::vector<int> gap(lengths.size());
  int next = 1;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    first[k] = next;
    next += lengths[k];
    gap[k] = next++;
  }
  aut.num_states = next;
  aut.transitions.push_back({0, 0, 0});
  if (lengths.empty()) {
    aut.finals = {0};
    return aut;
  }
  aut.transitions.push_back({0, 1, first[0]});
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    const int last = first[k] + lengths[k] - 1;
    for (int q = first[k]; q < last; ++q) aut.transitions.push_back({q, 1, q + 1});
    aut.transitions.push_back({last, 0, gap[k]});
    aut.transitions.push_back({gap[k], 0, gap[k]});
    if (k + 1 < lengths.size()) aut.transitions.push_back({gap[k], 1, first[k + 1]});
  }
  aut.finals = {first.back() + lengths.back() - 1, gap.back()};
  return aut;
}

CnfGrammar bracket_grammar(int kinds) {
  if (kinds < 1) throw PreconditionError("need at least one bracket kind");
  // S = 0; per kind k: L_k, R_k, A_k.
  const int start = 0;
  std::vector<std::string> names{"S"};
  std::vector<Production> rules;
  auto nt = [](int id) { return GrammarSymbol{false, id}; };
  rules.push_back({start, {nt(start), nt(start)}});
  for (int k = 0; k < kinds; ++k) {
    const int open = 1 + 3 * k;
    const int close = open + 1;
    const int inner = open + 2;
    names.push_back("L" + std::to_string(k));
    names.push_back("R" + std::to_string(k));
    names.push_back("A" + std::to_string(k));
    rules.push_back({open, {GrammarSymbol{true, 2 * k}}});
    rules.push_back({close, {GrammarSymbol{true, 2 * k + 1}}});
    rules.push_back({start, {nt(open), nt(close)}});
    rules.push_back({start, {nt(open), nt(inner)}});
    rules.push_back({inner, {nt(start), nt(close)}});
  }
  return make_cnf_grammar(1 + 3 * kinds, start, rules, names);
}

Cfn gen_car_sequencing(int n, std::uint64_t seed, Model model) {
  if (n < 2) throw PreconditionError("car sequencing needs n >= 2");
  constexpr int kOptions = 5;
  Rng rng(seed);
  Cfn cfn(kInfinity, "car-seq-" + std::to_string(n) + "-" + std::to_string(seed));
  std::vector<std::string> labels;
  for (int t = 1; t <= n; ++t) labels.push_back(std::to_string(t));
  for (int i = 0; i < n; ++i) cfn.add_variable("car" + std::to_string(i), labels);

  std::vector<int> demand(at(n), 0);
  for (int i = 0; i < n; ++i) ++demand[at(rng.uniform(0, n - 1))];
  std::vector<std::vector<char>> has(at(n), std::vector<char>(kOptions, 0));
  for (auto& row : has) {
    for (auto& h : row) h = rng.coin() ? 1 : 0;
  }
  std::vector<int> cap(kOptions);
  std::vector<int> width(kOptions);
  for (int o = 0; o < kOptions; ++o) {
    width[at(o)] = rng.uniform(2, 7);
    cap[at(o)] = rng.uniform(1, width[at(o)] - 1);
  }
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < n; ++v) cfn.set_unary(i, v, static_cast<Cost>(rng.uniform(0, 9)));
  }

  Scope all(at(n));
  std::iota(all.begin(), all.end(), 0);
  const std::vector<int> all_sizes(at(n), n);
  for (int t = 0; t < n; ++t) {
    cfn.add_function(std::make_unique<AmongFunction>(make_among(all, {t}, demand[at(t)], demand[at(t)]), all_sizes));
  }
  for (int o = 0; o < kOptions; ++o) {
    std::vector<int> values;
    for (int t = 0; t < n; ++t) {
      if (has[at(t)][at(o)]) values.push_back(t);
    }
    if (values.empty()) continue;
    const int w = std::min(width[at(o)], n);
    for (int s = 0; s + w <= n; ++s) {
      Scope window(at(w));
      std::iota(window.begin(), window.end(), s);
      cfn.add_function(std::make_unique<AmongFunction>(make_among(window, values, 0, cap[at(o)]),
                                                       std::vector<int>(at(w), n)));
    }
  }
  return finish(std::move(cfn), model);
}

Cfn gen_nonogram(int p, std::uint64_t seed, Model model) {
  if (p < 3) throw PreconditionError("nonogram needs p >= 3");
  Rng rng(seed);
  std::vector<std::vector<int>> grid(at(p), std::vector<int>(at(p)));
  for (auto& row : grid) {
    for (auto& cell : row) cell = rng.coin() ? 1 : 0;
  }
  auto runs = [&](auto cell) {
    std::vector<int> out;
    int run = 0;
    for (int k = 0; k < p; ++k) {
      if (cell(k)) {
        ++run;
      } else if (run > 0) {
        out.push_back(run);
        run = 0;
      }
    }
    if (run > 0) out.push_back(run);
    std::shuffle(out.begin(), out.end(), rng.engine());
    if (out.empty()) out.push_back(rng.uniform(1, p - 1));
    return out;
  };

  Cfn cfn(kInfinity, "nonogram-" + std::to_string(p) + "-" + std::to_string(seed));
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) cfn.add_variable("x" + std::to_string(i) + "_" + std::to_string(j), 2);
  }
  const std::vector<int> sizes(at(p), 2);
  for (int i = 0; i < p; ++i) {
    Scope row(at(p));
    for (int j = 0; j < p; ++j) row[at(j)] = i * p + j;
    auto lengths = runs([&](int k) { return grid[at(i)][at(k)]; });
    cfn.add_function(std::make_unique<RegularFunction>(row, sizes, segment_automaton(lengths)));
  }
  for (int j = 0; j < p; ++j) {
    Scope col(at(p));
    for (int i = 0; i < p; ++i) col[at(i)] = i * p + j;
    auto lengths = runs([&](int k) { return grid[at(k)][at(j)]; });
    cfn.add_function(std::make_unique<RegularFunction>(col, sizes, segment_automaton(lengths)));
  }
  return finish(std::move(cfn), model);
}

Cfn gen_parentheses(int p, std::uint64_t seed, ParensMode mode) {
  if (p < 2) throw PreconditionError("parentheses needs p >= 2");
  Rng rng(seed);
  const int n = 2 * p;
  const std::vector<std::string> labels{"(", ")", "[", "]", "{", "}"};
  const int d = static_cast<int>(labels.size());
  const CnfGrammar g = bracket_grammar(d / 2);
  const std::string tag = mode == ParensMode::soft ? "soft" : "hard";
  Cfn cfn(kInfinity, "parens-" + tag + "-" + std::to_string(p) + "-" + std::to_string(seed));
  for (int i = 0; i < n; ++i) cfn.add_variable("b" + std::to_string(i), labels);

  auto span_scope = [](int from, int len) {
    Scope s(at(len));
    std::iota(s.begin(), s.end(), from);
    return s;
  };
  if (mode == ParensMode::soft) {
    for (int i = 0; i < n; ++i) {
      for (int v = 0; v < d; ++v) cfn.set_unary(i, v, static_cast<Cost>(rng.uniform(0, 10)));
    }
    for (int k = 0; k < n - 1; ++k) {
      const int from = rng.uniform(0, n - 2);
      const int len = 2 * rng.uniform(1, (n - from) / 2);
      cfn.add_function(std::make_unique<GrammarFunction>(span_scope(from, len), std::vector<int>(at(len), d), g, 1));
    }
    cfn.add_function(std::make_unique<GrammarFunction>(span_scope(0, n), std::vector<int>(at(n), d), g, 1));
  } else {
    cfn.add_function(std::make_unique<GrammarFunction>(span_scope(0, n), std::vector<int>(at(n), d), g, kInfinity));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        auto table = std::make_unique<TableFunction>(Scope{i, j}, std::vector<int>{d, d}, 0);
        for (int a = 0; a < d; ++a) {
          for (int b = 0; b < d; ++b) {
            const int pair[2] = {a, b};
            table->set(pair, static_cast<Cost>(rng.uniform(0, 10)));
          }
        }
        cfn.add_function(std::move(table));
      }
    }
  }
  return cfn;
}

Cfn gen_market_split(int n, int m, std::uint64_t seed) {
  if (n < 4 || m < 1) throw PreconditionError("market split needs n >= 4 and m >= 1");
  Rng rng(seed);
  Cfn cfn(kInfinity, "market-split-" + std::to_string(n) + "x" + std::to_string(m) + "-" + std::to_string(seed));
  for (int i = 0; i < n; ++i) cfn.add_variable("x" + std::to_string(i), 2);
  for (int i = 0; i < n; ++i) cfn.set_unary(i, 1, static_cast<Cost>(rng.uniform(0, 99)));
  Scope all(at(n));
  std::iota(all.begin(), all.end(), 0);
  const std::vector<int> sizes(at(n), 2);
  for (int j = 0; j < m; ++j) {
    std::vector<int> coeffs(at(n));
    for (auto& a : coeffs) a = rng.uniform(0, 99);
    const int rhs = std::accumulate(coeffs.begin(), coeffs.end(), 0) / 2;
    embed(cfn, all, decompose_linear_sum(coeffs, rhs, Relation::eq, sizes), "s" + std::to_string(j) + ".");
  }
  return cfn;
}

Cfn generate(const GenSpec& spec) {
  switch (spec.family) {
    case Family::car_seq:
      return gen_car_sequencing(spec.size, spec.seed, spec.model);
    case Family::nonogram:
      return gen_nonogram(spec.size, spec.seed, spec.model);
    case Family::parens:
      return gen_parentheses(spec.size, spec.seed, spec.parens);
    case Family::market_split:
      return gen_market_split(spec.size, spec.constraints, spec.seed);
  }
  throw PreconditionError("unknown family");
}

}  // namespace cfn
