#include "cfn/grammar.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cfn {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

}  // namespace

CnfGrammar make_cnf_grammar(int num_symbols, int start, const std::vector<Production>& rules,
                            std::vector<std::string> names) {
  CnfGrammar g;
  g.num_symbols = num_symbols;
  g.start = start;
  g.names = std::move(names);
  for (const auto& r : rules) {
    if (r.rhs.size() == 1 && r.rhs[0].terminal) {
      g.terminals.push_back({r.lhs, r.rhs[0].id});
    } else if (r.rhs.size() == 2 && !r.rhs[0].terminal && !r.rhs[1].terminal) {
      g.binaries.push_back({r.lhs, r.rhs[0].id, r.rhs[1].id});
    } else {
      throw NotCnfError("production of symbol " + std::to_string(r.lhs) + " is not in Chomsky normal form");
    }
  }
  check_grammar(g);
  return g;
}

void check_grammar(const CnfGrammar& g) {
  auto ok = [&](int a) { return a >= 0 && a < g.num_symbols; };
  if (g.num_symbols < 1 || !ok(g.start)) throw PreconditionError("grammar has a bad start symbol");
  for (const auto& r : g.terminals) {
    if (!ok(r.lhs) || r.value < 0) throw PreconditionError("grammar has a bad terminal rule");
  }
  for (const auto& r : g.binaries) {
    if (!ok(r.lhs) || !ok(r.left) || !ok(r.right)) throw PreconditionError("grammar has a bad binary rule");
  }
  if (!g.names.empty() && g.names.size() != at(g.num_symbols)) {
    throw PreconditionError("grammar symbol names do not match the symbol count");
  }
}

Cost grammar_cost(const CnfGrammar& g, std::span<const int> tuple, Cost mismatch) {
  const int n = static_cast<int>(tuple.size());
  if (n == 0) throw PreconditionError("grammar cost needs a non-empty tuple");
  const auto symbols = at(g.num_symbols);
  auto cell = [&](int i, int j) { return (at(i) * at(n) + at(j)) * symbols; };
  std::vector<SignedCost> inside(at(n) * at(n) * symbols, kSignedInf);
  for (int i = 0; i < n; ++i) {
    for (const auto& r : g.terminals) {
      auto& slot = inside[cell(i, i) + at(r.lhs)];
      slot = std::min(slot, mismatch_cost(tuple[at(i)] == r.value, mismatch));
    }
  }
  for (int len = 2; len <= n; ++len) {
    for (int i = 0; i + len - 1 < n; ++i) {
      const int j = i + len - 1;
      for (const auto& r : g.binaries) {
        auto& slot = inside[cell(i, j) + at(r.lhs)];
        for (int k = i; k < j; ++k) {
          slot = std::min(slot, sadd(inside[cell(i, k) + at(r.left)], inside[cell(k + 1, j) + at(r.right)]));
        }
      }
    }
  }
  return to_cost(inside[cell(0, n - 1) + at(g.start)]);
}

FilterDag grammar_build_dag(const CnfGrammar& g, const Scope& scope, std::span<const int> sizes, Cost mismatch) {
  check_grammar(g);
  const int n = static_cast<int>(scope.size());
  if (n == 0) throw PreconditionError("grammar needs a non-empty scope");
  FilterDag dag;
  std::map<std::pair<int, int>, int> leaves;
  auto leaf_of = [&](int i, int c) {
    auto it = leaves.find({i, c});
    if (it != leaves.end()) return it->second;
    std::vector<SignedCost> costs(at(sizes[at(i)]));
    for (int w = 0; w < sizes[at(i)]; ++w) costs[at(w)] = mismatch_cost(w == c, mismatch);
    return leaves[{i, c}] = dag.add_leaf(scope[at(i)], std::move(costs));
  };
  const auto symbols = at(g.num_symbols);
  std::vector<int> memo(at(n) * at(n) * symbols, -2);
  std::function<int(int, int, int)> node = [&](int a, int i, int j) -> int {
    int& slot = memo[(at(i) * at(n) + at(j)) * symbols + at(a)];
    if (slot != -2) return slot;
    std::vector<int> children;
    if (i == j) {
      for (const auto& r : g.terminals) {
        if (r.lhs != a) continue;
        int lf = leaf_of(i, r.value);
        if (std::find(children.begin(), children.end(), lf) == children.end()) children.push_back(lf);
      }
    } else {
      for (const auto& r : g.binaries) {
        if (r.lhs != a) continue;
        for (int k = i; k < j; ++k) {
          int left = node(r.left, i, k);
          if (left < 0) continue;
          int right = node(r.right, k + 1, j);
          if (right < 0) continue;
          children.push_back(dag.add_sum({left, right}));
        }
      }
    }
    int id = children.empty() ? -1 : dag.add_min(std::move(children));
    memo[(at(i) * at(n) + at(j)) * symbols + at(a)] = id;
    return id;
  };
  int root = node(g.start, 0, n - 1);
  if (root < 0) root = dag.add_min({}, scope);
  dag.set_root(root);
  dag.compact();
  return dag;
}

GrammarPropagator::GrammarPropagator(CnfGrammar g, Scope scope, Cost mismatch)
    : grammar_(std::move(g)), scope_(std::move(scope)), mismatch_(mismatch) {
  check_grammar(grammar_);
  if (scope_.empty()) throw PreconditionError("grammar needs a non-empty scope");
  std::set<int> values;
  for (const auto& r : grammar_.terminals) values.insert(r.value);
  terminal_values_.assign(values.begin(), values.end());
  const std::size_t cells = at(length()) * at(length()) * at(grammar_.num_symbols);
  leaf_.assign(scope_.size(), std::vector<SignedCost>(terminal_values_.size(), kSignedInf));
  inside_.assign(cells, kSignedInf);
  outer_.assign(cells, kSignedInf);
  marked_.assign(cells, 0);
}

std::size_t GrammarPropagator::cell(int i, int j, int symbol) const {
  return (at(i) * at(length()) + at(j)) * at(grammar_.num_symbols) + at(symbol);
}

SignedCost GrammarPropagator::leaf_cost(int c, int v, int pos, const DeltaStore* shifts) const {
  return sadd(mismatch_cost(v == c, mismatch_), shifts ? shifts->net(pos, v) : 0);
}

SignedCost GrammarPropagator::unary(int i, int value) const {
  auto it = std::lower_bound(terminal_values_.begin(), terminal_values_.end(), value);
  if (it == terminal_values_.end() || *it != value) return kSignedInf;
  return leaf_[at(i)][static_cast<std::size_t>(it - terminal_values_.begin())];
}

void GrammarPropagator::fill_unary(int pos, const Domain& dom, const DeltaStore* shifts) {
  const auto values = dom.values();
  for (std::size_t t = 0; t < terminal_values_.size(); ++t) {
    SignedCost best = kSignedInf;
    for (int v : values) best = std::min(best, leaf_cost(terminal_values_[t], v, pos, shifts));
    leaf_[at(pos)][t] = best;
  }
}

void GrammarPropagator::fill_span(int i, int j) {
  for (int a = 0; a < grammar_.num_symbols; ++a) inside_[cell(i, j, a)] = kSignedInf;
  if (i == j) {
    for (const auto& r : grammar_.terminals) {
      auto& slot = inside_[cell(i, i, r.lhs)];
      slot = std::min(slot, unary(i, r.value));
    }
    return;
  }
  for (const auto& r : grammar_.binaries) {
    auto& slot = inside_[cell(i, j, r.lhs)];
    for (int k = i; k < j; ++k) slot = std::min(slot, sadd(inside_[cell(i, k, r.left)], inside_[cell(k + 1, j, r.right)]));
  }
}

void GrammarPropagator::compute(std::span<const Domain> domains, const DeltaStore* shifts) {
  const int n = length();
  for (int i = 0; i < n; ++i) fill_unary(i, domains[at(scope_[at(i)])], shifts);
  for (int len = 1; len <= n; ++len) {
    for (int i = 0; i + len - 1 < n; ++i) fill_span(i, i + len - 1);
  }
}

void GrammarPropagator::update(std::span<const Domain> domains, const DeltaStore* shifts,
                               std::span<const int> positions) {
  if (positions.empty()) return;
  const int n = length();
  std::vector<char> touched(at(n), 0);
  for (int p : positions) {
    fill_unary(p, domains[at(scope_[at(p)])], shifts);
    touched[at(p)] = 1;
  }
  // last_touched[j]: largest touched position <= j, or -1.
  std::vector<int> last_touched(at(n), -1);
  for (int j = 0, last = -1; j < n; ++j) {
    if (touched[at(j)]) last = j;
    last_touched[at(j)] = last;
  }
  for (int len = 1; len <= n; ++len) {
    for (int i = 0; i + len - 1 < n; ++i) {
      const int j = i + len - 1;
      if (last_touched[at(j)] >= i) fill_span(i, j);
    }
  }
}

void GrammarPropagator::precompute() {
  const int n = length();
  std::fill(outer_.begin(), outer_.end(), kSignedInf);
  std::fill(marked_.begin(), marked_.end(), 0);
  if (is_inf(minimum())) return;
  outer_[cell(0, n - 1, grammar_.start)] = 0;
  for (int len = n; len >= 2; --len) {
    for (int i = 0; i + len - 1 < n; ++i) {
      const int j = i + len - 1;
      for (const auto& r : grammar_.binaries) {
        const SignedCost above = outer_[cell(i, j, r.lhs)];
        if (is_inf(above)) continue;
        for (int k = i; k < j; ++k) {
          const SignedCost left = inside_[cell(i, k, r.left)];
          const SignedCost right = inside_[cell(k + 1, j, r.right)];
          if (is_inf(left) || is_inf(right)) continue;
          auto& lo = outer_[cell(i, k, r.left)];
          lo = std::min(lo, above + right);
          auto& ro = outer_[cell(k + 1, j, r.right)];
          ro = std::min(ro, above + left);
        }
      }
    }
  }
  for (std::size_t c = 0; c < outer_.size(); ++c) marked_[c] = is_inf(outer_[c]) ? 0 : 1;
}

SignedCost GrammarPropagator::conditioned(int pos, int v, const Domain& dom, const DeltaStore* shifts) const {
  if (!dom.contains(v)) return kSignedInf;
  SignedCost best = kSignedInf;
  for (const auto& r : grammar_.terminals) {
    if (!marked(pos, pos, r.lhs)) continue;
    best = std::min(best, sadd(leaf_cost(r.value, v, pos, shifts), outside(pos, pos, r.lhs)));
  }
  return best;
}

SignedCost grammar_min(const CnfGrammar& g, const Scope& scope, std::span<const Domain> domains,
                       const DeltaStore* shifts, Cost mismatch) {
  GrammarPropagator p(g, scope, mismatch);
  p.compute(domains, shifts);
  return p.minimum();
}

GrammarFunction::GrammarFunction(Scope scope, std::vector<int> domain_sizes, CnfGrammar g, Cost mismatch)
    : GlobalCostFunction(scope, std::move(domain_sizes)),
      grammar_(g),
      mismatch_(std::min(mismatch, kInfinity)),
      tables_(std::move(g), std::move(scope), mismatch_),
      dirty_(static_cast<std::size_t>(arity()), 0) {}

Cost GrammarFunction::reference_eval(std::span<const int> tuple) const {
  return grammar_cost(grammar_, tuple, mismatch_);
}

void GrammarFunction::refresh(std::span<const Domain> domains, bool need_outside) {
  if (!built_) {
    tables_.compute(domains, &shifts());
    built_ = true;
    outside_fresh_ = false;
    stamps_.clear();
    for (VarId x : scope()) stamps_.push_back(domains[at(x)].stamp());
    std::fill(dirty_.begin(), dirty_.end(), 0);
  } else {
    std::vector<int> positions;
    for (int p = 0; p < arity(); ++p) {
      const auto s = domains[at(scope()[at(p)])].stamp();
      if (dirty_[at(p)] || s != stamps_[at(p)]) {
        positions.push_back(p);
        stamps_[at(p)] = s;
        dirty_[at(p)] = 0;
      }
    }
    if (!positions.empty()) {
      tables_.update(domains, &shifts(), positions);
      outside_fresh_ = false;
    }
  }
  if (need_outside && !outside_fresh_) {
    tables_.precompute();
    outside_fresh_ = true;
  }
}

const GrammarPropagator& GrammarFunction::propagator(std::span<const Domain> domains) {
  refresh(domains, true);
  return tables_;
}

SignedCost GrammarFunction::dedicated_minimum(std::span<const Domain> domains) {
  refresh(domains, false);
  return tables_.minimum();
}

std::vector<SignedCost> GrammarFunction::dedicated_conditioned_minima(int pos, std::span<const Domain> domains) {
  refresh(domains, true);
  const Domain& dom = domains[at(scope()[at(pos)])];
  std::vector<SignedCost> out(at(domain_sizes()[at(pos)]), kSignedInf);
  for (int v : dom.values()) out[at(v)] = tables_.conditioned(pos, v, dom, &shifts());
  return out;
}

void GrammarFunction::on_shift(int pos, int /*value*/, SignedCost /*alpha*/) {
  dirty_[at(pos)] = 1;
  outside_fresh_ = false;
}

std::unique_ptr<CostFunction> GrammarFunction::clone() const { return std::make_unique<GrammarFunction>(*this); }

FilterDag GrammarFunction::build_dag() const {
  return grammar_build_dag(grammar_, scope(), domain_sizes(), mismatch_);
}

}  // namespace cfn
