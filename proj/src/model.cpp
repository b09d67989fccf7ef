#include "cfn/model.hpp"

#include <algorithm>
#include <atomic>

namespace cfn {

namespace {

std::uint64_t next_stamp() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

}  // namespace

void check_scope(const Scope& scope) {
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (scope[i] < 0) throw PreconditionError("negative variable id in scope");
    if (i > 0 && scope[i - 1] >= scope[i]) {
      throw PreconditionError("scope is not strictly increasing");
    }
  }
}

Domain::Domain(int initial_size)
    : present_(static_cast<std::size_t>(initial_size), 1), count_(initial_size), stamp_(next_stamp()) {}

void Domain::remove(int v) {
  if (!contains(v)) return;
  present_[static_cast<std::size_t>(v)] = 0;
  --count_;
  stamp_ = next_stamp();
}

void Domain::add(int v) {
  if (v < 0 || v >= initial_size() || contains(v)) return;
  present_[static_cast<std::size_t>(v)] = 1;
  ++count_;
  stamp_ = next_stamp();
}

std::vector<int> Domain::values() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count_));
  for (int v = 0; v < initial_size(); ++v) {
    if (present_[static_cast<std::size_t>(v)]) out.push_back(v);
  }
  return out;
}

int Domain::first() const {
  for (int v = 0; v < initial_size(); ++v) {
    if (present_[static_cast<std::size_t>(v)]) return v;
  }
  return -1;
}

std::vector<Domain> full_domains(std::span<const int> sizes) {
  std::vector<Domain> out;
  out.reserve(sizes.size());
  for (int d : sizes) out.emplace_back(d);
  return out;
}

void for_each_tuple(const Scope& scope, std::span<const Domain> domains,
                    const std::function<bool(std::span<const int>)>& fn) {
  const std::size_t n = scope.size();
  std::vector<std::vector<int>> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    vals[i] = domains[static_cast<std::size_t>(scope[i])].values();
    if (vals[i].empty()) return;
  }
  std::vector<std::size_t> idx(n, 0);
  std::vector<int> tuple(n);
  for (std::size_t i = 0; i < n; ++i) tuple[i] = vals[i][0];
  while (true) {
    if (!fn(tuple)) return;
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++idx[i] < vals[i].size()) {
        tuple[i] = vals[i][idx[i]];
        break;
      }
      idx[i] = 0;
      tuple[i] = vals[i][0];
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

std::uint64_t count_tuples(const Scope& scope, std::span<const Domain> domains) {
  std::uint64_t total = 1;
  for (VarId x : scope) {
    auto d = static_cast<std::uint64_t>(domains[static_cast<std::size_t>(x)].size());
    if (d == 0) return 0;
    if (total > (std::uint64_t{1} << 62) / d) return std::uint64_t{1} << 62;
    total *= d;
  }
  return total;
}

CostFunction::CostFunction(Scope scope, std::vector<int> domain_sizes)
    : scope_(std::move(scope)), sizes_(std::move(domain_sizes)) {
  check_scope(scope_);
  if (sizes_.size() != scope_.size()) {
    throw PreconditionError("one domain size per scope variable expected");
  }
}

int CostFunction::position_of(VarId x) const {
  auto it = std::lower_bound(scope_.begin(), scope_.end(), x);
  if (it == scope_.end() || *it != x) return -1;
  return static_cast<int>(it - scope_.begin());
}

SignedCost CostFunction::minimum(std::span<const Domain> domains) {
  SignedCost best = kSignedInf;
  for_each_tuple(scope_, domains, [&](std::span<const int> t) {
    best = std::min(best, eval(t));
    return true;
  });
  return best;
}

std::vector<SignedCost> CostFunction::conditioned_minima(int pos, std::span<const Domain> domains) {
  std::vector<SignedCost> out(static_cast<std::size_t>(sizes_[static_cast<std::size_t>(pos)]), kSignedInf);
  for_each_tuple(scope_, domains, [&](std::span<const int> t) {
    auto& slot = out[static_cast<std::size_t>(t[static_cast<std::size_t>(pos)])];
    slot = std::min(slot, eval(t));
    return true;
  });
  return out;
}

// ---------------------------------------------------------------- tables

namespace {
constexpr std::uint64_t kDenseSparseThreshold = 4096;
constexpr std::uint64_t kDenseCap = std::uint64_t{1} << 24;
}  // namespace

TableFunction::TableFunction(Scope scope, std::vector<int> domain_sizes, Cost default_cost)
    : CostFunction(std::move(scope), std::move(domain_sizes)), default_(std::min(default_cost, kInfinity)) {
  const auto& sizes = this->domain_sizes();
  strides_.assign(sizes.size(), 1);
  std::uint64_t total = 1;
  for (std::size_t i = sizes.size(); i > 0; --i) {
    strides_[i - 1] = total;
    if (sizes[i - 1] <= 0) throw PreconditionError("empty initial domain");
    total *= static_cast<std::uint64_t>(sizes[i - 1]);
    if (total > (std::uint64_t{1} << 40)) throw CapExceeded("table too large");
  }
  sparse_ = default_ >= kInfinity && total > kDenseSparseThreshold;
  if (!sparse_) {
    if (total > kDenseCap) throw CapExceeded("dense table too large");
    current_.assign(total, to_signed(default_));
    reference_.assign(total, default_);
  }
}

std::uint64_t TableFunction::index_of(std::span<const int> tuple) const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    idx += strides_[i] * static_cast<std::uint64_t>(tuple[i]);
  }
  return idx;
}

void TableFunction::set(std::span<const int> tuple, Cost cost) {
  if (tuple.size() != scope().size()) throw PreconditionError("tuple arity mismatch");
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] < 0 || tuple[i] >= domain_sizes()[i]) throw PreconditionError("value out of range");
  }
  cost = std::min(cost, kInfinity);
  std::uint64_t idx = index_of(tuple);
  if (!sparse_) {
    current_[idx] = to_signed(cost);
    reference_[idx] = cost;
    return;
  }
  auto it = std::lower_bound(sparse_index_.begin(), sparse_index_.end(), idx);
  auto k = static_cast<std::size_t>(it - sparse_index_.begin());
  const std::size_t ar = tuple.size();
  if (it != sparse_index_.end() && *it == idx) {
    if (cost >= kInfinity) {
      sparse_index_.erase(it);
      sparse_tuples_.erase(sparse_tuples_.begin() + static_cast<std::ptrdiff_t>(k * ar),
                           sparse_tuples_.begin() + static_cast<std::ptrdiff_t>((k + 1) * ar));
      sparse_current_.erase(sparse_current_.begin() + static_cast<std::ptrdiff_t>(k));
      sparse_reference_.erase(sparse_reference_.begin() + static_cast<std::ptrdiff_t>(k));
    } else {
      sparse_current_[k] = to_signed(cost);
      sparse_reference_[k] = cost;
    }
    return;
  }
  if (cost >= kInfinity) return;
  sparse_index_.insert(it, idx);
  sparse_tuples_.insert(sparse_tuples_.begin() + static_cast<std::ptrdiff_t>(k * ar), tuple.begin(), tuple.end());
  sparse_current_.insert(sparse_current_.begin() + static_cast<std::ptrdiff_t>(k), to_signed(cost));
  sparse_reference_.insert(sparse_reference_.begin() + static_cast<std::ptrdiff_t>(k), cost);
}

std::vector<std::pair<std::vector<int>, Cost>> TableFunction::listed_tuples() const {
  std::vector<std::pair<std::vector<int>, Cost>> out;
  const std::size_t ar = scope().size();
  if (sparse_) {
    for (std::size_t k = 0; k < sparse_index_.size(); ++k) {
      std::vector<int> t(sparse_tuples_.begin() + static_cast<std::ptrdiff_t>(k * ar),
                         sparse_tuples_.begin() + static_cast<std::ptrdiff_t>((k + 1) * ar));
      out.emplace_back(std::move(t), sparse_reference_[k]);
    }
    return out;
  }
  std::vector<int> t(ar, 0);
  for (std::uint64_t idx = 0; idx < reference_.size(); ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < ar; ++i) {
      t[i] = static_cast<int>(rest / strides_[i]);
      rest %= strides_[i];
    }
    if (reference_[idx] != default_) out.emplace_back(t, reference_[idx]);
  }
  return out;
}

void TableFunction::for_each_finite(
    const std::function<void(std::span<const int>, SignedCost)>& fn) const {
  const std::size_t ar = scope().size();
  if (sparse_) {
    for (std::size_t k = 0; k < sparse_index_.size(); ++k) {
      if (is_inf(sparse_current_[k])) continue;
      fn(std::span<const int>(sparse_tuples_.data() + k * ar, ar), sparse_current_[k]);
    }
    return;
  }
  std::vector<int> t(ar, 0);
  for (std::uint64_t idx = 0; idx < current_.size(); ++idx) {
    if (is_inf(current_[idx])) continue;
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < ar; ++i) {
      t[i] = static_cast<int>(rest / strides_[i]);
      rest %= strides_[i];
    }
    fn(t, current_[idx]);
  }
}

SignedCost TableFunction::eval(std::span<const int> tuple) const {
  std::uint64_t idx = index_of(tuple);
  if (!sparse_) return current_[idx];
  auto it = std::lower_bound(sparse_index_.begin(), sparse_index_.end(), idx);
  if (it == sparse_index_.end() || *it != idx) return kSignedInf;
  return sparse_current_[static_cast<std::size_t>(it - sparse_index_.begin())];
}

Cost TableFunction::reference_eval(std::span<const int> tuple) const {
  std::uint64_t idx = index_of(tuple);
  if (!sparse_) return reference_[idx];
  auto it = std::lower_bound(sparse_index_.begin(), sparse_index_.end(), idx);
  if (it == sparse_index_.end() || *it != idx) return kInfinity;
  return sparse_reference_[static_cast<std::size_t>(it - sparse_index_.begin())];
}

SignedCost TableFunction::minimum(std::span<const Domain> domains) {
  if (!sparse_) return CostFunction::minimum(domains);
  SignedCost best = kSignedInf;
  const std::size_t ar = scope().size();
  for (std::size_t k = 0; k < sparse_index_.size(); ++k) {
    bool inside = true;
    for (std::size_t i = 0; i < ar && inside; ++i) {
      inside = domains[static_cast<std::size_t>(scope()[i])].contains(sparse_tuples_[k * ar + i]);
    }
    if (inside) best = std::min(best, sparse_current_[k]);
  }
  return best;
}

std::vector<SignedCost> TableFunction::conditioned_minima(int pos, std::span<const Domain> domains) {
  if (!sparse_) return CostFunction::conditioned_minima(pos, domains);
  const auto p = static_cast<std::size_t>(pos);
  std::vector<SignedCost> out(static_cast<std::size_t>(domain_sizes()[p]), kSignedInf);
  const std::size_t ar = scope().size();
  for (std::size_t k = 0; k < sparse_index_.size(); ++k) {
    bool inside = true;
    for (std::size_t i = 0; i < ar && inside; ++i) {
      inside = domains[static_cast<std::size_t>(scope()[i])].contains(sparse_tuples_[k * ar + i]);
    }
    if (inside) {
      auto& slot = out[static_cast<std::size_t>(sparse_tuples_[k * ar + p])];
      slot = std::min(slot, sparse_current_[k]);
    }
  }
  return out;
}

void TableFunction::apply(int pos, int value, SignedCost delta) {
  const auto p = static_cast<std::size_t>(pos);
  if (sparse_) {
    const std::size_t ar = scope().size();
    for (std::size_t k = 0; k < sparse_index_.size(); ++k) {
      if (sparse_tuples_[k * ar + p] == value && !is_inf(sparse_current_[k])) sparse_current_[k] += delta;
    }
    return;
  }
  // Walk every index whose digit at pos equals value.
  const std::uint64_t stride = strides_[p];
  const auto d = static_cast<std::uint64_t>(domain_sizes()[p]);
  const std::uint64_t block = stride * d;
  for (std::uint64_t base = 0; base < current_.size(); base += block) {
    std::uint64_t start = base + stride * static_cast<std::uint64_t>(value);
    for (std::uint64_t k = 0; k < stride; ++k) {
      auto& c = current_[start + k];
      if (!is_inf(c)) c += delta;
    }
  }
}

void TableFunction::shift(int pos, int value, SignedCost alpha) { apply(pos, value, -alpha); }

void TableFunction::unshift(int pos, int value, SignedCost alpha) { apply(pos, value, alpha); }

std::unique_ptr<CostFunction> TableFunction::clone() const {
  return std::make_unique<TableFunction>(*this);
}

// ---------------------------------------------------------------- trail

void Trail::undo_to(std::size_t mark, Cfn& cfn) {
  while (entries_.size() > mark) {
    const Entry e = entries_.back();
    entries_.pop_back();
    switch (e.kind) {
      case Kind::unary:
        cfn.unary_[static_cast<std::size_t>(e.a)][static_cast<std::size_t>(e.b)] = static_cast<Cost>(e.amount);
        break;
      case Kind::w_zero:
        cfn.w_zero_ = static_cast<Cost>(e.amount);
        break;
      case Kind::removal:
        cfn.domains_[static_cast<std::size_t>(e.a)].add(e.b);
        break;
      case Kind::shift:
        cfn.fns_[static_cast<std::size_t>(e.a)]->unshift(e.b, e.c, e.amount);
        break;
    }
  }
}

// ---------------------------------------------------------------- network

Cfn::Cfn(Cost top, std::string name) : name_(std::move(name)), top_(std::min(top, kInfinity)) {}

Cfn::Cfn(const Cfn& other)
    : name_(other.name_),
      top_(other.top_),
      w_zero_(other.w_zero_),
      vars_(other.vars_),
      domains_(other.domains_),
      unary_(other.unary_),
      incidence_(other.incidence_),
      trail_(nullptr),
      journaling_(other.journaling_),
      journal_(other.journal_) {
  fns_.reserve(other.fns_.size());
  for (const auto& func : other.fns_) fns_.push_back(func->clone());
}

Cfn& Cfn::operator=(const Cfn& other) {
  if (this == &other) return *this;
  Cfn copy(other);
  *this = std::move(copy);
  return *this;
}

VarId Cfn::add_variable(std::string name, std::vector<std::string> labels, bool auxiliary) {
  if (labels.empty()) throw PreconditionError("variable " + name + " has an empty domain");
  const int d = static_cast<int>(labels.size());
  vars_.push_back(VariableInfo{std::move(name), std::move(labels), auxiliary});
  domains_.emplace_back(d);
  unary_.emplace_back(static_cast<std::size_t>(d), 0);
  incidence_.emplace_back();
  return static_cast<VarId>(vars_.size() - 1);
}

VarId Cfn::add_variable(std::string name, int domain_size, bool auxiliary) {
  std::vector<std::string> labels;
  for (int v = 0; v < domain_size; ++v) labels.push_back(std::to_string(v));
  return add_variable(std::move(name), std::move(labels), auxiliary);
}

VarId Cfn::find_variable(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return static_cast<VarId>(i);
  }
  return -1;
}

int Cfn::value_index(VarId x, std::string_view label) const {
  const auto& labels = variable(x).labels;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

std::vector<int> Cfn::initial_sizes(const Scope& scope) const {
  std::vector<int> out;
  out.reserve(scope.size());
  for (VarId x : scope) out.push_back(domain(x).initial_size());
  return out;
}

void Cfn::set_top(Cost top) { top_ = std::min(top, kInfinity); }

int Cfn::add_function(std::unique_ptr<CostFunction> fn) {
  for (std::size_t i = 0; i < fn->scope().size(); ++i) {
    VarId x = fn->scope()[i];
    if (x < 0 || x >= num_variables()) throw PreconditionError("scope references an unknown variable");
    if (fn->domain_sizes()[i] != domain(x).initial_size()) {
      throw PreconditionError("function domain size disagrees with variable " + variable(x).name);
    }
  }
  const int id = static_cast<int>(fns_.size());
  for (VarId x : fn->scope()) incidence_[static_cast<std::size_t>(x)].push_back(id);
  fns_.push_back(std::move(fn));
  return id;
}

void Cfn::set_unary(VarId x, int v, Cost c) {
  auto& slot = unary_[static_cast<std::size_t>(x)][static_cast<std::size_t>(v)];
  c = std::min(c, kInfinity);
  if (slot == c) return;
  if (trail_) trail_->push({Trail::Kind::unary, x, v, 0, static_cast<SignedCost>(slot)});
  slot = c;
}

void Cfn::set_w_zero(Cost c) {
  c = std::min(c, kInfinity);
  if (w_zero_ == c) return;
  if (trail_) trail_->push({Trail::Kind::w_zero, 0, 0, 0, static_cast<SignedCost>(w_zero_)});
  w_zero_ = c;
}

void Cfn::remove_value(VarId x, int v) {
  auto& d = domains_[static_cast<std::size_t>(x)];
  if (!d.contains(v)) return;
  if (trail_) trail_->push({Trail::Kind::removal, x, v, 0, 0});
  d.remove(v);
}

void Cfn::shift_function(int fn, int pos, int v, SignedCost alpha) {
  if (alpha == 0) return;
  fns_.at(static_cast<std::size_t>(fn))->shift(pos, v, alpha);
  if (trail_) trail_->push({Trail::Kind::shift, fn, pos, v, alpha});
}

Cost eval_total(const Cfn& cfn, std::span<const int> assignment) {
  if (static_cast<int>(assignment.size()) != cfn.num_variables()) {
    throw PreconditionError("assignment must cover every variable");
  }
  const Cost top = cfn.top();
  SignedCost total = to_signed(cfn.w_zero());
  for (VarId x = 0; x < cfn.num_variables(); ++x) {
    total = sadd(total, to_signed(cfn.unary(x, assignment[static_cast<std::size_t>(x)])));
  }
  std::vector<int> tuple;
  for (int i = 0; i < cfn.num_functions(); ++i) {
    const auto& func = cfn.function(i);
    tuple.clear();
    for (VarId x : func.scope()) tuple.push_back(assignment[static_cast<std::size_t>(x)]);
    total = sadd(total, func.eval(tuple));
    if (total >= to_signed(top)) return top;
  }
  return to_cost(total, top);
}

}  // namespace cfn
