#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfn/cost.hpp"

namespace cfn {

using VarId = int;
// Variable ids in strictly increasing order.
using Scope = std::vector<VarId>;

class DeltaStore;
class Cfn;

// Throws PreconditionError unless the ids are strictly increasing and non-negative.
void check_scope(const Scope& scope);

// Current domain of a variable, a subset of 0..initial_size-1.
class Domain {
 public:
  Domain() = default;
  explicit Domain(int initial_size);

  int initial_size() const { return static_cast<int>(present_.size()); }
  int size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool contains(int v) const {
    return v >= 0 && v < initial_size() && present_[static_cast<std::size_t>(v)];
  }
  void remove(int v);
  void add(int v);
  std::vector<int> values() const;
  int first() const;
  // Changes whenever the content changes; equal stamps imply equal content.
  std::uint64_t stamp() const { return stamp_; }

  bool operator==(const Domain& other) const { return present_ == other.present_; }

 private:
  std::vector<std::uint8_t> present_;
  int count_ = 0;
  std::uint64_t stamp_ = 0;
};

std::vector<Domain> full_domains(std::span<const int> sizes);

// Calls fn(tuple) for every tuple of the scope over the current domains, in
// lexicographic order (first scope variable most significant). Stops early if
// fn returns false.
void for_each_tuple(const Scope& scope, std::span<const Domain> domains,
                    const std::function<bool(std::span<const int>)>& fn);

// Number of tuples of the scope over the current domains, saturating.
std::uint64_t count_tuples(const Scope& scope, std::span<const Domain> domains);

class CostFunction {
 public:
  CostFunction(Scope scope, std::vector<int> domain_sizes);
  virtual ~CostFunction() = default;

  const Scope& scope() const { return scope_; }
  int arity() const { return static_cast<int>(scope_.size()); }
  int position_of(VarId x) const;
  const std::vector<int>& domain_sizes() const { return sizes_; }

  virtual std::string kind() const = 0;
  // Current cost of a tuple (values listed in scope order), after every shift
  // applied so far. Tuples using pruned values may be negative.
  virtual SignedCost eval(std::span<const int> tuple) const = 0;
  // Cost of the tuple as the function was built, ignoring shifts.
  virtual Cost reference_eval(std::span<const int> tuple) const = 0;

  // Minimum of eval over the domains (indexed by variable id).
  virtual SignedCost minimum(std::span<const Domain> domains);
  // One entry per initial value of scope()[pos]: the minimum of eval over
  // tuples using that value; kSignedInf for values outside the domain.
  virtual std::vector<SignedCost> conditioned_minima(int pos, std::span<const Domain> domains);

  // Decrease eval by alpha on every tuple whose position pos holds value.
  virtual void shift(int pos, int value, SignedCost alpha) = 0;
  // Exact inverse of shift(pos, value, alpha).
  virtual void unshift(int pos, int value, SignedCost alpha) = 0;

  virtual std::unique_ptr<CostFunction> clone() const = 0;
  virtual const DeltaStore* deltas() const { return nullptr; }

 private:
  Scope scope_;
  std::vector<int> sizes_;
};

// Extensional cost function. Shifts are applied to the stored entries.
class TableFunction : public CostFunction {
 public:
  // Every tuple starts at default_cost. Large tables with an infinite default
  // only store their finite tuples.
  TableFunction(Scope scope, std::vector<int> domain_sizes, Cost default_cost = 0);

  void set(std::span<const int> tuple, Cost cost);
  Cost default_cost() const { return default_; }
  bool is_sparse() const { return sparse_; }
  // Tuples whose reference cost differs from the default, in lexicographic order.
  std::vector<std::pair<std::vector<int>, Cost>> listed_tuples() const;
  // Visits every tuple whose current cost is finite.
  void for_each_finite(const std::function<void(std::span<const int>, SignedCost)>& fn) const;

  std::string kind() const override { return "table"; }
  SignedCost eval(std::span<const int> tuple) const override;
  Cost reference_eval(std::span<const int> tuple) const override;
  SignedCost minimum(std::span<const Domain> domains) override;
  std::vector<SignedCost> conditioned_minima(int pos, std::span<const Domain> domains) override;
  void shift(int pos, int value, SignedCost alpha) override;
  void unshift(int pos, int value, SignedCost alpha) override;
  std::unique_ptr<CostFunction> clone() const override;

 private:
  std::uint64_t index_of(std::span<const int> tuple) const;
  void apply(int pos, int value, SignedCost delta);

  Cost default_;
  bool sparse_ = false;
  std::vector<std::uint64_t> strides_;
  // dense mode
  std::vector<SignedCost> current_;
  std::vector<Cost> reference_;
  // sparse mode: finite tuples only
  std::vector<std::uint64_t> sparse_index_;
  std::vector<int> sparse_tuples_;
  std::vector<SignedCost> sparse_current_;
  std::vector<Cost> sparse_reference_;
};

struct EptRecord {
  int function = -1;  // -1: the source is the unary function of var
  VarId var = -1;     // -1: the target is W_zero
  int value = -1;
  SignedCost alpha = 0;
};

// Undo log for solver search.
class Trail {
 public:
  enum class Kind { unary, w_zero, removal, shift };
  struct Entry {
    Kind kind;
    int a = 0;
    int b = 0;
    int c = 0;
    SignedCost amount = 0;
  };

  std::size_t mark() const { return entries_.size(); }
  void push(const Entry& e) { entries_.push_back(e); }
  void undo_to(std::size_t mark, Cfn& cfn);
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
};

struct VariableInfo {
  std::string name;
  std::vector<std::string> labels;
  // Introduced by a decomposition; branched on after the other variables.
  bool auxiliary = false;
};

class Cfn {
 public:
  explicit Cfn(Cost top = kInfinity, std::string name = "");
  Cfn(const Cfn& other);
  Cfn& operator=(const Cfn& other);
  Cfn(Cfn&&) noexcept = default;
  Cfn& operator=(Cfn&&) noexcept = default;

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  VarId add_variable(std::string name, std::vector<std::string> labels, bool auxiliary = false);
  VarId add_variable(std::string name, int domain_size, bool auxiliary = false);
  int num_variables() const { return static_cast<int>(vars_.size()); }
  const VariableInfo& variable(VarId x) const { return vars_.at(static_cast<std::size_t>(x)); }
  VarId find_variable(std::string_view name) const;
  int value_index(VarId x, std::string_view label) const;

  const Domain& domain(VarId x) const { return domains_[static_cast<std::size_t>(x)]; }
  std::span<const Domain> domains() const { return domains_; }
  std::vector<int> initial_sizes(const Scope& scope) const;

  Cost top() const { return top_; }
  // Lowering top is not trailed: the search bound only decreases.
  void set_top(Cost top);

  Cost w_zero() const { return w_zero_ >= top_ ? top_ : w_zero_; }
  Cost unary(VarId x, int v) const {
    Cost c = unary_[static_cast<std::size_t>(x)][static_cast<std::size_t>(v)];
    return c >= top_ ? top_ : c;
  }

  int add_function(std::unique_ptr<CostFunction> fn);
  int num_functions() const { return static_cast<int>(fns_.size()); }
  CostFunction& function(int i) { return *fns_.at(static_cast<std::size_t>(i)); }
  const CostFunction& function(int i) const { return *fns_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& functions_of(VarId x) const {
    return incidence_[static_cast<std::size_t>(x)];
  }

  // Raw mutators. They record undo entries when a trail is attached; they do
  // not check equivalence preservation (see ept.hpp for that).
  void set_unary(VarId x, int v, Cost c);
  void set_w_zero(Cost c);
  void remove_value(VarId x, int v);
  void shift_function(int fn, int pos, int v, SignedCost alpha);

  void attach_trail(Trail* trail) { trail_ = trail; }
  Trail* trail() const { return trail_; }

  bool journaling() const { return journaling_; }
  void set_journaling(bool on) { journaling_ = on; }
  const std::vector<EptRecord>& journal() const { return journal_; }
  void append_journal(const EptRecord& r) {
    if (journaling_) journal_.push_back(r);
  }

 private:
  friend class Trail;

  std::string name_;
  Cost top_;
  Cost w_zero_ = 0;
  std::vector<VariableInfo> vars_;
  std::vector<Domain> domains_;
  std::vector<std::vector<Cost>> unary_;
  std::vector<std::unique_ptr<CostFunction>> fns_;
  std::vector<std::vector<int>> incidence_;
  Trail* trail_ = nullptr;
  bool journaling_ = true;
  std::vector<EptRecord> journal_;
};

// W_zero (+) unary costs (+) every function, under the network's top.
Cost eval_total(const Cfn& cfn, std::span<const int> assignment);

}  // namespace cfn
