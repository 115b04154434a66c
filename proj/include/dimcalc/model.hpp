#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace dimcalc {

// 1-based line/column range in a source file.
struct SourceSpan {
  std::string file;
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;

  bool operator==(const SourceSpan&) const = default;
};

/// A named partition of instance labels, e.g. Region = N, SE, SW, E, W.
struct Dimension {
  std::string name;
  std::vector<std::string> instances;

  std::optional<std::size_t> find(std::string_view label) const;
  std::size_t size() const { return instances.size(); }

  bool operator==(const Dimension&) const = default;
};

/// Set of dimensions, stored as a bitmask over the owning model's dimension
/// indices. Bit order is declaration order, so iteration is canonical.
class DimensionSet {
 public:
  static constexpr std::size_t max_dimensions = 64;

  constexpr DimensionSet() = default;
  constexpr explicit DimensionSet(std::uint64_t bits) : bits_(bits) {}
  DimensionSet(std::initializer_list<std::size_t> ids);

  static DimensionSet full(std::size_t dimension_count);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  bool contains(std::size_t id) const { return id < max_dimensions && ((bits_ >> id) & 1U) != 0; }
  std::size_t size() const;

  DimensionSet with(std::size_t id) const;

  /// Dimension indices in canonical (declaration) order.
  std::vector<std::size_t> ids() const;

  constexpr bool operator==(const DimensionSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

DimensionSet dims_union(DimensionSet a, DimensionSet b);
DimensionSet dims_intersection(DimensionSet a, DimensionSet b);
DimensionSet dims_difference(DimensionSet a, DimensionSet b);

/// True iff every dimension of `a` is in `b`. Improper subsets count.
bool is_subset(DimensionSet a, DimensionSet b);

/// Orders sets by cardinality, then lexicographically on canonical ids.
bool canonical_less(DimensionSet a, DimensionSet b);

/// All 2^n subsets of n dimensions, ordered by cardinality then canonical
/// order. The first element is the empty set, the last the full set.
std::vector<DimensionSet> enumerate_dimension_sets(std::size_t dimension_count);

enum class VariableKind { Input, Data, Calculated, Output };

std::string_view to_string(VariableKind kind);

// Owning pointer with value semantics; copying deep-copies the pointee.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }

  bool operator==(const Box& other) const { return *ptr_ == *other.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

enum class BinaryOp { Add, Subtract, Multiply, Divide, Power };

char to_symbol(BinaryOp op);

struct Expr;

struct Literal {
  double value = 0.0;
  bool operator==(const Literal&) const = default;
};

struct Ref {
  std::string name;
  bool operator==(const Ref&) const = default;
};

struct Negate {
  Box<Expr> operand;
  bool operator==(const Negate&) const = default;
};

struct Binary {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  bool operator==(const Binary&) const = default;
};

/// SUM over a bare variable reference. The summed-away dimensions come from
/// the variable being defined.
struct Sum {
  std::string name;
  bool operator==(const Sum&) const = default;
};

struct Expr {
  std::variant<Literal, Ref, Negate, Binary, Sum> node;
  SourceSpan span;

  // Source location is not part of structural identity.
  bool operator==(const Expr& other) const { return node == other.node; }
};

Expr make_literal(double value);
Expr make_ref(std::string name);
Expr make_negate(Expr operand);
Expr make_binary(BinaryOp op, Expr lhs, Expr rhs);
Expr make_sum(std::string name);

/// Calls `fn(name, is_aggregate)` for every variable mentioned by `expr`,
/// in left-to-right source order.
template <class Fn>
void for_each_reference(const Expr& expr, Fn&& fn) {
  if (const auto* ref = std::get_if<Ref>(&expr.node)) {
    fn(ref->name, false);
  } else if (const auto* sum = std::get_if<Sum>(&expr.node)) {
    fn(sum->name, true);
  } else if (const auto* neg = std::get_if<Negate>(&expr.node)) {
    for_each_reference(*neg->operand, fn);
  } else if (const auto* bin = std::get_if<Binary>(&expr.node)) {
    for_each_reference(*bin->lhs, fn);
    for_each_reference(*bin->rhs, fn);
  }
}

/// Literal values of an Input or Data variable, one per instance tuple in
/// row-major canonical order.
struct ValueTable {
  std::vector<double> values;
  bool operator==(const ValueTable&) const = default;
};

/// An Input declared without a default value.
struct NoValue {
  bool operator==(const NoValue&) const = default;
};

using Payload = std::variant<NoValue, ValueTable, Expr>;

struct Variable {
  std::string name;
  VariableKind kind = VariableKind::Data;
  DimensionSet dims;
  Payload payload;
  SourceSpan span;

  const Expr* formula() const { return std::get_if<Expr>(&payload); }
  const ValueTable* table() const { return std::get_if<ValueTable>(&payload); }

  // Source location is not part of structural identity.
  bool operator==(const Variable& other) const {
    return name == other.name && kind == other.kind && dims == other.dims && payload == other.payload;
  }
};

/// Thrown when a model would violate one of its structural invariants.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an instance label or tuple does not match a dimension set.
class LookupError : public std::out_of_range {
 public:
  LookupError(std::string dimension, std::string label, const std::string& message)
      : std::out_of_range(message), dimension_(std::move(dimension)), label_(std::move(label)) {}

  const std::string& dimension() const { return dimension_; }
  const std::string& label() const { return label_; }

 private:
  std::string dimension_;
  std::string label_;
};

/// Dimensions plus variables. Construction validates the structural
/// invariants: unique non-empty dimensions with distinct labels, names unique
/// across both namespaces and free of quotes and line breaks, complete finite
/// value tables, unsigned finite literals, and reference closure.
/// Kind/payload agreement is left to the checker.
class Model {
 public:
  Model() = default;
  Model(std::vector<Dimension> dimensions, std::vector<Variable> variables);

  const std::vector<Dimension>& dimensions() const { return dimensions_; }
  const std::vector<Variable>& variables() const { return variables_; }

  std::optional<std::size_t> find_dimension(std::string_view name) const;
  std::optional<std::size_t> find_variable(std::string_view name) const;
  const Variable& variable(std::string_view name) const;

  /// Builds a set from dimension names; throws LookupError on unknown names.
  DimensionSet dimension_set(std::span<const std::string> names) const;
  std::vector<std::string> dimension_names(DimensionSet dims) const;

  /// "Month, Sector"; empty string for the dimensionless set.
  std::string format_dims(DimensionSet dims) const;

  std::size_t cell_count(DimensionSet dims) const;

  bool operator==(const Model& other) const {
    return dimensions_ == other.dimensions_ && variables_ == other.variables_;
  }

 private:
  std::vector<Dimension> dimensions_;
  std::vector<Variable> variables_;
  std::unordered_map<std::string, std::size_t> dimension_index_;
  std::unordered_map<std::string, std::size_t> variable_index_;
};

/// Row-major addressing of a dimension set's instance tuples. The outermost
/// dimension is the first in canonical order.
class Layout {
 public:
  Layout() = default;
  Layout(const Model& model, DimensionSet dims);

  DimensionSet dims() const { return dims_; }
  const std::vector<std::size_t>& dimension_ids() const { return ids_; }
  const std::vector<std::size_t>& extents() const { return extents_; }
  const std::vector<std::size_t>& strides() const { return strides_; }
  std::size_t size() const { return size_; }

  /// Flat index of per-dimension instance positions (one per dimension of
  /// the set, canonical order).
  std::size_t index_of(std::span<const std::size_t> positions) const;
  std::vector<std::size_t> positions_of(std::size_t index) const;

  /// Flat index of a coordinate given over all model dimensions
  /// (`full_positions[d]` is the instance of dimension d); entries for
  /// dimensions outside this set are ignored.
  std::size_t project(std::span<const std::size_t> full_positions) const;

 private:
  DimensionSet dims_;
  std::vector<std::size_t> ids_;
  std::vector<std::size_t> extents_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Evaluated values of one variable over its dimension set.
struct Tensor {
  DimensionSet dims;
  std::vector<double> values;

  bool operator==(const Tensor&) const = default;
};

/// Flat row-major index of an instance tuple given as labels.
std::size_t tensor_index(const Model& model, DimensionSet dims, std::span<const std::string> tuple);

/// Inverse of tensor_index.
std::vector<std::string> tensor_coords(const Model& model, DimensionSet dims, std::size_t index);

}  // namespace dimcalc
