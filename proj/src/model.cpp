#include "dimcalc/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace dimcalc {

std::optional<std::size_t> Dimension::find(std::string_view label) const {
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (instances[i] == label) return i;
  }
  return std::nullopt;
}

DimensionSet::DimensionSet(std::initializer_list<std::size_t> ids) {
  for (std::size_t id : ids) *this = with(id);
}

DimensionSet DimensionSet::full(std::size_t dimension_count) {
  if (dimension_count > max_dimensions) throw ModelError("too many dimensions");
  if (dimension_count == max_dimensions) return DimensionSet(~std::uint64_t{0});
  return DimensionSet((std::uint64_t{1} << dimension_count) - 1);
}

std::size_t DimensionSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

DimensionSet DimensionSet::with(std::size_t id) const {
  if (id >= max_dimensions) throw ModelError("dimension index out of range");
  return DimensionSet(bits_ | (std::uint64_t{1} << id));
}

std::vector<std::size_t> DimensionSet::ids() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::uint64_t rest = bits_; rest != 0; rest &= rest - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
  }
  return out;
}

DimensionSet dims_union(DimensionSet a, DimensionSet b) { return DimensionSet(a.bits() | b.bits()); }
DimensionSet dims_intersection(DimensionSet a, DimensionSet b) { return DimensionSet(a.bits() & b.bits()); }
DimensionSet dims_difference(DimensionSet a, DimensionSet b) { return DimensionSet(a.bits() & ~b.bits()); }
bool is_subset(DimensionSet a, DimensionSet b) { return (a.bits() & ~b.bits()) == 0; }

bool canonical_less(DimensionSet a, DimensionSet b) {
  if (a.size() != b.size()) return a.size() < b.size();
  const auto ia = a.ids();
  const auto ib = b.ids();
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

std::vector<DimensionSet> enumerate_dimension_sets(std::size_t dimension_count) {
  if (dimension_count >= 31) throw ModelError("dimension lattice too large to enumerate");
  std::vector<DimensionSet> out;
  out.reserve(std::size_t{1} << dimension_count);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << dimension_count); ++bits) {
    out.emplace_back(bits);
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::string_view to_string(VariableKind kind) {
  switch (kind) {
    case VariableKind::Input: return "Input";
    case VariableKind::Data: return "Data";
    case VariableKind::Calculated: return "Calculated";
    case VariableKind::Output: return "Output";
  }
  return "?";
}

char to_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Subtract: return '-';
    case BinaryOp::Multiply: return '*';
    case BinaryOp::Divide: return '/';
    case BinaryOp::Power: return '^';
  }
  return '?';
}

Expr make_literal(double value) { return Expr{Literal{value}, {}}; }
Expr make_ref(std::string name) { return Expr{Ref{std::move(name)}, {}}; }
Expr make_negate(Expr operand) { return Expr{Negate{std::move(operand)}, {}}; }
Expr make_binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr{Binary{op, std::move(lhs), std::move(rhs)}, {}};
}
Expr make_sum(std::string name) { return Expr{Sum{std::move(name)}, {}}; }

namespace {

// Names must be writable as (possibly quoted) identifiers.
void check_name(const std::string& name, const char* what) {
  if (name.empty()) throw ModelError(std::string("empty ") + what + " name");
  if (name.find_first_of("\"\n") != std::string::npos) {
    throw ModelError(std::string(what) + " name '" + name + "' contains a quote or line break");
  }
}

// Literals are finite and unsigned; negation is an operator.
void check_literals(const Expr& expr, const std::string& owner) {
  if (const auto* lit = std::get_if<Literal>(&expr.node)) {
    if (!std::isfinite(lit->value) || std::signbit(lit->value)) {
      throw ModelError("variable '" + owner + "' has a negative or non-finite literal");
    }
  } else if (const auto* neg = std::get_if<Negate>(&expr.node)) {
    check_literals(*neg->operand, owner);
  } else if (const auto* bin = std::get_if<Binary>(&expr.node)) {
    check_literals(*bin->lhs, owner);
    check_literals(*bin->rhs, owner);
  }
}

}  // namespace

Model::Model(std::vector<Dimension> dimensions, std::vector<Variable> variables)
    : dimensions_(std::move(dimensions)), variables_(std::move(variables)) {
  if (dimensions_.size() > DimensionSet::max_dimensions) throw ModelError("too many dimensions");
  for (std::size_t i = 0; i < dimensions_.size(); ++i) {
    const Dimension& dim = dimensions_[i];
    check_name(dim.name, "dimension");
    for (const auto& label : dim.instances) check_name(label, "instance");
    if (dim.instances.empty()) throw ModelError("dimension '" + dim.name + "' has no instances");
    for (std::size_t a = 0; a < dim.instances.size(); ++a) {
      for (std::size_t b = a + 1; b < dim.instances.size(); ++b) {
        if (dim.instances[a] == dim.instances[b]) {
          throw ModelError("dimension '" + dim.name + "' repeats instance '" + dim.instances[a] + "'");
        }
      }
    }
    if (!dimension_index_.emplace(dim.name, i).second) {
      throw ModelError("duplicate dimension '" + dim.name + "'");
    }
  }
  const DimensionSet declared = DimensionSet::full(dimensions_.size());
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const Variable& var = variables_[i];
    check_name(var.name, "variable");
    if (dimension_index_.contains(var.name)) {
      throw ModelError("'" + var.name + "' names both a dimension and a variable");
    }
    if (!variable_index_.emplace(var.name, i).second) {
      throw ModelError("duplicate variable '" + var.name + "'");
    }
    if (!is_subset(var.dims, declared)) {
      throw ModelError("variable '" + var.name + "' uses an undeclared dimension");
    }
    if (const ValueTable* table = var.table(); table != nullptr && table->values.size() != cell_count(var.dims)) {
      throw ModelError("variable '" + var.name + "' has " + std::to_string(table->values.size()) +
                       " values, expected " + std::to_string(cell_count(var.dims)));
    }
    if (const ValueTable* table = var.table()) {
      for (double v : table->values) {
        if (!std::isfinite(v)) throw ModelError("variable '" + var.name + "' has a non-finite value");
      }
    }
    if (const Expr* formula = var.formula()) check_literals(*formula, var.name);
  }
  for (const Variable& var : variables_) {
    if (const Expr* formula = var.formula()) {
      for_each_reference(*formula, [&](const std::string& name, bool) {
        if (!variable_index_.contains(name)) {
          throw ModelError("variable '" + var.name + "' references undeclared '" + name + "'");
        }
      });
    }
  }
}

std::optional<std::size_t> Model::find_dimension(std::string_view name) const {
  auto it = dimension_index_.find(std::string(name));
  if (it == dimension_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Model::find_variable(std::string_view name) const {
  auto it = variable_index_.find(std::string(name));
  if (it == variable_index_.end()) return std::nullopt;
  return it->second;
}

const Variable& Model::variable(std::string_view name) const {
  auto index = find_variable(name);
  if (!index) throw std::out_of_range("unknown variable '" + std::string(name) + "'");
  return variables_[*index];
}

DimensionSet Model::dimension_set(std::span<const std::string> names) const {
  DimensionSet out;
  for (const auto& name : names) {
    auto id = find_dimension(name);
    if (!id) throw LookupError(name, "", "unknown dimension '" + name + "'");
    out = out.with(*id);
  }
  return out;
}

std::vector<std::string> Model::dimension_names(DimensionSet dims) const {
  std::vector<std::string> out;
  for (std::size_t id : dims.ids()) out.push_back(dimensions_.at(id).name);
  return out;
}

std::string Model::format_dims(DimensionSet dims) const {
  std::string out;
  for (const auto& name : dimension_names(dims)) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

std::size_t Model::cell_count(DimensionSet dims) const {
  std::size_t count = 1;
  for (std::size_t id : dims.ids()) count *= dimensions_.at(id).size();
  return count;
}

Layout::Layout(const Model& model, DimensionSet dims) : dims_(dims), ids_(dims.ids()) {
  extents_.reserve(ids_.size());
  for (std::size_t id : ids_) extents_.push_back(model.dimensions().at(id).size());
  strides_.assign(ids_.size(), 1);
  for (std::size_t k = ids_.size(); k-- > 0;) {
    strides_[k] = size_;
    size_ *= extents_[k];
  }
}

std::size_t Layout::index_of(std::span<const std::size_t> positions) const {
  std::size_t index = 0;
  for (std::size_t k = 0; k < ids_.size(); ++k) index += positions[k] * strides_[k];
  return index;
}

std::vector<std::size_t> Layout::positions_of(std::size_t index) const {
  std::vector<std::size_t> out(ids_.size());
  for (std::size_t k = 0; k < ids_.size(); ++k) {
    out[k] = index / strides_[k];
    index %= strides_[k];
  }
  return out;
}

std::size_t Layout::project(std::span<const std::size_t> full_positions) const {
  std::size_t index = 0;
  for (std::size_t k = 0; k < ids_.size(); ++k) index += full_positions[ids_[k]] * strides_[k];
  return index;
}

std::size_t tensor_index(const Model& model, DimensionSet dims, std::span<const std::string> tuple) {
  const Layout layout(model, dims);
  const auto& ids = layout.dimension_ids();
  if (tuple.size() != ids.size()) {
    throw LookupError("", "", "tuple has " + std::to_string(tuple.size()) + " labels, expected " +
                                  std::to_string(ids.size()));
  }
  std::vector<std::size_t> positions(ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const Dimension& dim = model.dimensions()[ids[k]];
    auto pos = dim.find(tuple[k]);
    if (!pos) {
      throw LookupError(dim.name, tuple[k], "'" + tuple[k] + "' is not an instance of dimension " + dim.name);
    }
    positions[k] = *pos;
  }
  return layout.index_of(positions);
}

std::vector<std::string> tensor_coords(const Model& model, DimensionSet dims, std::size_t index) {
  const Layout layout(model, dims);
  if (index >= layout.size()) throw std::out_of_range("tensor index out of range");
  const auto positions = layout.positions_of(index);
  std::vector<std::string> out;
  out.reserve(positions.size());
  for (std::size_t k = 0; k < positions.size(); ++k) {
    out.push_back(model.dimensions()[layout.dimension_ids()[k]].instances[positions[k]]);
  }
  return out;
}

}  // namespace dimcalc
