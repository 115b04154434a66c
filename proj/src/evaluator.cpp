#include "dimcalc/evaluator.hpp"

#include <cmath>
#include <stdexcept>

#include "dimcalc/format.hpp"

namespace dimcalc {

std::string_view to_string(EvalErrorKind kind) {
  switch (kind) {
    case EvalErrorKind::DivideByZero: return "DIV-BY-ZERO";
    case EvalErrorKind::Domain: return "DOMAIN";
    case EvalErrorKind::NonFinite: return "NON-FINITE";
    case EvalErrorKind::MissingInput: return "MISSING-INPUT";
  }
  return "?";
}

const Tensor& EvaluationResult::at(const Model& model, std::string_view name) const {
  auto index = model.find_variable(name);
  if (!index) throw std::out_of_range("unknown variable '" + std::string(name) + "'");
  return tensors.at(*index);
}

std::optional<std::string> validate_override(const Model& model, const InputOverride& ov) {
  auto index = model.find_variable(ov.variable);
  if (!index) return "unknown variable '" + ov.variable + "'";
  const Variable& var = model.variables()[*index];
  if (var.kind != VariableKind::Input) {
    return ov.variable + " is a " + std::string(to_string(var.kind)) + " variable; only Input variables can be set";
  }
  if (!std::isfinite(ov.value)) return "value for " + ov.variable + " is not finite";
  const std::size_t arity = ov.tuple ? ov.tuple->size() : 0;
  if (arity != var.dims.size()) {
    if (var.dims.empty()) return ov.variable + " is dimensionless and takes no instance tuple";
    return ov.variable + " is over (" + model.format_dims(var.dims) + "); give one instance per dimension";
  }
  if (ov.tuple) {
    try {
      tensor_index(model, var.dims, *ov.tuple);
    } catch (const LookupError& e) {
      return e.what();
    }
  }
  return std::nullopt;
}

double broadcast_lookup(const Model& model, const Tensor& tensor, DimensionSet target,
                        std::span<const std::string> tuple) {
  const Layout target_layout(model, target);
  if (tuple.size() != target_layout.dimension_ids().size()) {
    throw LookupError("", "", "tuple does not match the target dimension set");
  }
  std::vector<std::size_t> full(model.dimensions().size(), 0);
  for (std::size_t k = 0; k < tuple.size(); ++k) {
    const std::size_t id = target_layout.dimension_ids()[k];
    const Dimension& dim = model.dimensions()[id];
    auto pos = dim.find(tuple[k]);
    if (!pos) throw LookupError(dim.name, tuple[k], "'" + tuple[k] + "' is not an instance of dimension " + dim.name);
    full[id] = *pos;
  }
  return tensor.values.at(Layout(model, tensor.dims).project(full));
}

std::vector<std::pair<std::vector<std::string>, double>> tensor_to_rows(const Model& model, const Tensor& tensor) {
  std::vector<std::pair<std::vector<std::string>, double>> rows;
  rows.reserve(tensor.values.size());
  for (std::size_t i = 0; i < tensor.values.size(); ++i) {
    rows.emplace_back(tensor_coords(model, tensor.dims, i), tensor.values[i]);
  }
  return rows;
}

namespace {

struct CellFailure {
  EvalErrorKind kind;
  std::string what;
};

class Engine {
 public:
  Engine(const Model& model, std::vector<Tensor>& tensors) : model_(model), tensors_(tensors) {
    layouts_.reserve(model.variables().size());
    for (const Variable& var : model.variables()) layouts_.emplace_back(model, var.dims);
    full_.assign(model.dimensions().size(), 0);
  }

  std::optional<EvalError> compute(std::size_t index, std::span<const InputOverride> overrides) {
    const Variable& var = model_.variables()[index];
    const Layout& layout = layouts_[index];
    Tensor& out = tensors_[index];
    out.dims = var.dims;
    out.values.assign(layout.size(), 0.0);

    if (const Expr* formula = var.formula()) {
      for (std::size_t cell = 0; cell < layout.size(); ++cell) {
        const auto positions = layout.positions_of(cell);
        for (std::size_t k = 0; k < positions.size(); ++k) full_[layout.dimension_ids()[k]] = positions[k];
        try {
          out.values[cell] = eval(*formula, var);
        } catch (const CellFailure& failure) {
          return error(failure.kind, var, cell, failure.what);
        }
      }
      return std::nullopt;
    }

    std::vector<bool> present(layout.size(), false);
    if (const ValueTable* table = var.table()) {
      out.values = table->values;
      present.assign(layout.size(), true);
    }
    for (const InputOverride& ov : overrides) {
      if (ov.variable != var.name) continue;
      const std::size_t cell =
          ov.tuple ? tensor_index(model_, var.dims, *ov.tuple) : std::size_t{0};
      out.values[cell] = ov.value;
      present[cell] = true;
    }
    for (std::size_t cell = 0; cell < layout.size(); ++cell) {
      if (!present[cell]) return error(EvalErrorKind::MissingInput, var, cell, "no value was supplied");
    }
    return std::nullopt;
  }

 private:
  EvalError error(EvalErrorKind kind, const Variable& var, std::size_t cell, const std::string& what) const {
    EvalError e;
    e.kind = kind;
    e.variable = var.name;
    e.tuple = tensor_coords(model_, var.dims, cell);
    std::string where;
    for (const auto& label : e.tuple) where += (where.empty() ? "" : ", ") + label;
    e.message = std::string(to_string(kind)) + " in " + var.name + (e.tuple.empty() ? "" : " at (" + where + ")") +
                ": " + what;
    return e;
  }

  static double checked(double value) {
    if (!std::isfinite(value)) throw CellFailure{EvalErrorKind::NonFinite, "result is not finite"};
    return value;
  }

  double eval(const Expr& expr, const Variable& target) {
    if (const auto* lit = std::get_if<Literal>(&expr.node)) return lit->value;
    if (const auto* ref = std::get_if<Ref>(&expr.node)) {
      const std::size_t source = *model_.find_variable(ref->name);
      return tensors_[source].values[layouts_[source].project(full_)];
    }
    if (const auto* sum = std::get_if<Sum>(&expr.node)) return aggregate(sum->name, target);
    if (const auto* neg = std::get_if<Negate>(&expr.node)) return -eval(*neg->operand, target);
    const auto& bin = std::get<Binary>(expr.node);
    const double lhs = eval(*bin.lhs, target);
    const double rhs = eval(*bin.rhs, target);
    switch (bin.op) {
      case BinaryOp::Add: return checked(lhs + rhs);
      case BinaryOp::Subtract: return checked(lhs - rhs);
      case BinaryOp::Multiply: return checked(lhs * rhs);
      case BinaryOp::Divide:
        if (rhs == 0.0) throw CellFailure{EvalErrorKind::DivideByZero, "division by zero"};
        return checked(lhs / rhs);
      case BinaryOp::Power:
        if (lhs == 0.0 && rhs < 0.0) {
          throw CellFailure{EvalErrorKind::Domain, "zero raised to negative power " + format_number(rhs)};
        }
        if (lhs < 0.0 && std::trunc(rhs) != rhs) {
          throw CellFailure{EvalErrorKind::Domain,
                            "negative base " + format_number(lhs) + " raised to non-integer power " +
                                format_number(rhs)};
        }
        return checked(std::pow(lhs, rhs));
    }
    return 0.0;
  }

  // Adds the source over every instance tuple of the dimensions the target
  // lacks; the target's own coordinates stay fixed in full_.
  double aggregate(const std::string& name, const Variable& target) {
    const std::size_t source = *model_.find_variable(name);
    const Layout& source_layout = layouts_[source];
    const Layout eliminated(model_, dims_difference(model_.variables()[source].dims, target.dims));
    const auto& ids = eliminated.dimension_ids();
    const auto& values = tensors_[source].values;
    double total = 0.0;
    for (std::size_t e = 0; e < eliminated.size(); ++e) {
      const auto positions = eliminated.positions_of(e);
      for (std::size_t k = 0; k < ids.size(); ++k) full_[ids[k]] = positions[k];
      total += values[source_layout.project(full_)];
    }
    return checked(total);
  }

  const Model& model_;
  std::vector<Tensor>& tensors_;
  std::vector<Layout> layouts_;
  std::vector<std::size_t> full_;
};

}  // namespace

EvalOutcome evaluate(const CheckedModel& checked, std::span<const InputOverride> overrides) {
  const auto started = std::chrono::steady_clock::now();
  const Model& model = checked.model();
  for (const InputOverride& ov : overrides) {
    if (auto problem = validate_override(model, ov)) throw std::invalid_argument(*problem);
  }
  EvaluationResult result;
  result.tensors.resize(model.variables().size());
  result.order = checked.order();
  Engine engine(model, result.tensors);
  for (std::size_t index : checked.order()) {
    if (auto failure = engine.compute(index, overrides)) return *failure;
  }
  result.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - started);
  return result;
}

}  // namespace dimcalc
