#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dimcalc/checker.hpp"
#include "dimcalc/model.hpp"

namespace dimcalc {

/// User value for one Input cell. The tuple is omitted for dimensionless inputs.
struct InputOverride {
  std::string variable;
  std::optional<std::vector<std::string>> tuple;
  double value = 0.0;
};

/// Reason an override cannot be applied to `model`, or nullopt if valid.
std::optional<std::string> validate_override(const Model& model, const InputOverride& override_value);

enum class EvalErrorKind { DivideByZero, Domain, NonFinite, MissingInput };

std::string_view to_string(EvalErrorKind kind);

/// First failing cell of an evaluation.
struct EvalError {
  EvalErrorKind kind = EvalErrorKind::NonFinite;
  std::string variable;
  std::vector<std::string> tuple;
  std::string message;
};

struct EvaluationResult {
  /// One tensor per model variable, indexed like Model::variables().
  std::vector<Tensor> tensors;
  std::vector<std::size_t> order;
  std::chrono::nanoseconds elapsed{0};

  const Tensor& at(const Model& model, std::string_view name) const;
};

using EvalOutcome = std::variant<EvaluationResult, EvalError>;

/// Value of `tensor` at the projection of `tuple` (labels over `target`)
/// onto the tensor's own dimensions. Requires tensor.dims ⊆ target.
double broadcast_lookup(const Model& model, const Tensor& tensor, DimensionSet target,
                        std::span<const std::string> tuple);

/// Computes every variable in dependency order. Operands with fewer
/// dimensions are broadcast; SUM adds the source over the dimensions the
/// target lacks, in declaration order of their instances. Stops at the first
/// failing cell. Throws std::invalid_argument for overrides that fail
/// validate_override.
EvalOutcome evaluate(const CheckedModel& checked, std::span<const InputOverride> overrides = {});

/// (tuple, value) rows in row-major canonical order.
std::vector<std::pair<std::vector<std::string>, double>> tensor_to_rows(const Model& model, const Tensor& tensor);

}  // namespace dimcalc
