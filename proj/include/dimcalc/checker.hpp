#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dimcalc/diagnostics.hpp"
#include "dimcalc/model.hpp"

namespace dimcalc {

enum class CheckCode {
  R1Mismatch,     // formula's dimension set differs from the declaration
  R2NotSubset,    // non-aggregate operand brings a dimension the target lacks
  R3NotSuperset,  // SUM source lacks a dimension of the target
  R3Degenerate,   // SUM eliminates nothing (warning)
  KindMismatch,   // Input/Data with a formula, or Calculated/Output with literals
  Cycle,          // dependency cycle
};

std::string_view code_name(CheckCode code);

struct CheckDiagnostic {
  CheckCode code = CheckCode::R1Mismatch;
  Severity severity = Severity::Error;
  std::string message;
  SourceSpan span;
  std::vector<std::string> variables;
  std::vector<DimensionSet> dimension_sets;

  Diagnostic to_diagnostic() const;
};

/// A model that passed every dimension-set, kind and acyclicity check.
/// Immutable; copies share the underlying model.
class CheckedModel {
 public:
  CheckedModel(std::shared_ptr<const Model> model, std::vector<std::size_t> order,
               std::vector<std::vector<DimensionSet>> node_dims);

  const Model& model() const { return *model_; }
  std::shared_ptr<const Model> shared_model() const { return model_; }

  /// Variable indices in evaluation order; every variable follows all of
  /// the variables it references. Ties keep declaration order.
  const std::vector<std::size_t>& order() const { return order_; }

  /// Inferred dimension set of every node of variable `index`'s formula, in
  /// pre-order (root first). Empty for variables without a formula.
  const std::vector<DimensionSet>& node_dims(std::size_t index) const { return node_dims_.at(index); }

  /// Distinct variables referenced by `index`'s formula, in first-use order.
  std::vector<std::size_t> dependencies(std::size_t index) const;

  /// Variables whose formulas reference `index`, in declaration order.
  std::vector<std::size_t> dependents(std::size_t index) const;

 private:
  std::shared_ptr<const Model> model_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<DimensionSet>> node_dims_;
};

struct CheckResult {
  std::optional<CheckedModel> checked;
  std::vector<CheckDiagnostic> diagnostics;

  bool ok() const { return checked.has_value(); }
};

/// Dimension set of `expr` when used to define `target`:
/// literals are dimensionless, references carry their variable's set,
/// operators take the union of their operands, and SUM(v) keeps only the
/// dimensions of v that the target also has.
DimensionSet infer_dims(const Expr& expr, const Variable& target, const Model& model);

/// Runs every static check; returns a CheckedModel iff no error was found.
/// Warnings may accompany a successful result.
///
/// For each formula with inferred set I and declared set T, every SUM whose
/// source does not cover T is an R3-NOT-SUPERSET. Then:
///  - T strictly inside I: one R1-MISMATCH (over-span);
///  - otherwise each non-aggregate operand not within T is an R2-NOT-SUBSET,
///    and when no R2/R3 fired but I differs from T, one R1-MISMATCH
///    (under-span).
CheckResult check_model(Model model);
CheckResult check_model(std::shared_ptr<const Model> model);

}  // namespace dimcalc
