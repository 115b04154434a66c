#pragma once

#include <string>

#include "dimcalc/checker.hpp"

namespace dimcalc {

struct DiagramConfig {
  bool group_by_dimension_set = true;
  /// Appends literal values to Input and Data node labels.
  bool include_data_values = false;
};

/// Formula Diagram as a DOT digraph. Node shapes: Input box, Data triangle,
/// Calculated circle, Output ellipse. Edges run from operand to the variable
/// it helps define and are labelled SUM for aggregations. With grouping on,
/// each non-empty dimension set in use becomes one dashed cluster labelled
/// with its dimension names; dimensionless variables stay at top level.
std::string emit_dot(const CheckedModel& checked, const DiagramConfig& config = {});

}  // namespace dimcalc
