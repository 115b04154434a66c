#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dimcalc/diagnostics.hpp"
#include "dimcalc/model.hpp"

namespace dimcalc {

using ParseDiagnostic = Diagnostic;

struct ParseResult {
  std::optional<Model> model;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

/// Parses Formula List source (`.dml`). Never throws on malformed input;
/// every failure is a diagnostic. Dimension-set rules are not applied here.
///
///   dimension Region = [N, SE, SW, E, W]
///   input Base_Price = 100
///   data Rebate over (Sector) = {Government: 0.4, Military: 0.2}
///   calc Price over (Sector, Product) = Sector_Base_Price * Multiplier
///   output Total = SUM(Monthly_Profit)
ParseResult parse_model(std::string_view text, std::string file_name = "<input>");

/// Renders a model back to source that re-parses to an equal model.
std::string pretty_print(const Model& model);

/// Formula text with the minimum parentheses needed to re-parse to `expr`.
std::string format_expr(const Expr& expr);

}  // namespace dimcalc
