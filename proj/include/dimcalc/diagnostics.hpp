#pragma once

#include <string>
#include <vector>

#include "dimcalc/model.hpp"

namespace dimcalc {

enum class Severity { Error, Warning };

/// A located message with a stable code such as `P-UNDECLARED` or `R2-NOT-SUBSET`.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// `file:line:col: error[CODE]: message`
std::string render_text(const Diagnostic& diagnostic);

/// JSON array of {severity, code, message, span:{file, start_line, ...}}.
std::string render_json(const std::vector<Diagnostic>& diagnostics);

}  // namespace dimcalc
