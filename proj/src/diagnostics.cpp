#include "dimcalc/diagnostics.hpp"

#include <algorithm>

#include "json.hpp"

namespace dimcalc {

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string render_text(const Diagnostic& d) {
  std::string out = d.span.file.empty() ? std::string("<input>") : d.span.file;
  out += ":" + std::to_string(d.span.start_line) + ":" + std::to_string(d.span.start_col) + ": ";
  out += d.severity == Severity::Error ? "error" : "warning";
  out += "[" + d.code + "]: " + d.message;
  return out;
}

std::string render_json(const std::vector<Diagnostic>& diagnostics) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : diagnostics) {
    out.push_back({
        {"severity", d.severity == Severity::Error ? "error" : "warning"},
        {"code", d.code},
        {"message", d.message},
        {"span",
         {{"file", d.span.file},
          {"start_line", d.span.start_line},
          {"start_col", d.span.start_col},
          {"end_line", d.span.end_line},
          {"end_col", d.span.end_col}}},
    });
  }
  return out.dump(2);
}

}  // namespace dimcalc
