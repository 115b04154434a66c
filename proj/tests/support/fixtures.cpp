#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dimcalc/parser.hpp"

namespace dimcalc::testing {

std::string fixture_path(const std::string& name) { return std::string(DIMCALC_FIXTURE_DIR) + "/" + name; }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Model load_model(const std::string& fixture_name) {
  const std::string path = fixture_path(fixture_name);
  ParseResult parsed = parse_model(read_text(path), path);
  if (!parsed.ok()) {
    std::string text;
    for (const auto& d : parsed.diagnostics) text += render_text(d) + "\n";
    throw std::runtime_error(text);
  }
  return std::move(*parsed.model);
}

CheckedModel load_checked(const std::string& fixture_name) {
  CheckResult result = check_model(load_model(fixture_name));
  if (!result.ok()) {
    std::string text;
    for (const auto& d : result.diagnostics) text += render_text(d.to_diagnostic()) + "\n";
    throw std::runtime_error(text);
  }
  return std::move(*result.checked);
}

}  // namespace dimcalc::testing
