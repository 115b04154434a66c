#pragma once

#include <string>

#include "dimcalc/checker.hpp"
#include "dimcalc/model.hpp"

namespace dimcalc::testing {

std::string fixture_path(const std::string& name);
std::string read_text(const std::string& path);

/// Parses a fixture; throws std::runtime_error with the diagnostics on failure.
Model load_model(const std::string& fixture_name);

/// Parses and checks a fixture; throws std::runtime_error on any error.
CheckedModel load_checked(const std::string& fixture_name);

}  // namespace dimcalc::testing
