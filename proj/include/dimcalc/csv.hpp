#pragma once

#include <string>

#include "dimcalc/model.hpp"

namespace dimcalc {

/// Header of canonical dimension names then `value`; one row per cell in
/// row-major order; LF line endings; shortest round-trip numbers.
std::string tensor_to_csv(const Model& model, const Tensor& tensor);

}  // namespace dimcalc
