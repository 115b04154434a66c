#include "dimcalc/csv.hpp"

#include "dimcalc/evaluator.hpp"
#include "dimcalc/format.hpp"

namespace dimcalc {

std::string tensor_to_csv(const Model& model, const Tensor& tensor) {
  std::string out;
  for (const auto& name : model.dimension_names(tensor.dims)) out += name + ",";
  out += "value\n";
  for (const auto& [tuple, value] : tensor_to_rows(model, tensor)) {
    for (const auto& label : tuple) out += label + ",";
    out += format_number(value) + "\n";
  }
  return out;
}

}  // namespace dimcalc
