#include "dimcalc/diagram.hpp"

#include <algorithm>
#include <sstream>

#include "dimcalc/format.hpp"

namespace dimcalc {

namespace {

// DOT quoted ID; a newline inside a label is written as \n.
std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

const char* shape(VariableKind kind) {
  switch (kind) {
    case VariableKind::Input: return "box";
    case VariableKind::Data: return "triangle";
    case VariableKind::Calculated: return "circle";
    case VariableKind::Output: return "ellipse";
  }
  return "box";
}

std::string label(const Variable& var, const DiagramConfig& config) {
  std::string text = var.name;
  if (!config.include_data_values) return text;
  if (const ValueTable* table = var.table()) {
    std::string values;
    for (double v : table->values) values += (values.empty() ? "" : ", ") + format_number(v);
    text += "\n" + values;
  } else if (std::holds_alternative<NoValue>(var.payload)) {
    text += "\n(set by user)";
  }
  return text;
}

void write_node(std::ostream& out, const Variable& var, const DiagramConfig& config, std::string_view indent) {
  out << indent << quote(var.name) << " [shape=" << shape(var.kind) << ", label=" << quote(label(var, config))
      << "];\n";
}

}  // namespace

std::string emit_dot(const CheckedModel& checked, const DiagramConfig& config) {
  const Model& model = checked.model();
  const auto& vars = model.variables();
  std::ostringstream out;
  out << "digraph formula_diagram {\n";

  std::vector<DimensionSet> used;
  for (const Variable& var : vars) {
    if (!var.dims.empty() && std::find(used.begin(), used.end(), var.dims) == used.end()) used.push_back(var.dims);
  }
  std::sort(used.begin(), used.end(), canonical_less);

  for (const Variable& var : vars) {
    if (!config.group_by_dimension_set || var.dims.empty()) write_node(out, var, config, "  ");
  }
  if (config.group_by_dimension_set) {
    std::size_t cluster = 0;
    for (DimensionSet dims : used) {
      out << "  subgraph cluster_" << cluster++ << " {\n";
      out << "    label=" << quote(model.format_dims(dims)) << ";\n";
      out << "    style=dashed;\n";
      for (const Variable& var : vars) {
        if (var.dims == dims) write_node(out, var, config, "    ");
      }
      out << "  }\n";
    }
  }

  for (std::size_t i = 0; i < vars.size(); ++i) {
    const Expr* formula = vars[i].formula();
    if (formula == nullptr) continue;
    std::vector<std::pair<std::string, bool>> edges;
    for_each_reference(*formula, [&](const std::string& name, bool aggregate) {
      auto it = std::find_if(edges.begin(), edges.end(), [&](const auto& e) { return e.first == name; });
      if (it == edges.end()) {
        edges.emplace_back(name, aggregate);
      } else {
        it->second = it->second || aggregate;
      }
    });
    for (const auto& [name, aggregate] : edges) {
      out << "  " << quote(name) << " -> " << quote(vars[i].name);
      if (aggregate) out << " [label=\"SUM\"]";
      out << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace dimcalc
