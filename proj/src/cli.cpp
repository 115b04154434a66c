#include "dimcalc/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dimcalc/checker.hpp"
#include "dimcalc/csv.hpp"
#include "dimcalc/diagram.hpp"
#include "dimcalc/evaluator.hpp"
#include "dimcalc/format.hpp"
#include "dimcalc/parser.hpp"

namespace dimcalc {

namespace {

struct Loaded {
  std::optional<CheckedModel> checked;
  int status = exit_ok;
};

void report(const std::vector<Diagnostic>& diagnostics, bool json, std::ostream& err) {
  if (json) {
    err << render_json(diagnostics) << '\n';
    return;
  }
  for (const auto& d : diagnostics) err << render_text(d) << '\n';
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buf.str();
}

Loaded load(const std::string& path, bool json, std::ostream& err) {
  Loaded loaded;
  if (std::filesystem::is_directory(path)) {
    err << "error: " << path << " is a directory\n";
    loaded.status = exit_usage;
    return loaded;
  }
  auto text = read_file(path);
  if (!text) {
    err << "error: cannot read " << path << '\n';
    loaded.status = exit_usage;
    return loaded;
  }
  ParseResult parsed = parse_model(*text, path);
  if (!parsed.ok()) {
    report(parsed.diagnostics, json, err);
    loaded.status = exit_check_failed;
    return loaded;
  }
  CheckResult result = check_model(std::move(*parsed.model));
  std::vector<Diagnostic> diagnostics;
  for (const auto& d : result.diagnostics) diagnostics.push_back(d.to_diagnostic());
  if (!diagnostics.empty()) report(diagnostics, json, err);
  if (!result.ok()) {
    loaded.status = exit_check_failed;
    return loaded;
  }
  loaded.checked = std::move(result.checked);
  return loaded;
}

// NAME=value or NAME[label,label]=value
std::optional<InputOverride> parse_set(const std::string& text) {
  InputOverride ov;
  std::size_t eq = 0;
  const std::size_t open = text.find('[');
  const std::size_t first_eq = text.find('=');
  if (open != std::string::npos && (first_eq == std::string::npos || open < first_eq)) {
    const std::size_t close = text.find(']', open);
    if (close == std::string::npos || close + 1 >= text.size() || text[close + 1] != '=') return std::nullopt;
    ov.variable = text.substr(0, open);
    std::vector<std::string> tuple;
    std::stringstream labels(text.substr(open + 1, close - open - 1));
    for (std::string label; std::getline(labels, label, ',');) {
      const auto b = label.find_first_not_of(' ');
      const auto e = label.find_last_not_of(' ');
      tuple.push_back(b == std::string::npos ? std::string() : label.substr(b, e - b + 1));
    }
    ov.tuple = std::move(tuple);
    eq = close + 1;
  } else {
    if (first_eq == std::string::npos) return std::nullopt;
    ov.variable = text.substr(0, first_eq);
    eq = first_eq;
  }
  const std::string value = text.substr(eq + 1);
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), ov.value);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) return std::nullopt;
  if (ov.variable.empty()) return std::nullopt;
  return ov;
}

int cmd_check(const std::string& path, bool json, std::ostream& out, std::ostream& err) {
  Loaded loaded = load(path, json, err);
  if (!loaded.checked) return loaded.status;
  const Model& model = loaded.checked->model();
  out << model.variables().size() << " variables, " << model.dimensions().size() << " dimensions, OK\n";
  return exit_ok;
}

int cmd_eval(const std::string& path, const std::vector<std::string>& sets, const std::vector<std::string>& selected,
             const std::string& out_dir, bool json, std::ostream& out, std::ostream& err) {
  Loaded loaded = load(path, json, err);
  if (!loaded.checked) return loaded.status;
  const Model& model = loaded.checked->model();

  std::vector<InputOverride> overrides;
  for (const auto& text : sets) {
    auto ov = parse_set(text);
    if (!ov) {
      err << "error: cannot parse --set '" << text << "'; expected NAME=value or NAME[label,...]=value\n";
      return exit_usage;
    }
    if (auto problem = validate_override(model, *ov)) {
      err << "error: --set " << text << ": " << *problem << '\n';
      return exit_usage;
    }
    overrides.push_back(std::move(*ov));
  }

  std::vector<std::size_t> chosen;
  if (selected.empty()) {
    for (std::size_t i = 0; i < model.variables().size(); ++i) {
      if (model.variables()[i].kind == VariableKind::Output) chosen.push_back(i);
    }
  } else {
    for (const auto& name : selected) {
      auto index = model.find_variable(name);
      if (!index) {
        err << "error: --var: unknown variable '" << name << "'\n";
        return exit_usage;
      }
      chosen.push_back(*index);
    }
  }

  EvalOutcome outcome = evaluate(*loaded.checked, overrides);
  if (const auto* failure = std::get_if<EvalError>(&outcome)) {
    err << "error[" << to_string(failure->kind) << "]: " << failure->message << '\n';
    return exit_eval_failed;
  }
  const auto& result = std::get<EvaluationResult>(outcome);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  for (std::size_t index : chosen) {
    const Variable& var = model.variables()[index];
    const Tensor& tensor = result.tensors[index];
    const auto file = std::filesystem::path(out_dir) / (var.name + ".csv");
    std::ofstream csv(file, std::ios::binary);
    csv << tensor_to_csv(model, tensor);
    if (!csv) {
      err << "error: cannot write " << file.string() << '\n';
      return exit_usage;
    }
    if (var.dims.empty()) out << var.name << " = " << format_number(tensor.values[0]) << '\n';
  }
  return exit_ok;
}

int cmd_diagram(const std::string& path, const std::string& out_path, bool no_group, bool values, bool json,
                std::ostream& out, std::ostream& err) {
  Loaded loaded = load(path, json, err);
  if (!loaded.checked) return loaded.status;
  DiagramConfig config;
  config.group_by_dimension_set = !no_group;
  config.include_data_values = values;
  const std::string dot = emit_dot(*loaded.checked, config);
  if (out_path == "-") {
    out << dot;
    return exit_ok;
  }
  std::ofstream file(out_path, std::ios::binary);
  file << dot;
  if (!file) {
    err << "error: cannot write " << out_path << '\n';
    return exit_usage;
  }
  return exit_ok;
}

std::string join_names(const Model& model, const std::vector<std::size_t>& indices) {
  std::string out;
  for (std::size_t i : indices) out += (out.empty() ? "" : ", ") + model.variables()[i].name;
  return out;
}

int cmd_explain(const std::string& path, const std::string& name, bool json, std::ostream& out, std::ostream& err) {
  Loaded loaded = load(path, json, err);
  if (!loaded.checked) return loaded.status;
  const CheckedModel& checked = *loaded.checked;
  const Model& model = checked.model();
  auto index = model.find_variable(name);
  if (!index) {
    err << "error: unknown variable '" << name << "'\n";
    return exit_usage;
  }
  const Variable& var = model.variables()[*index];
  std::string line(to_string(var.kind));
  line += var.dims.empty() ? ", dimensionless" : " over (" + model.format_dims(var.dims) + ")";
  if (const Expr* formula = var.formula()) {
    line += " = " + format_expr(*formula);
  } else if (const ValueTable* table = var.table()) {
    if (var.dims.empty()) {
      line += ", value " + format_number(table->values[0]);
    } else {
      line += ", " + std::to_string(table->values.size()) + " values";
    }
  } else {
    line += ", no default";
  }
  const auto deps = checked.dependencies(*index);
  const auto users = checked.dependents(*index);
  if (!deps.empty()) line += "; depends on: " + join_names(model, deps);
  if (!users.empty()) line += "; used by: " + join_names(model, users);
  out << line << '\n';
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Check, evaluate and diagram multidimensional Formula List models", "dimcalc"};
  app.require_subcommand(1);

  std::string model_path;
  bool json = false;

  auto* check = app.add_subcommand("check", "Parse and verify a model");
  check->add_option("model", model_path, "Model file (.dml)")->required();
  check->add_flag("--json", json, "Print diagnostics as JSON");

  std::vector<std::string> sets;
  std::vector<std::string> vars;
  std::string out_dir = ".";
  auto* eval = app.add_subcommand("eval", "Evaluate a model and export CSV results");
  eval->add_option("model", model_path, "Model file (.dml)")->required();
  eval->add_option("--set", sets, "Input value: NAME=value or NAME[label,...]=value");
  eval->add_option("--var", vars, "Variable to export (default: every Output)");
  eval->add_option("-o,--out-dir", out_dir, "Directory for CSV files");
  eval->add_flag("--json", json, "Print diagnostics as JSON");

  std::string dot_path = "-";
  bool no_group = false;
  bool values = false;
  auto* diagram = app.add_subcommand("diagram", "Emit the Formula Diagram as DOT");
  diagram->add_option("model", model_path, "Model file (.dml)")->required();
  diagram->add_option("-o,--output", dot_path, "Output file, '-' for standard output");
  diagram->add_flag("--no-group", no_group, "Do not cluster variables by dimension set");
  diagram->add_flag("--values", values, "Show literal values on Input and Data nodes");
  diagram->add_flag("--json", json, "Print diagnostics as JSON");

  std::string variable;
  auto* explain = app.add_subcommand("explain", "Describe one variable");
  explain->add_option("model", model_path, "Model file (.dml)")->required();
  explain->add_option("variable", variable, "Variable name")->required();
  explain->add_flag("--json", json, "Print diagnostics as JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
  }

  try {
    if (check->parsed()) return cmd_check(model_path, json, out, err);
    if (eval->parsed()) return cmd_eval(model_path, sets, vars, out_dir, json, out, err);
    if (diagram->parsed()) return cmd_diagram(model_path, dot_path, no_group, values, json, out, err);
    if (explain->parsed()) return cmd_explain(model_path, variable, json, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace dimcalc
