#include "dimcalc/checker.hpp"

#include <algorithm>
#include <queue>

namespace dimcalc {

std::string_view code_name(CheckCode code) {
  switch (code) {
    case CheckCode::R1Mismatch: return "R1-MISMATCH";
    case CheckCode::R2NotSubset: return "R2-NOT-SUBSET";
    case CheckCode::R3NotSuperset: return "R3-NOT-SUPERSET";
    case CheckCode::R3Degenerate: return "R3-DEGENERATE";
    case CheckCode::KindMismatch: return "K-KIND";
    case CheckCode::Cycle: return "C-CYCLE";
  }
  return "?";
}

Diagnostic CheckDiagnostic::to_diagnostic() const {
  return Diagnostic{severity, std::string(code_name(code)), message, span};
}

CheckedModel::CheckedModel(std::shared_ptr<const Model> model, std::vector<std::size_t> order,
                           std::vector<std::vector<DimensionSet>> node_dims)
    : model_(std::move(model)), order_(std::move(order)), node_dims_(std::move(node_dims)) {}

std::vector<std::size_t> CheckedModel::dependencies(std::size_t index) const {
  std::vector<std::size_t> out;
  if (const Expr* formula = model_->variables().at(index).formula()) {
    for_each_reference(*formula, [&](const std::string& name, bool) {
      const std::size_t dep = *model_->find_variable(name);
      if (std::find(out.begin(), out.end(), dep) == out.end()) out.push_back(dep);
    });
  }
  return out;
}

std::vector<std::size_t> CheckedModel::dependents(std::size_t index) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < model_->variables().size(); ++i) {
    const auto deps = dependencies(i);
    if (std::find(deps.begin(), deps.end(), index) != deps.end()) out.push_back(i);
  }
  return out;
}

namespace {

DimensionSet infer(const Expr& expr, const Variable& target, const Model& model, std::vector<DimensionSet>* nodes) {
  std::size_t slot = 0;
  if (nodes != nullptr) {
    slot = nodes->size();
    nodes->emplace_back();
  }
  DimensionSet dims;
  if (std::holds_alternative<Literal>(expr.node)) {
    dims = DimensionSet{};
  } else if (const auto* ref = std::get_if<Ref>(&expr.node)) {
    dims = model.variable(ref->name).dims;
  } else if (const auto* sum = std::get_if<Sum>(&expr.node)) {
    dims = dims_intersection(model.variable(sum->name).dims, target.dims);
  } else if (const auto* neg = std::get_if<Negate>(&expr.node)) {
    dims = infer(*neg->operand, target, model, nodes);
  } else if (const auto* bin = std::get_if<Binary>(&expr.node)) {
    const DimensionSet lhs = infer(*bin->lhs, target, model, nodes);
    const DimensionSet rhs = infer(*bin->rhs, target, model, nodes);
    dims = dims_union(lhs, rhs);
  }
  if (nodes != nullptr) (*nodes)[slot] = dims;
  return dims;
}

bool is_numeric_constant(const Expr& expr) {
  if (std::holds_alternative<Literal>(expr.node)) return true;
  if (const auto* neg = std::get_if<Negate>(&expr.node)) return is_numeric_constant(*neg->operand);
  return false;
}

template <class Fn>
void for_each_leaf(const Expr& expr, Fn&& fn) {
  if (const auto* neg = std::get_if<Negate>(&expr.node)) {
    for_each_leaf(*neg->operand, fn);
  } else if (const auto* bin = std::get_if<Binary>(&expr.node)) {
    for_each_leaf(*bin->lhs, fn);
    for_each_leaf(*bin->rhs, fn);
  } else {
    fn(expr);
  }
}

class Checker {
 public:
  explicit Checker(const Model& model) : model_(model) {}

  std::string set_text(DimensionSet dims) const { return "(" + model_.format_dims(dims) + ")"; }

  void add(CheckCode code, Severity severity, std::string message, SourceSpan span,
           std::vector<std::string> variables, std::vector<DimensionSet> sets) {
    diags_.push_back({code, severity, std::move(message), std::move(span), std::move(variables), std::move(sets)});
  }

  bool check_kind(const Variable& var) {
    const bool value_kind = var.kind == VariableKind::Input || var.kind == VariableKind::Data;
    const Expr* formula = var.formula();
    if (value_kind && formula != nullptr) {
      add(CheckCode::KindMismatch, Severity::Error,
          std::string(to_string(var.kind)) + " variable " + var.name +
              " carries a formula; only Calculated and Output variables are defined by formulas",
          var.span, {var.name}, {var.dims});
      return false;
    }
    if (!value_kind && (formula == nullptr || is_numeric_constant(*formula))) {
      add(CheckCode::KindMismatch, Severity::Error,
          std::string(to_string(var.kind)) + " variable " + var.name +
              " carries literal values; declare it as data or input, or give it a formula",
          var.span, {var.name}, {var.dims});
      return false;
    }
    return true;
  }

  void check_formula(const Variable& var, const Expr& formula, std::vector<DimensionSet>& nodes) {
    const DimensionSet declared = var.dims;
    const DimensionSet inferred = infer(formula, var, model_, &nodes);
    bool operand_errors = false;

    for_each_leaf(formula, [&](const Expr& leaf) {
      const auto* sum = std::get_if<Sum>(&leaf.node);
      if (sum == nullptr) return;
      const DimensionSet source = model_.variable(sum->name).dims;
      if (!is_subset(declared, source)) {
        operand_errors = true;
        const DimensionSet missing = dims_difference(declared, source);
        add(CheckCode::R3NotSuperset, Severity::Error,
            "SUM(" + sum->name + ") cannot define " + var.name + ": source " + sum->name + " over " +
                set_text(source) + " is not a superset of " + set_text(declared) + "; missing " +
                model_.format_dims(missing),
            leaf.span, {var.name, sum->name}, {declared, source, missing});
      } else if (source == declared) {
        add(CheckCode::R3Degenerate, Severity::Warning,
            "SUM(" + sum->name + ") eliminates no dimension: source and " + var.name + " are both over " +
                set_text(declared),
            leaf.span, {var.name, sum->name}, {declared, source});
      }
    });

    if (is_subset(declared, inferred) && declared != inferred) {
      const DimensionSet extra = dims_difference(inferred, declared);
      std::vector<std::string> involved{var.name};
      for_each_leaf(formula, [&](const Expr& leaf) {
        if (const auto* ref = std::get_if<Ref>(&leaf.node)) {
          const DimensionSet dims = model_.variable(ref->name).dims;
          if (!dims_intersection(dims, extra).empty() &&
              std::find(involved.begin(), involved.end(), ref->name) == involved.end()) {
            involved.push_back(ref->name);
          }
        }
      });
      add(CheckCode::R1Mismatch, Severity::Error,
          "formula over-spans declaration: the formula of " + var.name + " is over " + set_text(inferred) +
              " but " + var.name + " is declared over " + set_text(declared) + "; " +
              model_.format_dims(extra) + " not declared",
          formula.span, std::move(involved), {declared, inferred});
      return;
    }

    for_each_leaf(formula, [&](const Expr& leaf) {
      const auto* ref = std::get_if<Ref>(&leaf.node);
      if (ref == nullptr) return;
      const DimensionSet operand = model_.variable(ref->name).dims;
      if (is_subset(operand, declared)) return;
      operand_errors = true;
      const DimensionSet extra = dims_difference(operand, declared);
      add(CheckCode::R2NotSubset, Severity::Error,
          "operand " + ref->name + " over " + set_text(operand) + " is not a subset of " + var.name + "'s set " +
              set_text(declared) + "; " + model_.format_dims(extra) + " not in target",
          leaf.span, {var.name, ref->name}, {declared, operand, extra});
    });

    if (!operand_errors && inferred != declared) {
      const DimensionSet missing = dims_difference(declared, inferred);
      add(CheckCode::R1Mismatch, Severity::Error,
          "formula under-spans declaration: the formula of " + var.name + " is over " + set_text(inferred) +
              " but " + var.name + " is declared over " + set_text(declared) + "; it would be constant along " +
              model_.format_dims(missing),
          formula.span, {var.name}, {declared, inferred});
    }
  }

  std::optional<std::vector<std::size_t>> order() {
    const auto& vars = model_.variables();
    const std::size_t n = vars.size();
    std::vector<std::vector<std::size_t>> deps(n);
    std::vector<std::vector<std::size_t>> users(n);
    std::vector<std::size_t> pending(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (const Expr* formula = vars[i].formula()) {
        for_each_reference(*formula, [&](const std::string& name, bool) {
          const std::size_t dep = *model_.find_variable(name);
          if (std::find(deps[i].begin(), deps[i].end(), dep) != deps[i].end()) return;
          deps[i].push_back(dep);
          users[dep].push_back(i);
          ++pending[i];
        });
      }
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i) {
      if (pending[i] == 0) ready.push(i);
    }
    std::vector<std::size_t> out;
    out.reserve(n);
    while (!ready.empty()) {
      const std::size_t next = ready.top();
      ready.pop();
      out.push_back(next);
      for (std::size_t user : users[next]) {
        if (--pending[user] == 0) ready.push(user);
      }
    }
    if (out.size() == n) return out;

    // Every unscheduled variable still waits on another unscheduled one, so
    // following first unscheduled dependencies must revisit a variable.
    std::size_t start = 0;
    while (pending[start] == 0) ++start;
    std::vector<std::size_t> walk;
    std::vector<int> seen_at(n, -1);
    std::size_t current = start;
    while (seen_at[current] < 0) {
      seen_at[current] = static_cast<int>(walk.size());
      walk.push_back(current);
      for (std::size_t dep : deps[current]) {
        if (pending[dep] > 0) {
          current = dep;
          break;
        }
      }
    }
    std::vector<std::size_t> cycle(walk.begin() + seen_at[current], walk.end());
    std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
    std::vector<std::string> names;
    std::string path;
    for (std::size_t v : cycle) {
      names.push_back(vars[v].name);
      path += vars[v].name + " -> ";
    }
    path += vars[cycle.front()].name;
    add(CheckCode::Cycle, Severity::Error, "dependency cycle: " + path, vars[cycle.front()].span, names, {});
    return std::nullopt;
  }

  std::vector<CheckDiagnostic> take_diagnostics() { return std::move(diags_); }

 private:
  const Model& model_;
  std::vector<CheckDiagnostic> diags_;
};

}  // namespace

DimensionSet infer_dims(const Expr& expr, const Variable& target, const Model& model) {
  return infer(expr, target, model, nullptr);
}

CheckResult check_model(Model model) { return check_model(std::make_shared<const Model>(std::move(model))); }

CheckResult check_model(std::shared_ptr<const Model> model) {
  Checker checker(*model);
  const auto& vars = model->variables();
  std::vector<std::vector<DimensionSet>> node_dims(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!checker.check_kind(vars[i])) continue;
    if (const Expr* formula = vars[i].formula()) checker.check_formula(vars[i], *formula, node_dims[i]);
  }
  auto order = checker.order();

  CheckResult result;
  result.diagnostics = checker.take_diagnostics();
  const bool failed = std::any_of(result.diagnostics.begin(), result.diagnostics.end(),
                                  [](const CheckDiagnostic& d) { return d.severity == Severity::Error; });
  if (!failed && order) result.checked.emplace(std::move(model), std::move(*order), std::move(node_dims));
  return result;
}

}  // namespace dimcalc
