#include "random_model.hpp"

#include <algorithm>
#include <cmath>

namespace dimcalc::testing {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(std::mt19937_64& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

std::string name(std::mt19937_64& rng, const std::string& stem, std::size_t index, bool awkward) {
  if (awkward) {
    switch (pick(rng, 8)) {
      case 0: return stem + " " + std::to_string(index);
      case 1: return std::to_string(index) + stem;
      case 2: return stem + "-" + std::to_string(index) + "%";
      default: break;
    }
  }
  return stem + "_" + std::to_string(index);
}

}  // namespace

double random_value(std::mt19937_64& rng) {
  switch (pick(rng, 6)) {
    case 0: return static_cast<double>(pick(rng, 1000));
    case 1: return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    case 2: return std::ldexp(std::uniform_real_distribution<double>(1.0, 2.0)(rng), static_cast<int>(pick(rng, 120)) - 60);
    case 3: return -std::uniform_real_distribution<double>(0.0, 1000.0)(rng);
    case 4: return 0.1 * static_cast<double>(pick(rng, 100));
    default: return std::uniform_real_distribution<double>(-1e6, 1e6)(rng);
  }
}

Expr random_expr(std::mt19937_64& rng, const std::vector<std::string>& leaves, int depth) {
  if (depth <= 0 || coin(rng, 0.3)) {
    if (leaves.empty() || coin(rng, 0.25)) return make_literal(std::abs(random_value(rng)));
    return make_ref(leaves[pick(rng, leaves.size())]);
  }
  if (coin(rng, 0.15)) return make_negate(random_expr(rng, leaves, depth - 1));
  static const BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Subtract, BinaryOp::Multiply, BinaryOp::Divide,
                                 BinaryOp::Power};
  return make_binary(ops[pick(rng, 5)], random_expr(rng, leaves, depth - 1), random_expr(rng, leaves, depth - 1));
}

Model random_model(std::mt19937_64& rng, const RandomModelOptions& options) {
  std::vector<Dimension> dims;
  const std::size_t n_dims = pick(rng, options.max_dimensions + 1);
  for (std::size_t d = 0; d < n_dims; ++d) {
    Dimension dim;
    dim.name = name(rng, "Dim", d, options.awkward_names);
    const std::size_t n_inst = 1 + pick(rng, options.max_instances);
    for (std::size_t i = 0; i < n_inst; ++i) dim.instances.push_back(name(rng, "d" + std::to_string(d) + "i", i, options.awkward_names));
    dims.push_back(std::move(dim));
  }
  Model shape(dims, {});
  const auto sets = enumerate_dimension_sets(n_dims);

  std::vector<Variable> vars;
  const std::size_t n_vars = 1 + pick(rng, options.max_variables);
  for (std::size_t v = 0; v < n_vars; ++v) {
    Variable var;
    var.name = name(rng, "Var", v, options.awkward_names);
    const bool leaf = vars.empty() || coin(rng, 0.4);
    if (leaf) {
      var.kind = coin(rng) ? VariableKind::Data : VariableKind::Input;
      var.dims = sets[pick(rng, sets.size())];
      if (var.kind == VariableKind::Input && coin(rng, 0.2)) {
        var.payload = NoValue{};
      } else {
        ValueTable table;
        for (std::size_t c = 0; c < shape.cell_count(var.dims); ++c) table.values.push_back(random_value(rng));
        var.payload = std::move(table);
      }
      vars.push_back(std::move(var));
      continue;
    }

    var.kind = coin(rng, 0.7) ? VariableKind::Calculated : VariableKind::Output;
    if (!options.well_typed) {
      var.dims = sets[pick(rng, sets.size())];
      std::vector<std::string> leaves;
      for (const auto& prior : vars) leaves.push_back(prior.name);
      Expr e = random_expr(rng, leaves, 3);
      if (coin(rng, 0.3)) e = make_binary(BinaryOp::Add, std::move(e), make_sum(vars[pick(rng, vars.size())].name));
      var.payload = std::move(e);
      vars.push_back(std::move(var));
      continue;
    }

    // Pick operands first, declare their union, then optionally add an
    // aggregation from a strict superset of that union.
    std::vector<std::string> operands;
    DimensionSet declared;
    const std::size_t n_ops = 1 + pick(rng, 3);
    for (std::size_t k = 0; k < n_ops; ++k) {
      const Variable& prior = vars[pick(rng, vars.size())];
      operands.push_back(prior.name);
      declared = dims_union(declared, prior.dims);
    }
    std::vector<std::string> sources;
    for (const auto& prior : vars) {
      if (is_subset(declared, prior.dims) && prior.dims != declared) sources.push_back(prior.name);
    }
    Expr e = random_expr(rng, {}, 0);
    bool first = true;
    for (const auto& op : operands) {
      // Every operand appears at least once so the union is realised.
      Expr leaf = coin(rng, 0.3) ? make_negate(make_ref(op)) : random_expr(rng, {op}, 2);
      bool mentioned = false;
      for_each_reference(leaf, [&](const std::string&, bool) { mentioned = true; });
      if (!mentioned) leaf = make_binary(BinaryOp::Add, std::move(leaf), make_ref(op));
      e = first ? std::move(leaf) : make_binary(BinaryOp::Multiply, std::move(e), std::move(leaf));
      first = false;
    }
    if (!sources.empty() && coin(rng, 0.5)) {
      e = make_binary(coin(rng) ? BinaryOp::Add : BinaryOp::Subtract, std::move(e),
                      make_sum(sources[pick(rng, sources.size())]));
    }
    if (coin(rng, 0.3)) e = make_binary(BinaryOp::Add, std::move(e), make_literal(std::abs(random_value(rng))));
    var.dims = declared;
    var.payload = std::move(e);
    vars.push_back(std::move(var));
  }
  return Model(std::move(dims), std::move(vars));
}

}  // namespace dimcalc::testing
