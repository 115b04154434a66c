#include <cmath>
#include <sstream>

#include "dimcalc/format.hpp"
#include "dimcalc/parser.hpp"

namespace dimcalc {

namespace {

// Binding strength, loosest first. Mirrors the parser's grammar levels.
enum Level { Additive = 1, Multiplicative = 2, Unary = 3, Power = 4, Atom = 5 };

int level_of(const Expr& e) {
  if (const auto* bin = std::get_if<Binary>(&e.node)) {
    switch (bin->op) {
      case BinaryOp::Add:
      case BinaryOp::Subtract: return Additive;
      case BinaryOp::Multiply:
      case BinaryOp::Divide: return Multiplicative;
      case BinaryOp::Power: return Power;
    }
  }
  if (std::holds_alternative<Negate>(e.node)) return Unary;
  return Atom;
}

void write(std::ostream& out, const Expr& e);

void write_parenthesized(std::ostream& out, const Expr& e, int min_level) {
  if (level_of(e) < min_level) {
    out << '(';
    write(out, e);
    out << ')';
  } else {
    write(out, e);
  }
}

// The exponent grammar accepts `-`* followed by an atom.
bool fits_exponent(const Expr& e) {
  if (const auto* neg = std::get_if<Negate>(&e.node)) return fits_exponent(*neg->operand);
  return level_of(e) == Atom;
}

void write_exponent(std::ostream& out, const Expr& e) {
  if (!fits_exponent(e)) {
    out << '(';
    write(out, e);
    out << ')';
    return;
  }
  if (const auto* neg = std::get_if<Negate>(&e.node)) {
    out << '-';
    write_exponent(out, *neg->operand);
    return;
  }
  write(out, e);
}

void write(std::ostream& out, const Expr& e) {
  if (const auto* lit = std::get_if<Literal>(&e.node)) {
    // Negative literals only arise from constructed models; keep them atomic.
    if (std::signbit(lit->value)) {
      out << '(' << format_number(lit->value) << ')';
    } else {
      out << format_number(lit->value);
    }
  } else if (const auto* ref = std::get_if<Ref>(&e.node)) {
    out << format_identifier(ref->name);
  } else if (const auto* sum = std::get_if<Sum>(&e.node)) {
    out << "SUM(" << format_identifier(sum->name) << ')';
  } else if (const auto* neg = std::get_if<Negate>(&e.node)) {
    out << '-';
    write_parenthesized(out, *neg->operand, Unary);
  } else if (const auto* bin = std::get_if<Binary>(&e.node)) {
    const int level = level_of(e);
    if (bin->op == BinaryOp::Power) {
      write_parenthesized(out, *bin->lhs, Power);
      out << " ^ ";
      write_exponent(out, *bin->rhs);
      return;
    }
    write_parenthesized(out, *bin->lhs, level);
    out << ' ' << to_symbol(bin->op) << ' ';
    write_parenthesized(out, *bin->rhs, level + 1);
  }
}

const char* keyword(VariableKind kind) {
  switch (kind) {
    case VariableKind::Input: return "input";
    case VariableKind::Data: return "data";
    case VariableKind::Calculated: return "calc";
    case VariableKind::Output: return "output";
  }
  return "data";
}

void write_table(std::ostream& out, const Model& model, const Variable& var, const ValueTable& table) {
  if (var.dims.empty()) {
    out << format_number(table.values.at(0));
    return;
  }
  const bool multiline = var.dims.size() > 1;
  out << '{';
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    if (multiline) {
      out << "\n  ";
    } else if (i > 0) {
      out << ' ';
    }
    const auto key = tensor_coords(model, var.dims, i);
    for (std::size_t k = 0; k < key.size(); ++k) {
      if (k > 0) out << ',';
      out << format_identifier(key[k]);
    }
    out << ": " << format_number(table.values[i]);
    if (i + 1 < table.values.size()) out << ',';
  }
  if (multiline) out << '\n';
  out << '}';
}

}  // namespace

std::string format_expr(const Expr& expr) {
  std::ostringstream out;
  write(out, expr);
  return out.str();
}

std::string pretty_print(const Model& model) {
  std::ostringstream out;
  for (const Dimension& dim : model.dimensions()) {
    out << "dimension " << format_identifier(dim.name) << " = [";
    for (std::size_t i = 0; i < dim.instances.size(); ++i) {
      if (i > 0) out << ", ";
      out << format_identifier(dim.instances[i]);
    }
    out << "]\n";
  }
  if (!model.dimensions().empty() && !model.variables().empty()) out << '\n';
  for (const Variable& var : model.variables()) {
    out << keyword(var.kind) << ' ' << format_identifier(var.name);
    if (!var.dims.empty()) {
      out << " over (";
      bool first = true;
      for (const auto& name : model.dimension_names(var.dims)) {
        if (!first) out << ", ";
        out << format_identifier(name);
        first = false;
      }
      out << ')';
    }
    if (const auto* table = var.table()) {
      out << " = ";
      write_table(out, model, var, *table);
    } else if (const auto* formula = var.formula()) {
      out << " = " << format_expr(*formula);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dimcalc
