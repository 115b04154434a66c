#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "dimcalc/format.hpp"
#include "dimcalc/parser.hpp"

namespace dimcalc {

namespace {

enum class Tok {
  Ident,
  Quoted,
  Number,
  LBracket,
  RBracket,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Colon,
  Equals,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  Newline,
  Error,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int col = 1;
  int end_line = 1;
  int end_col = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of input";
    case Tok::Quoted: return "\"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& file, std::vector<Diagnostic>& diags)
      : text_(text), file_(file), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      Token t = next();
      if (t.kind == Tok::Newline && (depth_ > 0 || out.empty() || out.back().kind == Tok::Newline)) continue;
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Token start(Tok kind) const {
    Token t;
    t.kind = kind;
    t.line = line_;
    t.col = col_;
    return t;
  }

  void finish(Token& t, std::size_t begin) const {
    t.text = std::string(text_.substr(begin, pos_ - begin));
    t.end_line = line_;
    t.end_col = col_ > 1 ? col_ - 1 : col_;
  }

  Token error(Token t, std::size_t begin, std::string code, std::string message) {
    finish(t, begin);
    t.kind = Tok::Error;
    diags_.push_back({Severity::Error, std::move(code), std::move(message),
                      {file_, t.line, t.col, t.end_line, t.end_col}});
    return t;
  }

  static bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
  static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
  static bool digit(char c) { return c >= '0' && c <= '9'; }

  Token next() {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && peek() != '\n') advance();
      } else {
        break;
      }
    }
    const std::size_t begin = pos_;
    if (pos_ >= text_.size()) {
      Token t = start(Tok::End);
      t.end_line = t.line;
      t.end_col = t.col;
      return t;
    }
    const char c = peek();
    Token t = start(Tok::Error);
    if (c == '\n') {
      t.kind = Tok::Newline;
      advance();
      finish(t, begin);
      return t;
    }
    if (ident_start(c)) {
      while (ident_char(peek())) advance();
      t.kind = Tok::Ident;
      finish(t, begin);
      return t;
    }
    if (c == '"') {
      advance();
      while (pos_ < text_.size() && peek() != '"' && peek() != '\n') advance();
      if (peek() != '"') return error(t, begin, "P-TOKEN", "unterminated quoted identifier");
      advance();
      finish(t, begin);
      t.text = t.text.substr(1, t.text.size() - 2);
      if (t.text.empty()) return error(t, begin, "P-TOKEN", "empty quoted identifier");
      t.kind = Tok::Quoted;
      return t;
    }
    if (digit(c) || (c == '.' && digit(peek(1)))) return number(t, begin);

    advance();
    switch (c) {
      case '[': t.kind = Tok::LBracket; ++depth_; break;
      case ']': t.kind = Tok::RBracket; depth_ = depth_ > 0 ? depth_ - 1 : 0; break;
      case '(': t.kind = Tok::LParen; ++depth_; break;
      case ')': t.kind = Tok::RParen; depth_ = depth_ > 0 ? depth_ - 1 : 0; break;
      case '{': t.kind = Tok::LBrace; ++depth_; break;
      case '}': t.kind = Tok::RBrace; depth_ = depth_ > 0 ? depth_ - 1 : 0; break;
      case ',': t.kind = Tok::Comma; break;
      case ':': t.kind = Tok::Colon; break;
      case '=': t.kind = Tok::Equals; break;
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      case '^': t.kind = Tok::Caret; break;
      case '%':
        return error(t, begin, "P-PERCENT", "percent literals are not supported; write the fraction (0.40, not 40%)");
      default: {
        // Swallow the rest of a multi-byte UTF-8 sequence so it is reported once.
        while (pos_ < text_.size() && (static_cast<unsigned char>(peek()) & 0xC0) == 0x80) advance();
        finish(t, begin);
        return error(t, begin, "P-TOKEN", "unexpected character '" + t.text + "'");
      }
    }
    finish(t, begin);
    return t;
  }

  Token number(Token t, std::size_t begin) {
    while (digit(peek()) || peek() == '.') advance();
    if (peek() == 'e' || peek() == 'E') {
      advance();
      if (peek() == '+' || peek() == '-') advance();
      while (digit(peek())) advance();
    }
    while (ident_char(peek()) || peek() == '.') advance();
    finish(t, begin);
    const char* first = text_.data() + begin;
    const char* last = text_.data() + pos_;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      return error(t, begin, "P-NUMBER", "malformed number '" + t.text + "'");
    }
    t.kind = Tok::Number;
    t.number = value;
    return t;
  }

  std::string_view text_;
  const std::string& file_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int depth_ = 0;
};

// Thrown to abandon the current statement after a diagnostic was recorded.
struct StatementError {};

constexpr int max_nesting = 200;

struct PendingRef {
  std::string name;
  SourceSpan span;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file, std::vector<Diagnostic>& diags)
      : tokens_(std::move(tokens)), file_(std::move(file)), diags_(diags) {}

  std::optional<Model> run() {
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Newline) {
        ++pos_;
        continue;
      }
      const std::size_t refs_before = refs_.size();
      try {
        statement();
      } catch (const StatementError&) {
        refs_.resize(refs_before);
        while (peek().kind != Tok::Newline && peek().kind != Tok::End) ++pos_;
      }
    }
    for (const auto& ref : refs_) {
      if (!variable_names_.contains(ref.name)) {
        report("P-UNDECLARED", "reference to undeclared variable '" + ref.name + "'", ref.span);
      }
    }
    if (has_errors(diags_)) return std::nullopt;
    try {
      return Model(std::move(dimensions_), std::move(variables_));
    } catch (const ModelError& e) {
      report("P-INVALID", e.what(), SourceSpan{file_, 1, 1, 1, 1});
      return std::nullopt;
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  const Token& take() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }

  SourceSpan span_of(const Token& t) const { return {file_, t.line, t.col, t.end_line, t.end_col}; }
  SourceSpan span_of(const Token& first, const Token& last) const {
    return {file_, first.line, first.col, last.end_line, last.end_col};
  }
  const Token& previous() const { return tokens_[pos_ > 0 ? pos_ - 1 : 0]; }

  void report(std::string code, std::string message, SourceSpan span) {
    diags_.push_back({Severity::Error, std::move(code), std::move(message), std::move(span)});
  }

  [[noreturn]] void fail(std::string code, std::string message, const Token& at) {
    if (at.kind != Tok::Error) report(std::move(code), std::move(message), span_of(at));
    throw StatementError{};
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) fail("P-SYNTAX", "expected " + std::string(what) + ", found " + describe(peek()), peek());
    return take();
  }

  bool is_keyword(const Token& t, std::string_view word) const { return t.kind == Tok::Ident && t.text == word; }

  std::string name(std::string_view what) {
    const Token& t = peek();
    if (t.kind == Tok::Quoted) return take().text;
    if (t.kind == Tok::Ident) {
      if (!is_plain_identifier(t.text)) {
        fail("P-SYNTAX", "'" + t.text + "' is a reserved word; quote it to use it as " + std::string(what), t);
      }
      return take().text;
    }
    fail("P-SYNTAX", "expected " + std::string(what) + ", found " + describe(t), t);
  }

  void end_of_statement() {
    if (peek().kind != Tok::Newline && peek().kind != Tok::End) {
      fail("P-SYNTAX", "unexpected " + describe(peek()) + " after statement", peek());
    }
  }

  void statement() {
    const Token& head = peek();
    if (head.kind != Tok::Ident) fail("P-SYNTAX", "expected a declaration, found " + describe(head), head);
    if (head.text == "dimension") return dimension();
    if (head.text == "input") return variable(VariableKind::Input);
    if (head.text == "data") return variable(VariableKind::Data);
    if (head.text == "calc") return variable(VariableKind::Calculated);
    if (head.text == "output") return variable(VariableKind::Output);
    fail("P-SYNTAX", "unknown declaration keyword '" + head.text + "'", head);
  }

  bool claim_name(const std::string& n, const Token& at) {
    if (dimension_index_.contains(n) || variable_names_.contains(n)) {
      report("P-DUPLICATE", "duplicate declaration of '" + n + "'", span_of(at));
      return false;
    }
    return true;
  }

  void dimension() {
    const Token& first = take();
    const Token& name_tok = peek();
    std::string dim_name = name("a dimension name");
    expect(Tok::Equals, "'='");
    expect(Tok::LBracket, "'['");
    Dimension dim{dim_name, {}};
    std::set<std::string> seen;
    bool ok = true;
    if (peek().kind != Tok::RBracket) {
      while (true) {
        const Token& label_tok = peek();
        std::string label = name("an instance label");
        if (!seen.insert(label).second) {
          report("P-DUPLICATE", "instance '" + label + "' repeated in dimension " + dim_name, span_of(label_tok));
          ok = false;
        }
        dim.instances.push_back(label);
        if (peek().kind != Tok::Comma) break;
        take();
      }
    }
    expect(Tok::RBracket, "']'");
    end_of_statement();
    if (dim.instances.empty()) {
      report("P-DIMENSION", "dimension " + dim_name + " has no instances", span_of(first, previous()));
      ok = false;
    }
    if (dimensions_.size() >= DimensionSet::max_dimensions) {
      report("P-DIMENSION", "too many dimensions (limit 64)", span_of(first));
      ok = false;
    }
    if (!claim_name(dim_name, name_tok) || !ok) return;
    dimension_index_.emplace(dim_name, dimensions_.size());
    dimensions_.push_back(std::move(dim));
  }

  DimensionSet over_clause() {
    DimensionSet dims;
    if (!is_keyword(peek(), "over")) return dims;
    take();
    expect(Tok::LParen, "'('");
    if (peek().kind != Tok::RParen) {
      while (true) {
        const Token& t = peek();
        std::string dim_name = name("a dimension name");
        auto it = dimension_index_.find(dim_name);
        if (it == dimension_index_.end()) fail("P-UNDECLARED", "undeclared dimension '" + dim_name + "'", t);
        if (dims.contains(it->second)) fail("P-DUPLICATE", "dimension '" + dim_name + "' listed twice", t);
        dims = dims.with(it->second);
        if (peek().kind != Tok::Comma) break;
        take();
      }
    }
    expect(Tok::RParen, "')'");
    return dims;
  }

  void variable(VariableKind kind) {
    const Token& first = take();
    const Token& name_tok = peek();
    Variable var;
    var.name = name("a variable name");
    var.kind = kind;
    var.dims = over_clause();
    const std::size_t refs_before = refs_.size();
    if (peek().kind == Tok::Equals) {
      take();
      var.payload = right_hand_side(kind, var.dims);
    } else if (kind != VariableKind::Input) {
      fail("P-SYNTAX", "expected '=' and a " + std::string(kind == VariableKind::Data ? "value" : "formula"),
           peek());
    } else {
      var.payload = NoValue{};
    }
    end_of_statement();
    var.span = span_of(first, previous());
    if (!claim_name(var.name, name_tok)) {
      refs_.resize(refs_before);
      return;
    }
    variable_names_.insert(var.name);
    variables_.push_back(std::move(var));
  }

  Payload right_hand_side(VariableKind kind, DimensionSet dims) {
    if (peek().kind == Tok::LBrace) return table(dims);
    const Token& first = peek();
    Expr expr = expression(0);
    const bool value_kind = kind == VariableKind::Input || kind == VariableKind::Data;
    if (value_kind) {
      if (auto constant = numeric_constant(expr)) {
        const std::size_t expected = cell_count(dims);
        if (expected != 1) {
          fail("P-COUNT", "expected " + std::to_string(expected) + " values, found a single number", first);
        }
        return ValueTable{{*constant}};
      }
    }
    return expr;
  }

  static std::optional<double> numeric_constant(const Expr& expr) {
    if (const auto* lit = std::get_if<Literal>(&expr.node)) return lit->value;
    if (const auto* neg = std::get_if<Negate>(&expr.node)) {
      if (auto inner = numeric_constant(*neg->operand)) return -*inner;
    }
    return std::nullopt;
  }

  std::size_t cell_count(DimensionSet dims) const {
    std::size_t count = 1;
    for (std::size_t id : dims.ids()) count *= dimensions_[id].size();
    return count;
  }

  double signed_number() {
    bool negative = false;
    while (peek().kind == Tok::Minus) {
      take();
      negative = !negative;
    }
    const Token& t = expect(Tok::Number, "a number");
    return negative ? -t.number : t.number;
  }

  ValueTable table(DimensionSet dims) {
    const Token& open = take();
    const auto ids = dims.ids();
    const std::size_t expected = cell_count(dims);
    std::vector<std::optional<double>> cells(expected);
    std::size_t entries = 0;
    bool ok = true;

    const bool keyed = peek().kind == Tok::Ident || peek().kind == Tok::Quoted;
    if (!keyed && peek().kind != Tok::RBrace && ids.size() != 1) {
      fail("P-SYNTAX", "positional value lists are only accepted for one-dimensional tables; key each entry", peek());
    }
    while (peek().kind != Tok::RBrace) {
      if (keyed) {
        const Token& key_first = peek();
        std::vector<std::string> key;
        key.push_back(name("an instance label"));
        while (peek().kind == Tok::Comma) {
          take();
          key.push_back(name("an instance label"));
        }
        const Token& key_last = previous();
        expect(Tok::Colon, "':'");
        const double value = signed_number();
        const SourceSpan key_span = span_of(key_first, key_last);
        if (key.size() != ids.size()) {
          report("P-LABEL", "key has " + std::to_string(key.size()) + " labels, expected " +
                                std::to_string(ids.size()), key_span);
          ok = false;
        } else {
          std::size_t index = 0;
          bool key_ok = true;
          for (std::size_t k = 0; k < ids.size(); ++k) {
            const Dimension& dim = dimensions_[ids[k]];
            auto position = dim.find(key[k]);
            if (!position) {
              report("P-LABEL", "'" + key[k] + "' is not an instance of dimension " + dim.name, key_span);
              key_ok = false;
              break;
            }
            index = index * dim.size() + *position;
          }
          if (key_ok && cells[index]) {
            report("P-DUPLICATE", "duplicate table entry for key '" + join(key) + "'", key_span);
            key_ok = false;
          }
          if (key_ok) {
            cells[index] = value;
          } else {
            ok = false;
          }
        }
      } else {
        const double value = signed_number();
        if (entries < expected) cells[entries] = value;
      }
      ++entries;
      if (peek().kind != Tok::Comma) break;
      take();
    }
    const Token& close = expect(Tok::RBrace, "'}'");
    if (ok && entries != expected) {
      report("P-COUNT", "table has " + std::to_string(entries) + " entries, expected " + std::to_string(expected),
             span_of(open, close));
      ok = false;
    }
    ValueTable out;
    if (ok) {
      out.values.reserve(expected);
      for (const auto& cell : cells) out.values.push_back(*cell);
    }
    if (!ok) throw StatementError{};
    return out;
  }

  static std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
      if (!out.empty()) out += ",";
      out += p;
    }
    return out;
  }

  void enter(int depth) {
    if (depth > max_nesting) fail("P-SYNTAX", "expression nested too deeply", peek());
  }

  Expr with_span(Expr e, const Token& first) {
    e.span = span_of(first, previous());
    return e;
  }

  // expression := term (('+' | '-') term)*
  Expr expression(int depth) {
    enter(depth);
    const Token& first = peek();
    Expr lhs = term(depth + 1);
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const BinaryOp op = take().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Subtract;
      Expr rhs = term(depth + 1);
      lhs = with_span(make_binary(op, std::move(lhs), std::move(rhs)), first);
    }
    return lhs;
  }

  // term := unary (('*' | '/') unary)*
  Expr term(int depth) {
    enter(depth);
    const Token& first = peek();
    Expr lhs = unary(depth + 1);
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const BinaryOp op = take().kind == Tok::Star ? BinaryOp::Multiply : BinaryOp::Divide;
      Expr rhs = unary(depth + 1);
      lhs = with_span(make_binary(op, std::move(lhs), std::move(rhs)), first);
    }
    return lhs;
  }

  // unary := '-' unary | power
  Expr unary(int depth) {
    enter(depth);
    const Token& first = peek();
    if (peek().kind == Tok::Minus) {
      take();
      return with_span(make_negate(unary(depth + 1)), first);
    }
    return power(depth + 1);
  }

  // power := primary ('^' exponent)*
  Expr power(int depth) {
    enter(depth);
    const Token& first = peek();
    Expr lhs = primary(depth + 1);
    while (peek().kind == Tok::Caret) {
      take();
      Expr rhs = exponent(depth + 1);
      lhs = with_span(make_binary(BinaryOp::Power, std::move(lhs), std::move(rhs)), first);
    }
    return lhs;
  }

  // exponent := '-' exponent | primary
  Expr exponent(int depth) {
    enter(depth);
    const Token& first = peek();
    if (peek().kind == Tok::Minus) {
      take();
      return with_span(make_negate(exponent(depth + 1)), first);
    }
    return primary(depth + 1);
  }

  Expr primary(int depth) {
    enter(depth);
    const Token& first = peek();
    switch (first.kind) {
      case Tok::Number: {
        take();
        return with_span(make_literal(first.number), first);
      }
      case Tok::LParen: {
        take();
        Expr inner = expression(depth + 1);
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Quoted: {
        take();
        refs_.push_back({first.text, span_of(first)});
        return with_span(make_ref(first.text), first);
      }
      case Tok::Ident: {
        if (first.text == "SUM") {
          take();
          expect(Tok::LParen, "'(' after SUM");
          const Token& arg = peek();
          if (arg.kind != Tok::Ident && arg.kind != Tok::Quoted) {
            fail("P-SYNTAX", "SUM takes a single variable name", arg);
          }
          std::string target = name("a variable name");
          if (peek().kind != Tok::RParen) fail("P-SYNTAX", "SUM takes a single variable name", peek());
          take();
          refs_.push_back({target, span_of(arg)});
          return with_span(make_sum(std::move(target)), first);
        }
        std::string ref = name("a variable name");
        refs_.push_back({ref, span_of(first)});
        return with_span(make_ref(std::move(ref)), first);
      }
      default:
        fail("P-SYNTAX", "expected a number, variable, or '(', found " + describe(first), first);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::string file_;
  std::vector<Diagnostic>& diags_;
  std::vector<Dimension> dimensions_;
  std::vector<Variable> variables_;
  std::unordered_map<std::string, std::size_t> dimension_index_;
  std::unordered_set<std::string> variable_names_;
  std::vector<PendingRef> refs_;
};

}  // namespace

ParseResult parse_model(std::string_view text, std::string file_name) {
  ParseResult result;
  Lexer lexer(text, file_name, result.diagnostics);
  std::vector<Token> tokens = lexer.run();
  Parser parser(std::move(tokens), std::move(file_name), result.diagnostics);
  result.model = parser.run();
  // Lexical errors are found ahead of the parser; report in source order.
  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.span.start_line, a.span.start_col) < std::tie(b.span.start_line, b.span.start_col);
  });
  return result;
}

}  // namespace dimcalc
