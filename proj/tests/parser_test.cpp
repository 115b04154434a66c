#include <gtest/gtest.h>

#include <random>

#include "dimcalc/checker.hpp"
#include "dimcalc/parser.hpp"
#include "fixtures.hpp"
#include "random_model.hpp"

namespace dimcalc {
namespace {

std::vector<std::string> codes(const ParseResult& r) {
  std::vector<std::string> out;
  for (const auto& d : r.diagnostics) out.push_back(d.code);
  return out;
}

Expr formula_of(const std::string& text) {
  ParseResult r = parse_model("data a = 2\ndata b = 3\ndata c = 5\ncalc x = " + text + "\n");
  EXPECT_TRUE(r.ok()) << text;
  if (!r.ok()) return make_literal(0);
  return *r.model->variable("x").formula();
}

TEST(Parser, DimensionDeclaration) {
  ParseResult r = parse_model("dimension Region = [N, SE, SW, E, W]\n");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.model->dimensions().size(), 1u);
  EXPECT_EQ(r.model->dimensions()[0].name, "Region");
  EXPECT_EQ(r.model->dimensions()[0].instances, (std::vector<std::string>{"N", "SE", "SW", "E", "W"}));
}

TEST(Parser, ScalarInput) {
  ParseResult r = parse_model("input Base_Price = 100\n");
  ASSERT_TRUE(r.ok());
  const Variable& v = r.model->variable("Base_Price");
  EXPECT_EQ(v.kind, VariableKind::Input);
  EXPECT_TRUE(v.dims.empty());
  ASSERT_NE(v.table(), nullptr);
  EXPECT_EQ(v.table()->values, std::vector<double>{100});
}

TEST(Parser, InputWithoutDefault) {
  ParseResult r = parse_model("input Price\n");
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(std::holds_alternative<NoValue>(r.model->variable("Price").payload));
}

TEST(Parser, UndeclaredReference) {
  ParseResult r = parse_model("dimension Month = [Jan, Feb]\ncalc X over (Month) = SUM(Y)\n");
  ASSERT_FALSE(r.ok());
  ASSERT_EQ(codes(r), std::vector<std::string>{"P-UNDECLARED"});
  EXPECT_NE(r.diagnostics[0].message.find("'Y'"), std::string::npos);
  EXPECT_EQ(r.diagnostics[0].span.start_line, 2);
  EXPECT_EQ(r.diagnostics[0].span.start_col, 27);
}

TEST(Parser, KeyedTable) {
  ParseResult r = parse_model(
      "dimension Sector = [Government, Military, Private, Education]\n"
      "data Rebate over (Sector) = {Government: 0.40, Military: 0.20, Private: 0.10, Education: 0.70}\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.model->variable("Rebate").table()->values, (std::vector<double>{0.4, 0.2, 0.1, 0.7}));
}

TEST(Parser, TableKeysMayComeInAnyOrder) {
  ParseResult r = parse_model(
      "dimension A = [a1, a2]\ndimension B = [b1, b2]\n"
      "data T over (B, A) = {a2,b2: 4, a1,b1: 1,\n a1,b2: 2, a2,b1: 3}\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.model->variable("T").table()->values, (std::vector<double>{1, 2, 3, 4}));
}

TEST(Parser, PositionalOneDimensionalTable) {
  ParseResult r = parse_model("dimension P = [s, d]\ndata C over (P) = {48, -72}\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.model->variable("C").table()->values, (std::vector<double>{48, -72}));
}

TEST(Parser, QuotedIdentifiers) {
  ParseResult r = parse_model("dimension \"Sales Region\" = [\"North East\", \"over\"]\n"
                              "data \"Unit Cost\" over (\"Sales Region\") = {\"North East\": 1, \"over\": 2}\n"
                              "calc \"SUM\" over (\"Sales Region\") = \"Unit Cost\" * 2\n");
  ASSERT_TRUE(r.ok()) << (r.diagnostics.empty() ? "" : render_text(r.diagnostics[0]));
  EXPECT_EQ(r.model->dimensions()[0].instances[1], "over");
  EXPECT_NE(r.model->find_variable("SUM"), std::nullopt);
}

TEST(Parser, CommentsAndBracketContinuation) {
  ParseResult r = parse_model("# header\ndimension D = [a,   # first\n  b]\ndata x = 1 # trailing\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.model->dimensions()[0].size(), 2u);
}

struct ErrorCase {
  const char* text;
  const char* code;
};

TEST(Parser, ErrorCodes) {
  const ErrorCase cases[] = {
      {"data x = 40%\n", "P-PERCENT"},
      {"data x = 1.2.3\n", "P-NUMBER"},
      {"data x = 1e999\n", "P-NUMBER"},
      {"data x = $\n", "P-TOKEN"},
      {"data \"x = 1\n", "P-TOKEN"},
      {"data x = 1\ndata x = 2\n", "P-DUPLICATE"},
      {"dimension D = [a, a]\n", "P-DUPLICATE"},
      {"dimension D = [a]\ndata x over (D, D) = {a: 1}\n", "P-DUPLICATE"},
      {"dimension D = [a, b]\ndata x over (D) = {a: 1}\n", "P-COUNT"},
      {"dimension D = [a, b]\ndata x over (D) = 3\n", "P-COUNT"},
      {"dimension D = [a, b]\ndata x over (D) = {a: 1, c: 2}\n", "P-LABEL"},
      {"data x over (Nope) = 1\n", "P-UNDECLARED"},
      {"dimension D = []\n", "P-DIMENSION"},
      {"calc x = (1 + \n", "P-SYNTAX"},
      {"calc x = SUM(1)\n", "P-SYNTAX"},
      {"frobnicate x\n", "P-SYNTAX"},
      {"data over = 1\n", "P-SYNTAX"},
      {"dimension D = [a]\ndimension E = [b]\ndata x over (D, E) = {1}\n", "P-SYNTAX"},
  };
  for (const auto& c : cases) {
    ParseResult r = parse_model(c.text);
    EXPECT_FALSE(r.ok()) << c.text;
    ASSERT_FALSE(r.diagnostics.empty()) << c.text;
    EXPECT_EQ(r.diagnostics[0].code, c.code) << c.text;
    for (const auto& d : r.diagnostics) EXPECT_GE(d.span.start_line, 1) << c.text;
  }
}

TEST(Parser, RecoversAndReportsEveryBadStatement) {
  ParseResult r = parse_model("data a = 1 +\ndata b = 2\ndata c = 3%\ncalc d = b + e\n");
  EXPECT_EQ(codes(r), (std::vector<std::string>{"P-SYNTAX", "P-PERCENT", "P-UNDECLARED"}));
}

TEST(Parser, Precedence) {
  using B = BinaryOp;
  auto a = [] { return make_ref("a"); };
  auto b = [] { return make_ref("b"); };
  auto c = [] { return make_ref("c"); };
  EXPECT_EQ(formula_of("a + b * c"), make_binary(B::Add, a(), make_binary(B::Multiply, b(), c())));
  EXPECT_EQ(formula_of("a - b - c"), make_binary(B::Subtract, make_binary(B::Subtract, a(), b()), c()));
  EXPECT_EQ(formula_of("a / b * c"), make_binary(B::Multiply, make_binary(B::Divide, a(), b()), c()));
  EXPECT_EQ(formula_of("(a + b) * c"), make_binary(B::Multiply, make_binary(B::Add, a(), b()), c()));
  EXPECT_EQ(formula_of("a ^ b ^ c"), make_binary(B::Power, make_binary(B::Power, a(), b()), c()));
  EXPECT_EQ(formula_of("-a ^ b"), make_negate(make_binary(B::Power, a(), b())));
  EXPECT_EQ(formula_of("a ^ -b"), make_binary(B::Power, a(), make_negate(b())));
  EXPECT_EQ(formula_of("a * -b ^ c"), make_binary(B::Multiply, a(), make_negate(make_binary(B::Power, b(), c()))));
  EXPECT_EQ(formula_of("a ^ --b"), make_binary(B::Power, a(), make_negate(make_negate(b()))));
  EXPECT_EQ(formula_of("1 - a"), make_binary(B::Subtract, make_literal(1), a()));
}

TEST(Parser, DeepNestingIsADiagnosticNotACrash) {
  const std::string deep = "calc x = " + std::string(100000, '(') + "1" + std::string(100000, ')') + "\n";
  ParseResult r = parse_model(deep);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(codes(r), std::vector<std::string>{"P-SYNTAX"});
  const std::string minus = "calc x = " + std::string(100000, '-') + "1\n";
  EXPECT_FALSE(parse_model(minus).ok());
}

TEST(Parser, TotalOnRandomBytes) {
  std::mt19937_64 rng(11);
  const std::string alphabet = "dimension input data calc output over SUM ()[]{},:=+-*/^%#\"\n 0123456789.eE_abcXYZ\t\r$@";
  for (int trial = 0; trial < 3000; ++trial) {
    std::string text;
    const std::size_t len = rng() % 200;
    for (std::size_t i = 0; i < len; ++i) {
      text += (rng() % 4 == 0) ? static_cast<char>(rng() % 256) : alphabet[rng() % alphabet.size()];
    }
    ParseResult r = parse_model(text);
    EXPECT_EQ(r.ok(), r.diagnostics.empty() || !has_errors(r.diagnostics));
    if (!r.ok()) {
      EXPECT_FALSE(r.diagnostics.empty());
    }
  }
}

TEST(Parser, TotalOnMutatedFixtures) {
  std::mt19937_64 rng(12);
  for (const char* name : {"acme.dml", "pricing.dml"}) {
    const std::string original = testing::read_text(testing::fixture_path(name));
    for (int trial = 0; trial < 300; ++trial) {
      std::string text = original;
      for (int edit = 0; edit < 1 + static_cast<int>(rng() % 5); ++edit) {
        const std::size_t at = rng() % text.size();
        switch (rng() % 3) {
          case 0: text.erase(at, 1 + rng() % 8); break;
          case 1: text.insert(at, 1, "{}[]()=,:+-*^%\"#\n"[rng() % 17]); break;
          default: text[at] = static_cast<char>(rng() % 128); break;
        }
        if (text.empty()) text = "x";
      }
      ParseResult r = parse_model(text);
      if (!r.ok()) {
      EXPECT_FALSE(r.diagnostics.empty());
    }
    }
  }
}

TEST(PrettyPrint, EmptyModel) { EXPECT_EQ(pretty_print(Model()), ""); }

TEST(PrettyPrint, FixturesRoundTrip) {
  for (const char* name : {"acme.dml", "pricing.dml"}) {
    const Model first = testing::load_model(name);
    const std::string printed = pretty_print(first);
    ParseResult again = parse_model(printed);
    ASSERT_TRUE(again.ok()) << printed;
    EXPECT_EQ(*again.model, first);
    EXPECT_EQ(pretty_print(*again.model), printed);
  }
  EXPECT_EQ(testing::load_model("pricing.dml").variables().size(), 16u);
}

TEST(PrettyPrint, RandomModelsRoundTrip) {
  std::mt19937_64 rng(13);
  testing::RandomModelOptions options;
  for (int trial = 0; trial < 500; ++trial) {
    options.well_typed = trial % 2 == 0;
    const Model model = testing::random_model(rng, options);
    const std::string printed = pretty_print(model);
    ParseResult again = parse_model(printed);
    ASSERT_TRUE(again.ok()) << printed << "\n" << (again.diagnostics.empty() ? "" : render_text(again.diagnostics[0]));
    ASSERT_EQ(*again.model, model) << printed;
  }
}

TEST(PrettyPrint, MinimalParentheses) {
  for (const char* text : {"a + b * c", "(a + b) * c", "a - (b - c)", "a / (b * c)", "a ^ b ^ c", "a ^ (b ^ c)",
                           "(-a) ^ b", "-a ^ b", "a ^ -b", "a ^ (b + c)", "-(a + b)", "--a", "1 - a", "SUM(a) / 2"}) {
    EXPECT_EQ(format_expr(formula_of(text)), text);
  }
}

}  // namespace
}  // namespace dimcalc
