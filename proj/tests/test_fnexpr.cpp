#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "bisz/fnexpr.hpp"

using namespace bisz;

namespace {

double eval_str(const std::string& s, double x, double y) { return evaluate(parse(s), x, y); }

// Independent expression model used to check precedence and associativity.
struct Tree {
  enum Kind { Num, X, Y, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Abs } kind;
  double value = 0.0;
  std::unique_ptr<Tree> a, b;
};

int prec(const Tree& t) {
  switch (t.kind) {
    case Tree::Add:
    case Tree::Sub: return 1;
    case Tree::Mul:
    case Tree::Div: return 2;
    case Tree::Neg: return 3;
    case Tree::Pow: return 4;
    default: return 5;
  }
}

std::string wrap(const std::string& s, bool paren) { return paren ? "(" + s + ")" : s; }

std::string render(const Tree& t) {
  switch (t.kind) {
    case Tree::Num: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", t.value);
      return buf;
    }
    case Tree::X: return "x";
    case Tree::Y: return "y";
    case Tree::Neg: return "-" + wrap(render(*t.a), prec(*t.a) < 3);
    case Tree::Sin: return "sin(" + render(*t.a) + ")";
    case Tree::Cos: return "cos(" + render(*t.a) + ")";
    case Tree::Exp: return "exp(" + render(*t.a) + ")";
    case Tree::Abs: return "abs(" + render(*t.a) + ")";
    case Tree::Pow:
      return wrap(render(*t.a), prec(*t.a) <= 4) + "^" + wrap(render(*t.b), prec(*t.b) < 3);
    default: {
      const char* op = t.kind == Tree::Add ? " + " : t.kind == Tree::Sub ? " - " : t.kind == Tree::Mul ? "*" : "/";
      const int p = prec(t);
      return wrap(render(*t.a), prec(*t.a) < p) + op + wrap(render(*t.b), prec(*t.b) <= p);
    }
  }
}

std::optional<double> reference(const Tree& t, double x, double y) {
  auto un = [&](auto fn) -> std::optional<double> {
    auto v = reference(*t.a, x, y);
    if (!v) return std::nullopt;
    return fn(*v);
  };
  std::optional<double> r;
  switch (t.kind) {
    case Tree::Num: r = t.value; break;
    case Tree::X: r = x; break;
    case Tree::Y: r = y; break;
    case Tree::Neg: r = un([](double v) { return -v; }); break;
    case Tree::Sin: r = un([](double v) { return std::sin(v); }); break;
    case Tree::Cos: r = un([](double v) { return std::cos(v); }); break;
    case Tree::Exp: r = un([](double v) { return std::exp(v); }); break;
    case Tree::Abs: r = un([](double v) { return std::fabs(v); }); break;
    default: {
      const auto l = reference(*t.a, x, y);
      const auto rr = reference(*t.b, x, y);
      if (!l || !rr) return std::nullopt;
      switch (t.kind) {
        case Tree::Add: r = *l + *rr; break;
        case Tree::Sub: r = *l - *rr; break;
        case Tree::Mul: r = *l * *rr; break;
        case Tree::Div:
          if (*rr == 0.0) return std::nullopt;
          r = *l / *rr;
          break;
        case Tree::Pow:
          if (*l == 0.0 && *rr < 0.0) return std::nullopt;
          if (*l < 0.0 && *rr != std::trunc(*rr)) return std::nullopt;
          r = std::pow(*l, *rr);
          break;
        default: break;
      }
    }
  }
  if (r && !std::isfinite(*r)) return std::nullopt;
  return r;
}

std::unique_ptr<Tree> random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 12);
  auto t = std::make_unique<Tree>();
  const int k = pick(rng);
  std::uniform_real_distribution<double> num(0.1, 4.0);
  switch (k) {
    case 0: t->kind = Tree::Num; t->value = std::round(num(rng) * 8) / 8; break;
    case 1: t->kind = Tree::X; break;
    case 2: t->kind = Tree::Y; break;
    case 3: t->kind = Tree::Neg; break;
    case 4: t->kind = Tree::Add; break;
    case 5: t->kind = Tree::Sub; break;
    case 6: t->kind = Tree::Mul; break;
    case 7: t->kind = Tree::Div; break;
    case 8: t->kind = Tree::Pow; break;
    case 9: t->kind = Tree::Sin; break;
    case 10: t->kind = Tree::Cos; break;
    case 11: t->kind = Tree::Exp; break;
    default: t->kind = Tree::Abs; break;
  }
  if (k >= 3) t->a = random_tree(rng, depth - 1);
  if (k >= 4 && k <= 8) {
    if (k == 8) {
      // small integer or half-integer exponents keep values finite
      t->b = std::make_unique<Tree>();
      std::uniform_int_distribution<int> e(0, 3);
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
        t->b->kind = Tree::Neg;
        t->b->a = std::make_unique<Tree>();
        t->b->a->kind = Tree::Num;
        t->b->a->value = e(rng);
      } else {
        t->b->kind = Tree::Num;
        t->b->value = e(rng) + (std::uniform_int_distribution<int>(0, 4)(rng) == 0 ? 0.5 : 0.0);
      }
    } else {
      t->b = random_tree(rng, depth - 1);
    }
  }
  return t;
}

}  // namespace

TEST(Parse, Examples) {
  EXPECT_DOUBLE_EQ(eval_str("x*y", 0.3, 0.4), 0.3 * 0.4);
  EXPECT_DOUBLE_EQ(eval_str("x^3*y + 6*y^2 + x^2", 1, 1), 8.0);
  EXPECT_DOUBLE_EQ(eval_str("-x^2", 2, 0), -4.0);
  EXPECT_NEAR(eval_str("sin(2*pi*y)", 0, 0.25), 1.0, 1e-15);
  EXPECT_NEAR(eval_str("y^2*exp(2*x)", 0.5, 0.5), 0.25 * std::numbers::e, 1e-15);
  EXPECT_NEAR(eval_str("y^2*exp(2*x)", 0.5, 0.5), 0.6795705, 1e-7);
}

TEST(Parse, PrecedenceAndAssociativity) {
  EXPECT_DOUBLE_EQ(eval_str("2^3^2", 0, 0), 512.0);
  EXPECT_DOUBLE_EQ(eval_str("8/4/2", 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(eval_str("8-4-2", 0, 0), 2.0);
  EXPECT_DOUBLE_EQ(eval_str("2*3+4", 0, 0), 10.0);
  EXPECT_DOUBLE_EQ(eval_str("2+3*4", 0, 0), 14.0);
  EXPECT_DOUBLE_EQ(eval_str("(2+3)*4", 0, 0), 20.0);
  EXPECT_DOUBLE_EQ(eval_str("2^-1", 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(eval_str("--3", 0, 0), 3.0);
  EXPECT_DOUBLE_EQ(eval_str("-2^2", 0, 0), -4.0);
  EXPECT_DOUBLE_EQ(eval_str("(-2)^2", 0, 0), 4.0);
  EXPECT_DOUBLE_EQ(eval_str("x - -y", 1, 2), 3.0);
}

TEST(Parse, NumbersConstantsWhitespace) {
  EXPECT_DOUBLE_EQ(eval_str("  1.5e2 ", 0, 0), 150.0);
  EXPECT_DOUBLE_EQ(eval_str("2.5E-1", 0, 0), 0.25);
  EXPECT_DOUBLE_EQ(eval_str(".5", 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(eval_str("pi", 0, 0), std::numbers::pi);
  EXPECT_DOUBLE_EQ(eval_str("e", 0, 0), std::numbers::e);
  EXPECT_DOUBLE_EQ(eval_str("2*e", 0, 0), 2 * std::numbers::e);
  EXPECT_DOUBLE_EQ(eval_str("\tsqrt( abs(-16) )\n", 0, 0), 4.0);
  EXPECT_DOUBLE_EQ(eval_str("log(exp(x))", 1.25, 0), 1.25);
  EXPECT_DOUBLE_EQ(eval_str("cos(0)", 0, 0), 1.0);
}

TEST(Parse, ErrorsCarryOffsets) {
  auto offset_of = [](const std::string& s) -> std::optional<std::size_t> {
    try {
      parse(s);
    } catch (const ParseError& e) {
      return e.offset();
    }
    return std::nullopt;
  };
  EXPECT_EQ(offset_of(""), 0u);
  EXPECT_EQ(offset_of("x+"), 2u);
  EXPECT_EQ(offset_of("(x"), 2u);
  EXPECT_EQ(offset_of("x*)"), 2u);
  EXPECT_EQ(offset_of("x@y"), 1u);
  EXPECT_EQ(offset_of("x y"), 2u);
  EXPECT_TRUE(offset_of("2x").has_value());
  EXPECT_TRUE(offset_of("sin x").has_value());
  EXPECT_TRUE(offset_of("sin()").has_value());
  EXPECT_TRUE(offset_of("1e").has_value());
  EXPECT_TRUE(offset_of("^2").has_value());
}

TEST(Parse, UnknownIdentifier) {
  try {
    parse("x + foo(y)");
    FAIL() << "expected throw";
  } catch (const UnknownIdentifier& e) {
    EXPECT_EQ(e.name(), "foo");
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(parse("z"), UnknownIdentifier);
  EXPECT_THROW(parse("tan(x)"), UnknownIdentifier);
  EXPECT_THROW(parse("X"), UnknownIdentifier);
}

TEST(Parse, AstShape) {
  const auto ast = parse("sin(x) + -y*2");
  const auto& nodes = ast.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    switch (n.kind) {
      case NodeKind::Number:
      case NodeKind::VarX:
      case NodeKind::VarY:
        EXPECT_EQ(n.lhs, -1);
        EXPECT_EQ(n.rhs, -1);
        break;
      case NodeKind::Neg:
      case NodeKind::Call:
        EXPECT_GE(n.lhs, 0);
        EXPECT_LT(n.lhs, static_cast<int>(i));
        EXPECT_EQ(n.rhs, -1);
        break;
      default:
        EXPECT_GE(n.lhs, 0);
        EXPECT_GE(n.rhs, 0);
        EXPECT_LT(n.lhs, static_cast<int>(i));
        EXPECT_LT(n.rhs, static_cast<int>(i));
    }
  }
  EXPECT_EQ(ast.node(ast.root()).kind, NodeKind::Add);
}

TEST(Evaluate, DomainErrors) {
  EXPECT_THROW(eval_str("log(x)", 0, 1), EvaluationError);
  EXPECT_THROW(eval_str("log(-x)", 1, 1), EvaluationError);
  EXPECT_THROW(eval_str("sqrt(-1)", 0, 0), EvaluationError);
  EXPECT_THROW(eval_str("1/x", 0, 0), EvaluationError);
  EXPECT_THROW(eval_str("0^-1", 0, 0), EvaluationError);
  EXPECT_THROW(eval_str("(-2)^0.5", 0, 0), EvaluationError);
  EXPECT_THROW(eval_str("exp(1000)", 0, 0), EvaluationError);
  EXPECT_DOUBLE_EQ(eval_str("(-2)^3", 0, 0), -8.0);
  try {
    eval_str("x + log(y)", 1, 0);
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_EQ(e.span().begin, 4u);
  }
}

TEST(PrettyPrint, RoundTripEvaluatesIdentically) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pt(0.0, 3.0);
  const std::vector<std::string> sources = {"x^3*y + 6*y^2 + x^2", "-x^2", "sin(2*pi*y)*exp(-x/3)",
                                            "2^3^x", "abs(x - y)/(1 + x*y)", "sqrt(x)*log(1+y)",
                                            "1.25e-3*x - -y", "cos(x)^2 + sin(y)^2"};
  for (const auto& s : sources) {
    const auto a = parse(s);
    const auto printed = pretty_print(a);
    const auto b = parse(printed);
    EXPECT_EQ(pretty_print(b), printed) << s;
    for (int i = 0; i < 1000; ++i) {
      const double x = pt(rng), y = pt(rng);
      const double va = evaluate(a, x, y);
      const double vb = evaluate(b, x, y);
      ASSERT_EQ(va, vb) << s << " -> " << printed << " at " << x << "," << y;
    }
  }
}

TEST(Precedence, RandomTreesMatchReferenceEvaluator) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pt(0.0, 2.0);
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    const auto tree = random_tree(rng, 5);
    const std::string src = render(*tree);
    ExprAst ast = parse(src);
    const auto reparsed = parse(pretty_print(ast));
    for (int j = 0; j < 5; ++j) {
      const double x = pt(rng), y = pt(rng);
      const auto want = reference(*tree, x, y);
      if (!want) {
        EXPECT_THROW(evaluate(ast, x, y), EvaluationError) << src;
        continue;
      }
      const double got = evaluate(ast, x, y);
      ASSERT_LE(std::fabs(got - *want), 1e-12 * (1 + std::fabs(*want))) << src << " at " << x << "," << y;
      ASSERT_EQ(evaluate(reparsed, x, y), got) << src;
      ++compared;
    }
  }
  EXPECT_GT(compared, 500);
}

TEST(Parse, MutationCorpusNeverCrashesOrYieldsNaN) {
  const std::vector<std::string> seeds = {"x^3*y + 6*y^2 + x^2", "sin(2*pi*y)*exp(-x)",
                                          "sqrt(abs(x-y))/(1+x)", "-(x+1.5e-2)^-2", "log(1+x*y)"};
  const std::string alphabet = "xy0123456789.+-*/^()eEpisncoqrtabgl ,@";
  std::mt19937_64 rng(5);
  int parse_errors = 0;
  for (int i = 0; i < 5000; ++i) {
    std::string s = seeds[i % seeds.size()];
    const int edits = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < edits; ++k) {
      const std::size_t pos = s.empty() ? 0 : rng() % (s.size() + 1);
      const char c = alphabet[rng() % alphabet.size()];
      switch (rng() % 3) {
        case 0: s.insert(s.begin() + static_cast<long>(pos), c); break;
        case 1: if (pos < s.size()) s.erase(pos, 1); break;
        default: if (pos < s.size()) s[pos] = c; break;
      }
    }
    try {
      const auto ast = parse(s);
      for (double x : {0.0, 0.5, 2.0}) {
        try {
          const double v = evaluate(ast, x, 0.7);
          ASSERT_TRUE(std::isfinite(v)) << s;
        } catch (const EvaluationError&) {
        }
      }
    } catch (const ParseError& e) {
      ASSERT_LE(e.offset(), s.size()) << s;
      ++parse_errors;
    }
  }
  EXPECT_GT(parse_errors, 1000);
}

TEST(Builtin, Examples) {
  EXPECT_DOUBLE_EQ(builtin("xy")(0.9, 0.9), 0.81);
  EXPECT_EQ(builtin("t2-poly")(0, 0), 0.0);
  EXPECT_EQ(builtin("t2-poly")(1, 1), 8.0);
  for (double y : {0.0, 0.3, 1.7, 9.0}) EXPECT_EQ(builtin("fig5")(1.0, y), 0.0);
  EXPECT_THROW(builtin("nope"), UnknownBuiltin);
  EXPECT_EQ(builtin_names().size(), 5u);
}

TEST(Builtin, AgreesWithItsExpressionLabel) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pt(0.0, 2.0);
  for (const auto& name : builtin_names()) {
    const auto f = builtin(name);
    const auto g = from_expression(f.label());
    for (int i = 0; i < 50; ++i) {
      const double x = pt(rng), y = pt(rng);
      EXPECT_NEAR(f(x, y), g(x, y), 1e-12 * (1 + std::fabs(f(x, y)))) << name;
    }
  }
}

TEST(Builtin, PartialsMatchFiniteDifferences) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pt(0.1, 1.5);
  const double h = 1e-4;
  for (const auto& name : builtin_names()) {
    const auto f = builtin(name);
    ASSERT_TRUE(f.partials().has_value()) << name;
    const auto& p = *f.partials();
    for (int i = 0; i < 30; ++i) {
      const double x = pt(rng), y = pt(rng);
      const double fx = (f(x + h, y) - f(x - h, y)) / (2 * h);
      const double fy = (f(x, y + h) - f(x, y - h)) / (2 * h);
      const double fxx = (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h);
      const double fyy = (f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / (h * h);
      const double scale = 1 + std::fabs(f(x, y)) * 10;
      EXPECT_NEAR(p.fx(x, y), fx, 1e-6 * scale) << name;
      EXPECT_NEAR(p.fy(x, y), fy, 1e-6 * scale) << name;
      EXPECT_NEAR(p.fxx(x, y), fxx, 1e-4 * scale) << name;
      EXPECT_NEAR(p.fyy(x, y), fyy, 1e-4 * scale) << name;
    }
  }
}

TEST(Builtin, GrowthDeclarationsBoundWeightedValues) {
  for (const auto& name : builtin_names()) {
    const auto f = builtin(name);
    if (!f.growth()) continue;
    const auto [n1, n2] = *f.growth();
    EXPECT_GT(f.growth_constant(), 0.0);
    for (int i = 0; i <= 100; i += 5) {
      for (int j = 0; j <= 100; j += 5) {
        const double x = i, y = j;
        const double w = 1.0 / ((1 + std::pow(x, n1)) * (1 + std::pow(y, n2)));
        EXPECT_LE(std::fabs(f(x, y)) * w, f.growth_constant() * (1 + 1e-12)) << name;
      }
    }
  }
  EXPECT_FALSE(builtin("fig6").growth().has_value());
  EXPECT_FALSE(builtin("fig7").growth().has_value());
}

TEST(FunctionSpec, PrefixAndUnivariate) {
  EXPECT_EQ(function_from_spec("builtin:xy")(2, 3), 6.0);
  EXPECT_EQ(function_from_spec("x+y")(2, 3), 5.0);
  EXPECT_THROW(function_from_spec("builtin:zz"), UnknownBuiltin);
  EXPECT_EQ(univariate_from_expression("x^2 + 1")(3.0), 10.0);
  EXPECT_THROW(univariate_from_expression("x*y"), InvalidParameter);
}
