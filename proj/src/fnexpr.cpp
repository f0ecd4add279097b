#include "bisz/fnexpr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace bisz {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExprAst run() {
    skip_ws();
    if (pos_ == src_.size()) fail("expression");
    const int root = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("operator or end of input");
    return ExprAst(std::string(src_), std::move(nodes_), root);
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
    throw ParseError(pos_, expected,
                     "expected " + expected + " at offset " + std::to_string(pos_) + ", found " +
                         found);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int push(ExprNode node) {
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int binary(NodeKind kind, int lhs, int rhs) {
    ExprNode n;
    n.kind = kind;
    n.lhs = lhs;
    n.rhs = rhs;
    n.span = {nodes_[lhs].span.begin, nodes_[rhs].span.end};
    return push(n);
  }

  int expr() {
    int lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(NodeKind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = binary(NodeKind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  int term() {
    int lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(NodeKind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = binary(NodeKind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  int unary() {
    skip_ws();
    const std::size_t start = pos_;
    if (accept('-')) {
      ExprNode n;
      n.kind = NodeKind::Neg;
      n.lhs = unary();
      n.span = {start, nodes_[n.lhs].span.end};
      return push(n);
    }
    if (accept('+')) return unary();
    return factor();
  }

  int factor() {
    const int base = atom();
    if (accept('^')) {
      return binary(NodeKind::Pow, base, unary());
    }
    return base;
  }

  int atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("number, variable, function or '('");
    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(src_.substr(start, pos_ - start));
      ExprNode n;
      n.span = {start, pos_};
      if (name == "x") {
        n.kind = NodeKind::VarX;
        return push(n);
      }
      if (name == "y") {
        n.kind = NodeKind::VarY;
        return push(n);
      }
      if (name == "pi") {
        n.number = std::numbers::pi;
        return push(n);
      }
      if (name == "e") {
        n.number = std::numbers::e;
        return push(n);
      }
      static constexpr std::array<std::pair<const char*, Func>, 6> kFuncs = {{
          {"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp},
          {"log", Func::Log}, {"sqrt", Func::Sqrt}, {"abs", Func::Abs},
      }};
      for (const auto& [fname, f] : kFuncs) {
        if (name == fname) {
          if (!accept('(')) fail("'(' after " + name);
          const int arg = expr();
          if (!accept(')')) fail("')'");
          n.kind = NodeKind::Call;
          n.func = f;
          n.lhs = arg;
          n.span = {start, pos_};
          return push(n);
        }
      }
      throw UnknownIdentifier(start, name);
    }
    if (accept('(')) {
      const int inner = expr();
      if (!accept(')')) fail("')'");
      return inner;
    }
    fail("number, variable, function or '('");
  }

  int number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mant = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mant += digits();
    }
    if (mant == 0) fail("digits");
    // Exponent only if a digit follows, so "2*e" style constants stay usable.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    ExprNode n;
    n.kind = NodeKind::Number;
    n.span = {start, pos_};
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, n.number);
    if (ec != std::errc() || ptr != last || !std::isfinite(n.number)) {
      pos_ = start;
      fail("finite decimal number");
    }
    return push(n);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<ExprNode> nodes_;
};

[[noreturn]] void eval_fail(const ExprAst& ast, const ExprNode& node, const std::string& what) {
  const auto& s = ast.source();
  const std::string text =
      node.span.end <= s.size() ? s.substr(node.span.begin, node.span.end - node.span.begin) : "";
  throw EvaluationError(node.span, what + " in '" + text + "' at offset " +
                                       std::to_string(node.span.begin));
}

double eval_node(const ExprAst& ast, const ExprNode& n, const double* v, double x, double y) {
  switch (n.kind) {
    case NodeKind::Number:
      return n.number;
    case NodeKind::VarX:
      return x;
    case NodeKind::VarY:
      return y;
    case NodeKind::Neg:
      return -v[n.lhs];
    case NodeKind::Add:
      return v[n.lhs] + v[n.rhs];
    case NodeKind::Sub:
      return v[n.lhs] - v[n.rhs];
    case NodeKind::Mul:
      return v[n.lhs] * v[n.rhs];
    case NodeKind::Div:
      if (v[n.rhs] == 0.0) eval_fail(ast, n, "division by zero");
      return v[n.lhs] / v[n.rhs];
    case NodeKind::Pow: {
      const double b = v[n.lhs];
      const double p = v[n.rhs];
      if (b == 0.0 && p < 0.0) eval_fail(ast, n, "zero raised to a negative power");
      if (b < 0.0 && p != std::trunc(p)) eval_fail(ast, n, "negative base with non-integer exponent");
      return std::pow(b, p);
    }
    case NodeKind::Call: {
      const double a = v[n.lhs];
      switch (n.func) {
        case Func::Sin:
          return std::sin(a);
        case Func::Cos:
          return std::cos(a);
        case Func::Exp:
          return std::exp(a);
        case Func::Log:
          if (!(a > 0.0)) eval_fail(ast, n, "log of a nonpositive argument");
          return std::log(a);
        case Func::Sqrt:
          if (a < 0.0) eval_fail(ast, n, "sqrt of a negative argument");
          return std::sqrt(a);
        case Func::Abs:
          return std::fabs(a);
      }
    }
  }
  return 0.0;
}

void print_node(const ExprAst& ast, int i, std::ostringstream& os) {
  const ExprNode& n = ast.node(i);
  auto bin = [&](const char* op) {
    os << '(';
    print_node(ast, n.lhs, os);
    os << ' ' << op << ' ';
    print_node(ast, n.rhs, os);
    os << ')';
  };
  switch (n.kind) {
    case NodeKind::Number: {
      std::array<char, 32> buf{};
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), n.number);
      os << '(' << std::string_view(buf.data(), static_cast<std::size_t>(ptr - buf.data())) << ')';
      break;
    }
    case NodeKind::VarX:
      os << 'x';
      break;
    case NodeKind::VarY:
      os << 'y';
      break;
    case NodeKind::Neg:
      os << "(-";
      print_node(ast, n.lhs, os);
      os << ')';
      break;
    case NodeKind::Add:
      bin("+");
      break;
    case NodeKind::Sub:
      bin("-");
      break;
    case NodeKind::Mul:
      bin("*");
      break;
    case NodeKind::Div:
      bin("/");
      break;
    case NodeKind::Pow:
      bin("^");
      break;
    case NodeKind::Call:
      os << func_name(n.func) << '(';
      print_node(ast, n.lhs, os);
      os << ')';
      break;
  }
}

double sample_growth_constant(const Fn2& f, Growth g) {
  double sup = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double x = i;
    for (int j = 0; j <= 100; ++j) {
      const double y = j;
      const double w = 1.0 / ((1.0 + std::pow(x, g.n1)) * (1.0 + std::pow(y, g.n2)));
      const double v = std::fabs(f(x, y)) * w;
      if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
      sup = std::max(sup, v);
    }
  }
  return sup;
}

}  // namespace

ExprAst parse(std::string_view src) { return Parser(src).run(); }

double evaluate(const ExprAst& ast, double x, double y) {
  const auto& nodes = ast.nodes();
  constexpr std::size_t kStack = 64;
  std::array<double, kStack> small{};
  std::vector<double> big;
  double* v = small.data();
  if (nodes.size() > kStack) {
    big.resize(nodes.size());
    v = big.data();
  }
  // Children precede parents, so one forward sweep evaluates the tree.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    v[i] = eval_node(ast, nodes[i], v, x, y);
    if (!std::isfinite(v[i])) eval_fail(ast, nodes[i], "non-finite result");
  }
  return v[ast.root()];
}

std::string pretty_print(const ExprAst& ast) {
  std::ostringstream os;
  print_node(ast, ast.root(), os);
  return os.str();
}

const char* func_name(Func f) noexcept {
  switch (f) {
    case Func::Sin:
      return "sin";
    case Func::Cos:
      return "cos";
    case Func::Exp:
      return "exp";
    case Func::Log:
      return "log";
    case Func::Sqrt:
      return "sqrt";
    case Func::Abs:
      return "abs";
  }
  return "?";
}

BivariateFn::BivariateFn(std::string label, Fn2 eval, std::optional<Growth> growth,
                         std::optional<Partials> partials,
                         std::optional<double> growth_constant)
    : label_(std::move(label)),
      eval_(std::move(eval)),
      growth_(growth),
      partials_(std::move(partials)) {
  if (growth_) {
    if (growth_->n1 < 0 || growth_->n2 < 0) {
      throw InvalidParameter("growth exponents must be nonnegative");
    }
    growth_constant_ = growth_constant ? *growth_constant : sample_growth_constant(eval_, *growth_);
  }
}

BivariateFn from_expression(std::string_view src) {
  auto ast = std::make_shared<const ExprAst>(parse(src));
  return BivariateFn(std::string(src), [ast](double x, double y) { return evaluate(*ast, x, y); });
}

BivariateFn builtin(std::string_view name) {
  using std::exp;
  using std::pow;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (name == "xy") {
    return BivariateFn(
        "x*y", [](double x, double y) { return x * y; }, Growth{1, 1},
        Partials{[](double, double y) { return y; }, [](double x, double) { return x; },
                 [](double, double) { return 0.0; }, [](double, double) { return 0.0; }});
  }
  if (name == "t2-poly") {
    return BivariateFn(
        "x^3*y + 6*y^2 + x^2",
        [](double x, double y) { return x * x * x * y + 6.0 * y * y + x * x; }, Growth{3, 2},
        Partials{[](double x, double y) { return 3.0 * x * x * y + 2.0 * x; },
                 [](double x, double y) { return x * x * x + 12.0 * y; },
                 [](double x, double y) { return 6.0 * x * y + 2.0; },
                 [](double, double) { return 12.0; }});
  }
  if (name == "fig5") {
    // x^4 y (x-1)^4 sin(2 pi y)
    return BivariateFn(
        "x^4*y*(x-1)^4*sin(2*pi*y)",
        [](double x, double y) { return pow(x, 4) * y * pow(x - 1.0, 4) * std::sin(kTwoPi * y); },
        Growth{8, 1},
        Partials{
            [](double x, double y) {
              const double d = 4.0 * pow(x, 3) * pow(x - 1.0, 4) + 4.0 * pow(x, 4) * pow(x - 1.0, 3);
              return d * y * std::sin(kTwoPi * y);
            },
            [](double x, double y) {
              return pow(x, 4) * pow(x - 1.0, 4) *
                     (std::sin(kTwoPi * y) + kTwoPi * y * std::cos(kTwoPi * y));
            },
            [](double x, double y) {
              const double d2 = 12.0 * x * x * pow(x - 1.0, 4) + 32.0 * pow(x, 3) * pow(x - 1.0, 3) +
                                12.0 * pow(x, 4) * pow(x - 1.0, 2);
              return d2 * y * std::sin(kTwoPi * y);
            },
            [](double x, double y) {
              return pow(x, 4) * pow(x - 1.0, 4) *
                     (2.0 * kTwoPi * std::cos(kTwoPi * y) -
                      kTwoPi * kTwoPi * y * std::sin(kTwoPi * y));
            }});
  }
  if (name == "fig7") {
    // Not in any C_{N1,N2}: exponential growth in x.
    return BivariateFn(
        "y^2*exp(2*x)", [](double x, double y) { return y * y * exp(2.0 * x); }, std::nullopt,
        Partials{[](double x, double y) { return 2.0 * y * y * exp(2.0 * x); },
                 [](double x, double y) { return 2.0 * y * exp(2.0 * x); },
                 [](double x, double y) { return 4.0 * y * y * exp(2.0 * x); },
                 [](double x, double) { return 2.0 * exp(2.0 * x); }});
  }
  if (name == "fig6") {
    return BivariateFn(
        "x^2*exp(x+y)", [](double x, double y) { return x * x * exp(x + y); }, std::nullopt,
        Partials{[](double x, double y) { return (2.0 * x + x * x) * exp(x + y); },
                 [](double x, double y) { return x * x * exp(x + y); },
                 [](double x, double y) { return (2.0 + 4.0 * x + x * x) * exp(x + y); },
                 [](double x, double y) { return x * x * exp(x + y); }});
  }
  throw UnknownBuiltin("unknown builtin '" + std::string(name) +
                       "' (expected xy, t2-poly, fig5, fig6, fig7)");
}

std::vector<std::string> builtin_names() { return {"xy", "t2-poly", "fig5", "fig6", "fig7"}; }

BivariateFn function_from_spec(std::string_view spec) {
  constexpr std::string_view kPrefix = "builtin:";
  if (spec.substr(0, kPrefix.size()) == kPrefix) {
    return builtin(spec.substr(kPrefix.size()));
  }
  return from_expression(spec);
}

Fn1 univariate_from_expression(std::string_view src) {
  auto ast = std::make_shared<const ExprAst>(parse(src));
  for (const auto& n : ast->nodes()) {
    if (n.kind == NodeKind::VarY) {
      throw InvalidParameter("univariate expression may only use x");
    }
  }
  return [ast](double t) { return evaluate(*ast, t, 0.0); };
}

}  // namespace bisz
