#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bisz/error.hpp"

namespace bisz {

enum class NodeKind { Number, VarX, VarY, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs };

struct ExprNode {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;
  Func func = Func::Sin;
  int lhs = -1;  // operand of Neg / Call, left child of binary nodes
  int rhs = -1;
  SourceSpan span;
};

/// Immutable expression tree over the variables x and y. Nodes live in a flat
/// arena; children always precede their parent.
class ExprAst {
 public:
  ExprAst(std::string source, std::vector<ExprNode> nodes, int root)
      : source_(std::move(source)), nodes_(std::move(nodes)), root_(root) {}

  const std::string& source() const noexcept { return source_; }
  const std::vector<ExprNode>& nodes() const noexcept { return nodes_; }
  const ExprNode& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  int root() const noexcept { return root_; }

 private:
  std::string source_;
  std::vector<ExprNode> nodes_;
  int root_;
};

/// Grammar (whitespace insensitive):
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := ('-'|'+') unary | factor
///   factor := atom ('^' unary)?          right associative, binds tighter than '-'
///   atom   := number | x | y | pi | e | fn '(' expr ')' | '(' expr ')'
///   fn     := sin | cos | exp | log | sqrt | abs
/// Throws ParseError (with byte offset) or UnknownIdentifier.
ExprAst parse(std::string_view src);

/// Throws EvaluationError instead of producing NaN or infinity.
double evaluate(const ExprAst& ast, double x, double y);

/// Fully parenthesised rendering that reparses to an equivalent tree.
std::string pretty_print(const ExprAst& ast);

const char* func_name(Func f) noexcept;

/// Polynomial growth class C_{N1,N2}.
struct Growth {
  int n1 = 0;
  int n2 = 0;
};

using Fn2 = std::function<double(double, double)>;
using Fn1 = std::function<double(double)>;

struct Partials {
  Fn2 fx;
  Fn2 fy;
  Fn2 fxx;
  Fn2 fyy;
};

/// Evaluatable f(x, y) with optional growth-class metadata and exact partials.
class BivariateFn {
 public:
  BivariateFn(std::string label, Fn2 eval, std::optional<Growth> growth = std::nullopt,
              std::optional<Partials> partials = std::nullopt,
              std::optional<double> growth_constant = std::nullopt);

  double operator()(double x, double y) const { return eval_(x, y); }

  const std::string& label() const noexcept { return label_; }
  const std::optional<Growth>& growth() const noexcept { return growth_; }
  const std::optional<Partials>& partials() const noexcept { return partials_; }

  /// sup |f| w_{N1,N2}, either supplied or sampled on a 101x101 grid of [0,100]^2; 0 when no
  /// growth is declared. Infinite if the sample is unbounded.
  double growth_constant() const noexcept { return growth_constant_; }

 private:
  std::string label_;
  Fn2 eval_;
  std::optional<Growth> growth_;
  std::optional<Partials> partials_;
  double growth_constant_ = 0.0;
};

BivariateFn from_expression(std::string_view src);

/// Registry: "xy", "t2-poly", "fig5", "fig6", "fig7". Throws UnknownBuiltin.
BivariateFn builtin(std::string_view name);

std::vector<std::string> builtin_names();

/// "builtin:NAME" selects the registry, anything else is parsed.
BivariateFn function_from_spec(std::string_view spec);

/// Single-variable function of the same syntax; the variable is x.
Fn1 univariate_from_expression(std::string_view src);

}  // namespace bisz
