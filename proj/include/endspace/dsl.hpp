#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "endspace/address.hpp"
#include "endspace/treespec.hpp"

namespace endspace {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Number, Ident, Call, List, Binary };

struct Arg {
  std::string name;  // empty for positional arguments
  ExprPtr value;
};

/// DSL syntax tree node. Source positions are 1-based.
struct Expr {
  ExprKind kind = ExprKind::Number;
  std::uint64_t number = 0;
  std::string name;  // identifier, call name, or operator
  std::vector<Arg> args;  // call arguments, list items, or binary operands
  std::size_t line = 1;
  std::size_t column = 1;

  std::string to_string() const;
  bool mentions(std::string_view var) const;
};

/// Parse one expression; throws ParseError with line and column.
ExprPtr parse_expr(std::string_view text);

using Env = std::map<std::string, std::uint64_t, std::less<>>;

Ordinal eval_ordinal(const Expr& e, const Env& env = {});
SpecPtr eval_spec(const ExprPtr& e, const Env& env = {});
HighRay eval_ray(const Expr& e, const Env& env = {});

SpecPtr parse_spec(std::string_view text);
HighRay parse_ray(std::string_view text);
/// Inverse of parse_ray for rays whose routes use child and scion steps.
std::string ray_to_dsl(const HighRay& r);
/// DSL for a route wrapped around the ray text `inner`.
std::string route_to_dsl(const std::vector<Token>& route, std::string inner);

/// Polynomial degree of `e` in `var`; -1 when not polynomial (exponents).
int degree_in(const Expr& e, std::string_view var);

/// A family n -> high-ray described by a DSL expression in the variable n.
class SequenceTemplate {
 public:
  explicit SequenceTemplate(ExprPtr e) : expr_(std::move(e)) {}
  static SequenceTemplate parse(std::string_view text) { return SequenceTemplate(parse_expr(text)); }

  HighRay at(std::uint64_t n) const;
  /// Every number depending on n does so affinely.
  bool affine() const;
  const Expr& expr() const { return *expr_; }
  std::string to_string() const { return expr_->to_string(); }

 private:
  ExprPtr expr_;
};

}  // namespace endspace
