#ifndef HFGTFLOW_EXPR_HPP
#define HFGTFLOW_EXPR_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hfgtflow {

/// Arithmetic AST for stock-flow rate fields: + - * /, parentheses, names,
/// numeric literals. Deliberately excludes conditionals and lookups.
class Expr {
public:
  enum class Kind { Literal, Ref, Add, Sub, Mul, Div, Neg };
  using Ptr = std::shared_ptr<const Expr>;

  static Ptr literal(double value);
  static Ptr ref(std::string name);
  static Ptr add(Ptr a, Ptr b);
  static Ptr sub(Ptr a, Ptr b);
  static Ptr mul(Ptr a, Ptr b);
  static Ptr div(Ptr a, Ptr b);
  static Ptr neg(Ptr a);

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  const std::string &name() const { return name_; }
  const Ptr &lhs() const { return lhs_; }
  const Ptr &rhs() const { return rhs_; }

  /// Throws Error(DivisionByZero / NonfiniteValue) on bad arithmetic and
  /// Error(DanglingReference) on unresolved names.
  double eval(const std::function<double(const std::string &)> &resolve) const;

  void collect_refs(std::vector<std::string> &out) const;

  /// Canonical text form; parse(to_string()) is structurally identical.
  std::string to_string() const;

private:
  Kind kind_ = Kind::Literal;
  double value_ = 0.0;
  std::string name_;
  Ptr lhs_, rhs_;
};

/// Recursive-descent parse; throws Error(InvalidDocument) with a column
/// position on syntax errors.
Expr::Ptr parse_expr(const std::string &text);

bool expr_equal(const Expr::Ptr &a, const Expr::Ptr &b);

} // namespace hfgtflow

#endif
