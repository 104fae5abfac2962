#include "hfgtflow/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "hfgtflow/errors.hpp"

namespace hfgtflow {

Expr::Ptr Expr::literal(double v) {
  auto e = std::make_shared<Expr>();
  e->kind_ = Kind::Literal;
  e->value_ = v;
  return e;
}

Expr::Ptr Expr::ref(std::string n) {
  auto e = std::make_shared<Expr>();
  e->kind_ = Kind::Ref;
  e->name_ = std::move(n);
  return e;
}

Expr::Ptr Expr::add(Ptr a, Ptr b) {
  auto e = std::make_shared<Expr>();
  e->kind_ = Kind::Add;
  e->lhs_ = std::move(a);
  e->rhs_ = std::move(b);
  return e;
}

Expr::Ptr Expr::sub(Ptr a, Ptr b) {
  auto e = std::make_shared<Expr>();
  e->kind_ = Kind::Sub;
  e->lhs_ = std::move(a);
  e->rhs_ = std::move(b);
  return e;
}

Expr::Ptr Expr::mul(Ptr a, Ptr b) {
  auto e = std::make_shared<Expr>();
  e->kind_ = Kind::Mul;
  e->lhs_ = std::move(a);
  e->rhs_ = std::move(b);
  return e;
}

Expr::Ptr Expr::div(Ptr a, Ptr b) {
  auto e = std::make_shared<Expr>();
  e->kind_ = Kind::Div;
  e->lhs_ = std::move(a);
  e->rhs_ = std::move(b);
  return e;
}

Expr::Ptr Expr::neg(Ptr a) {
  auto e = std::make_shared<Expr>();
  e->kind_ = Kind::Neg;
  e->lhs_ = std::move(a);
  return e;
}

double Expr::eval(
    const std::function<double(const std::string &)> &resolve) const {
  switch (kind_) {
  case Kind::Literal:
    return value_;
  case Kind::Ref:
    return resolve(name_);
  case Kind::Add:
    return lhs_->eval(resolve) + rhs_->eval(resolve);
  case Kind::Sub:
    return lhs_->eval(resolve) - rhs_->eval(resolve);
  case Kind::Mul:
    return lhs_->eval(resolve) * rhs_->eval(resolve);
  case Kind::Div: {
    double d = rhs_->eval(resolve);
    if (d == 0.0)
      throw Error(errc::division_by_zero, "division by zero in expression");
    double r = lhs_->eval(resolve) / d;
    if (!std::isfinite(r))
      throw Error(errc::nonfinite_value, "non-finite expression value");
    return r;
  }
  case Kind::Neg:
    return -lhs_->eval(resolve);
  }
  throw Error(errc::invalid_document, "corrupt expression node");
}

void Expr::collect_refs(std::vector<std::string> &out) const {
  switch (kind_) {
  case Kind::Ref:
    out.push_back(name_);
    return;
  case Kind::Literal:
    return;
  default:
    if (lhs_)
      lhs_->collect_refs(out);
    if (rhs_)
      rhs_->collect_refs(out);
  }
}

std::string Expr::to_string() const {
  auto paren = [](const std::string &s) { return "(" + s + ")"; };
  switch (kind_) {
  case Kind::Literal: {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value_);
    (void)ec;
    return std::string(buf, ptr);
  }
  case Kind::Ref:
    return name_;
  case Kind::Add:
    return paren(lhs_->to_string() + " + " + rhs_->to_string());
  case Kind::Sub:
    return paren(lhs_->to_string() + " - " + rhs_->to_string());
  case Kind::Mul:
    return paren(lhs_->to_string() + " * " + rhs_->to_string());
  case Kind::Div:
    return paren(lhs_->to_string() + " / " + rhs_->to_string());
  case Kind::Neg:
    return paren("-" + lhs_->to_string());
  }
  return "?";
}

bool expr_equal(const Expr::Ptr &a, const Expr::Ptr &b) {
  if (!a || !b)
    return a == b;
  if (a->kind() != b->kind())
    return false;
  switch (a->kind()) {
  case Expr::Kind::Literal:
    return a->value() == b->value();
  case Expr::Kind::Ref:
    return a->name() == b->name();
  case Expr::Kind::Neg:
    return expr_equal(a->lhs(), b->lhs());
  default:
    return expr_equal(a->lhs(), b->lhs()) && expr_equal(a->rhs(), b->rhs());
  }
}

namespace {

class Parser {
public:
  explicit Parser(const std::string &text) : text_(text) {}

  Expr::Ptr parse() {
    Expr::Ptr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      fail("unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw Error(errc::invalid_document,
                "expression error at column " + std::to_string(pos_ + 1) +
                    ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr::Ptr parse_sum() {
    Expr::Ptr e = parse_product();
    for (;;) {
      if (accept('+'))
        e = Expr::add(e, parse_product());
      else if (accept('-'))
        e = Expr::sub(e, parse_product());
      else
        return e;
    }
  }

  Expr::Ptr parse_product() {
    Expr::Ptr e = parse_unary();
    for (;;) {
      if (accept('*'))
        e = Expr::mul(e, parse_unary());
      else if (accept('/'))
        e = Expr::div(e, parse_unary());
      else
        return e;
    }
  }

  Expr::Ptr parse_unary() {
    if (accept('-'))
      return Expr::neg(parse_unary());
    return parse_atom();
  }

  Expr::Ptr parse_atom() {
    if (accept('(')) {
      Expr::Ptr e = parse_sum();
      if (!accept(')'))
        fail("expected ')'");
      return e;
    }
    skip_ws();
    if (pos_ >= text_.size())
      fail("unexpected end of expression");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto [ptr, ec] =
          std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
      if (ec != std::errc())
        fail("bad numeric literal");
      pos_ = static_cast<std::size_t>(ptr - text_.data());
      return Expr::literal(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        ++pos_;
      return Expr::ref(text_.substr(start, pos_ - start));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string &text_;
  std::size_t pos_ = 0;
};

} // namespace

Expr::Ptr parse_expr(const std::string &text) { return Parser(text).parse(); }

} // namespace hfgtflow
