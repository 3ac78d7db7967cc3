#include "threeform/expr.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace threeform {

struct Expression::Node {
  enum class Kind { Number, Variable, Add, Sub, Mul, Div, Neg, Pow, Sqrt, Cbrt };
  Kind kind;
  Rational number;
  int variable = -1;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(const std::string& s, const std::array<std::string, kDim>& names) : s_(s), names_(names) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+'))
        n = make(Kind::Add, n, term());
      else if (eat('-'))
        n = make(Kind::Sub, n, term());
      else
        return n;
    }
  }
  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*'))
        n = make(Kind::Mul, n, unary());
      else if (eat('/'))
        n = make(Kind::Div, n, unary());
      else
        return n;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Kind::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Kind::Pow, base, unary());
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }
  NodePtr number() {
    std::string digits;
    int frac_digits = 0;
    bool dot = false;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      if (s_[pos_] == '.') {
        if (dot) fail("malformed number");
        dot = true;
      } else {
        digits += s_[pos_];
        if (dot) ++frac_digits;
      }
      ++pos_;
    }
    if (digits.empty()) fail("malformed number");
    int exp10 = -frac_digits;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      int sign = 1;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) sign = s_[pos_++] == '-' ? -1 : 1;
      std::string e;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) e += s_[pos_++];
      if (e.empty()) {
        pos_ = save;
      } else {
        exp10 += sign * std::stoi(e);
      }
    }
    Rational v{Integer(digits)};
    Rational ten(10);
    for (int i = 0; i < std::abs(exp10); ++i) v = exp10 > 0 ? v * ten : v / ten;
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Number;
    n->number = v;
    return n;
  }
  NodePtr name() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string id = s_.substr(start, pos_ - start);
    if (id == "sqrt" || id == "cbrt" || id == "pow") {
      if (!eat('(')) fail("expected '(' after " + id);
      NodePtr a = expr();
      NodePtr b;
      if (id == "pow") {
        if (!eat(',')) fail("pow takes two arguments");
        b = expr();
      }
      if (!eat(')')) fail("missing ')' after arguments of " + id);
      if (id == "sqrt") return make(Kind::Sqrt, a);
      if (id == "cbrt") return make(Kind::Cbrt, a);
      return make(Kind::Pow, a, b);
    }
    for (int i = 0; i < kDim; ++i)
      if (id == names_[i]) {
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Variable;
        n->variable = i;
        return n;
      }
    fail("unknown identifier '" + id + "'");
  }

  const std::string& s_;
  const std::array<std::string, kDim>& names_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, const std::array<double, kDim>& p) {
  switch (n.kind) {
    case Kind::Number: return to_double(n.number);
    case Kind::Variable: return p[n.variable];
    case Kind::Add: return eval(*n.a, p) + eval(*n.b, p);
    case Kind::Sub: return eval(*n.a, p) - eval(*n.b, p);
    case Kind::Mul: return eval(*n.a, p) * eval(*n.b, p);
    case Kind::Div: return eval(*n.a, p) / eval(*n.b, p);
    case Kind::Neg: return -eval(*n.a, p);
    case Kind::Pow: return std::pow(eval(*n.a, p), eval(*n.b, p));
    case Kind::Sqrt: return std::sqrt(eval(*n.a, p));
    case Kind::Cbrt: return std::cbrt(eval(*n.a, p));
  }
  return 0;
}

std::optional<Polynomial> to_poly(const Expression::Node& n) {
  switch (n.kind) {
    case Kind::Number: return Polynomial(n.number);
    case Kind::Variable: return Polynomial::variable(n.variable);
    case Kind::Neg: {
      auto a = to_poly(*n.a);
      if (!a) return std::nullopt;
      return -*a;
    }
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      auto a = to_poly(*n.a), b = to_poly(*n.b);
      if (!a || !b) return std::nullopt;
      if (n.kind == Kind::Add) return *a + *b;
      if (n.kind == Kind::Sub) return *a - *b;
      if (n.kind == Kind::Mul) return *a * *b;
      if (!b->is_constant() || b->is_zero()) return std::nullopt;
      return *a / *b;
    }
    case Kind::Pow: {
      auto a = to_poly(*n.a), b = to_poly(*n.b);
      if (!a || !b || !b->is_constant()) return std::nullopt;
      Rational e = b->constant_term();
      if (boost::multiprecision::denominator(e) != 1 || e < 0 || e > 64) return std::nullopt;
      int k = static_cast<int>(boost::multiprecision::numerator(e).convert_to<long>());
      Polynomial r(1);
      for (int i = 0; i < k; ++i) r *= *a;
      return r;
    }
    case Kind::Sqrt:
    case Kind::Cbrt: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::array<std::string, kDim>& names) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text, names).parse();
  return e;
}

double Expression::evaluate(const std::array<double, kDim>& p) const { return eval(*root_, p); }

std::optional<Polynomial> Expression::as_polynomial() const { return to_poly(*root_); }

}  // namespace threeform
