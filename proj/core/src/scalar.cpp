#include "threeform/scalar.hpp"

#include <cctype>

namespace threeform {

namespace {

bool valid_integer(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

Integer int_sqrt_exact(const Integer& n, bool& ok) {
  if (n < 0) {
    ok = false;
    return 0;
  }
  Integer r = boost::multiprecision::sqrt(n);
  ok = (r * r == n);
  return r;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den))
    throw std::invalid_argument("not a rational literal: '" + text + "'");
  if (num[0] == '+') num.erase(0, 1);
  if (den[0] == '+') den.erase(0, 1);
  Integer n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  return Rational(n, d);
}

std::string format_rational(const Rational& q) {
  auto n = boost::multiprecision::numerator(q);
  auto d = boost::multiprecision::denominator(q);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

bool exact_sqrt(const Rational& q, Rational& root) {
  if (q < 0) return false;
  bool ok_n = false, ok_d = false;
  Integer n = int_sqrt_exact(boost::multiprecision::numerator(q), ok_n);
  Integer d = int_sqrt_exact(boost::multiprecision::denominator(q), ok_d);
  if (!ok_n || !ok_d) return false;
  root = Rational(n, d);
  return true;
}

bool exact_fourth_root(const Rational& q, Rational& root) {
  Rational s;
  return exact_sqrt(q, s) && exact_sqrt(s, root);
}

QuadSurd::QuadSurd(const Rational& a, const Rational& b, const Rational& d)
    : a_(a), b_(b), d_(d) {
  if (d_ <= 0) throw std::domain_error("QuadSurd radicand must be positive");
  normalize();
}

QuadSurd QuadSurd::sqrt_of(const Rational& s) {
  if (s < 0) throw std::domain_error("square root of a negative rational");
  if (s == 0) return QuadSurd();
  return QuadSurd(0, 1, s);
}

void QuadSurd::normalize() {
  if (b_ == 0) {
    d_ = 1;
    return;
  }
  // sqrt(p/q) = sqrt(p q) / q, then pull small square factors out of p q.
  Integer p = boost::multiprecision::numerator(d_);
  Integer q = boost::multiprecision::denominator(d_);
  Integer n = p * q;
  Rational scale(1, q);
  bool ok = false;
  Integer r = int_sqrt_exact(n, ok);
  if (ok) {
    a_ += b_ * scale * Rational(r);
    b_ = 0;
    d_ = 1;
    return;
  }
  for (Integer k = 2; k * k <= n && k < 2000; ++k) {
    Integer kk = k * k;
    while (n % kk == 0) {
      n /= kk;
      scale *= Rational(k);
    }
  }
  b_ *= scale;
  d_ = Rational(n);
}

void QuadSurd::join_radicand(const QuadSurd& o) {
  if (o.b_ == 0) return;
  if (b_ == 0) {
    d_ = o.d_;
    return;
  }
  if (d_ != o.d_)
    throw BackendMismatch("QuadSurd values over different radicands: " + format_rational(d_) +
                          " vs " + format_rational(o.d_));
}

QuadSurd& QuadSurd::operator+=(const QuadSurd& o) {
  join_radicand(o);
  a_ += o.a_;
  b_ += o.b_;
  if (b_ == 0) d_ = 1;
  return *this;
}

QuadSurd& QuadSurd::operator*=(const QuadSurd& o) {
  join_radicand(o);
  Rational na = a_ * o.a_ + b_ * o.b_ * d_;
  Rational nb = a_ * o.b_ + b_ * o.a_;
  a_ = na;
  b_ = nb;
  if (b_ == 0) d_ = 1;
  return *this;
}

QuadSurd QuadSurd::inverse() const {
  Rational norm = a_ * a_ - b_ * b_ * d_;
  if (norm == 0) throw std::domain_error("QuadSurd division by zero");
  QuadSurd r;
  r.a_ = a_ / norm;
  r.b_ = -b_ / norm;
  r.d_ = b_ == 0 ? Rational(1) : d_;
  return r;
}

QuadSurd& QuadSurd::operator/=(const QuadSurd& o) { return *this *= o.inverse(); }

bool operator==(const QuadSurd& x, const QuadSurd& y) {
  if (x.b_ == 0 && y.b_ == 0) return x.a_ == y.a_;
  if (x.b_ != 0 && y.b_ != 0 && x.d_ != y.d_)
    throw BackendMismatch("comparing QuadSurd values over different radicands");
  return x.a_ == y.a_ && x.b_ == y.b_;
}

int QuadSurd::sign() const {
  // sign of a + b sqrt d
  int sa = a_.sign(), sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  Rational lhs = a_ * a_, rhs = b_ * b_ * d_;
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sb;
}

double QuadSurd::to_double() const {
  return threeform::to_double(a_) + threeform::to_double(b_) * std::sqrt(threeform::to_double(d_));
}

std::string QuadSurd::str() const {
  if (b_ == 0) return format_rational(a_);
  std::string s = a_ == 0 ? "" : format_rational(a_) + (b_ > 0 ? "+" : "");
  return s + format_rational(b_) + "*sqrt(" + format_rational(d_) + ")";
}

}  // namespace threeform
