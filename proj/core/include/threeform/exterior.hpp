#pragma once

#include "threeform/linalg.hpp"
#include "threeform/scalar.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace threeform {

// A blade is a subset of {0..5} stored as a 6-bit mask; bit i stands for
// e^{i+1}.
using Blade = std::uint8_t;

inline constexpr Blade kVolumeBlade = 63;

constexpr int blade_grade(unsigned m) { return std::popcount(m); }

namespace detail {

// Lexicographic comparison of the sorted index tuples of two masks of equal
// grade.
constexpr bool lex_less(unsigned a, unsigned b) {
  while (a && b) {
    unsigned la = a & -a, lb = b & -b;
    if (la != lb) return la < lb;
    a ^= la;
    b ^= lb;
  }
  return false;
}

struct BladeTables {
  std::array<std::array<Blade, 20>, 7> masks{};
  std::array<int, 7> size{};
  std::array<int, 64> rank{};
};

constexpr BladeTables make_blade_tables() {
  BladeTables t{};
  for (unsigned m = 0; m < 64; ++m) {
    int g = blade_grade(m);
    t.masks[g][t.size[g]++] = static_cast<Blade>(m);
  }
  for (int g = 0; g <= 6; ++g) {
    auto& row = t.masks[g];
    for (int i = 1; i < t.size[g]; ++i)
      for (int j = i; j > 0 && lex_less(row[j], row[j - 1]); --j) std::swap(row[j], row[j - 1]);
    for (int i = 0; i < t.size[g]; ++i) t.rank[row[i]] = i;
  }
  return t;
}

inline constexpr BladeTables kBlades = make_blade_tables();

}  // namespace detail

constexpr int grade_size(int grade) { return detail::kBlades.size[grade]; }
constexpr Blade blade_at(int grade, int rank) { return detail::kBlades.masks[grade][rank]; }
constexpr int blade_rank(Blade m) { return detail::kBlades.rank[m]; }

/// Sign of e^a ∧ e^b for disjoint a, b: parity of pairs i in a, j in b with i > j.
constexpr int wedge_sign(unsigned a, unsigned b) {
  int c = 0;
  for (unsigned rest = b; rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    c += std::popcount(a >> (j + 1));
  }
  return (c & 1) ? -1 : 1;
}

/// Sign of ι_{e_i} e^m for i in m: one factor of −1 per index of m below i.
constexpr int interior_sign(unsigned m, int i) {
  return (std::popcount(m & ((1u << i) - 1)) & 1) ? -1 : 1;
}

/// 1-based sorted indices of a blade.
inline std::vector<int> blade_indices(Blade m) {
  std::vector<int> r;
  for (int i = 0; i < 6; ++i)
    if (m >> i & 1) r.push_back(i + 1);
  return r;
}

/// Blade and sign for a list of 1-based indices in any order; sign 0 when an
/// index repeats.
inline std::pair<Blade, int> blade_from_indices(const std::vector<int>& idx) {
  unsigned m = 0;
  int sign = 1;
  for (int i : idx) {
    if (i < 1 || i > 6) throw std::out_of_range("form index out of range 1..6: " + std::to_string(i));
    unsigned bit = 1u << (i - 1);
    if (m & bit) return {0, 0};
    if (std::popcount(m >> i) & 1) sign = -sign;
    m |= bit;
  }
  return {static_cast<Blade>(m), sign};
}

template <class S>
struct Term {
  Blade blade;
  S coeff;
};

/// Homogeneous element of Λ^k(ℝ⁶)*, dense over the C(6,k) blades of its grade
/// in lexicographic order. A wedge whose grade would exceed 6 yields the zero
/// 6-form with overflow() set.
template <class S>
class Form {
 public:
  Form() : Form(0) {}
  explicit Form(int grade) : grade_(check_grade(grade)), c_(grade_size(grade_), S(0)) {}

  static Form scalar(const S& s) {
    Form f(0);
    f.c_[0] = s;
    return f;
  }
  static Form overflowed() {
    Form f(6);
    f.overflow_ = true;
    return f;
  }
  /// coeff · e^{i1} ∧ … ∧ e^{ik} from 1-based indices in any order.
  static Form basis(const std::vector<int>& idx, const S& coeff = S(1)) {
    if (idx.size() > 6) throw std::invalid_argument("too many indices for a form on R^6");
    Form f(static_cast<int>(idx.size()));
    auto [m, sign] = blade_from_indices(idx);
    if (sign != 0) f.c_[blade_rank(m)] = sign > 0 ? coeff : S(-coeff);
    return f;
  }
  static Form basis(std::initializer_list<int> idx, const S& coeff = S(1)) {
    return basis(std::vector<int>(idx), coeff);
  }
  static Form from_blade(Blade m, const S& coeff = S(1)) {
    Form f(blade_grade(m));
    f.c_[blade_rank(m)] = coeff;
    return f;
  }

  int grade() const { return grade_; }
  bool overflow() const { return overflow_; }
  int size() const { return static_cast<int>(c_.size()); }

  const S& operator[](int rank) const { return c_[rank]; }
  S& operator[](int rank) { return c_[rank]; }
  const S& coeff(Blade m) const { return c_[rank_of(m)]; }
  S& coeff(Blade m) { return c_[rank_of(m)]; }
  Blade blade(int rank) const { return blade_at(grade_, rank); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const S& x) { return scalar_traits<S>::is_zero(x); });
  }

  /// Nonzero terms in lexicographic blade order.
  std::vector<Term<S>> terms() const {
    std::vector<Term<S>> out;
    for (int r = 0; r < size(); ++r)
      if (!scalar_traits<S>::is_zero(c_[r])) out.push_back({blade(r), c_[r]});
    return out;
  }

  Form operator-() const {
    Form r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  Form& operator+=(const Form& o) {
    check_same_grade(o);
    for (int r = 0; r < size(); ++r) c_[r] += o.c_[r];
    return *this;
  }
  Form& operator-=(const Form& o) {
    check_same_grade(o);
    for (int r = 0; r < size(); ++r) c_[r] -= o.c_[r];
    return *this;
  }
  Form& operator*=(const S& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, const S& s) { return a *= s; }
  friend Form operator*(const S& s, Form a) { return a *= s; }
  friend bool operator==(const Form& a, const Form& b) { return a.grade_ == b.grade_ && a.c_ == b.c_; }
  friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

  template <class F>
  auto map(F f) const {
    using T = decltype(f(std::declval<const S&>()));
    Form<T> r(grade_);
    for (int k = 0; k < size(); ++k) r[k] = f(c_[k]);
    return r;
  }

 private:
  static int check_grade(int g) {
    if (g < 0 || g > 6) throw std::invalid_argument("form grade must be in 0..6");
    return g;
  }
  int rank_of(Blade m) const {
    if (blade_grade(m) != grade_) throw std::invalid_argument("blade grade does not match form grade");
    return blade_rank(m);
  }
  void check_same_grade(const Form& o) const {
    if (o.grade_ != grade_) throw std::invalid_argument("adding forms of different grades");
  }

  int grade_ = 0;
  bool overflow_ = false;
  std::vector<S> c_;
};

template <class S>
Form<S> reference_volume() {
  return Form<S>::from_blade(kVolumeBlade);
}

template <class S>
Form<S> wedge(const Form<S>& a, const Form<S>& b) {
  if (a.grade() + b.grade() > 6) return Form<S>::overflowed();
  Form<S> r(a.grade() + b.grade());
  for (int i = 0; i < a.size(); ++i) {
    if (scalar_traits<S>::is_zero(a[i])) continue;
    Blade ma = a.blade(i);
    for (int j = 0; j < b.size(); ++j) {
      Blade mb = b.blade(j);
      if (ma & mb) continue;
      if (scalar_traits<S>::is_zero(b[j])) continue;
      S p = a[i] * b[j];
      if (wedge_sign(ma, mb) > 0)
        r.coeff(ma | mb) += p;
      else
        r.coeff(ma | mb) -= p;
    }
  }
  return r;
}

template <class S>
Form<S> wedge(const Form<S>& a, const Form<S>& b, const Form<S>& c) {
  return wedge(wedge(a, b), c);
}

template <class S>
Form<S> one_form(const Vec6<S>& covector) {
  Form<S> f(1);
  for (int i = 0; i < 6; ++i) f.coeff(static_cast<Blade>(1u << i)) = covector[i];
  return f;
}

template <class S>
Vec6<S> one_form_components(const Form<S>& f) {
  if (f.grade() != 1) throw std::invalid_argument("expected a 1-form");
  Vec6<S> v;
  for (int i = 0; i < 6; ++i) v[i] = f.coeff(static_cast<Blade>(1u << i));
  return v;
}

template <class S>
Form<S> interior(const Vec6<S>& v, const Form<S>& a) {
  if (a.grade() == 0) throw std::invalid_argument("interior product of a 0-form");
  Form<S> r(a.grade() - 1);
  for (int k = 0; k < a.size(); ++k) {
    if (scalar_traits<S>::is_zero(a[k])) continue;
    Blade m = a.blade(k);
    for (int i = 0; i < 6; ++i) {
      if (!(m >> i & 1) || scalar_traits<S>::is_zero(v[i])) continue;
      S p = v[i] * a[k];
      if (interior_sign(m, i) > 0)
        r.coeff(static_cast<Blade>(m ^ (1u << i))) += p;
      else
        r.coeff(static_cast<Blade>(m ^ (1u << i))) -= p;
    }
  }
  return r;
}

/// ι_{e_i} for a coordinate vector, without a dense vector.
template <class S>
Form<S> interior_basis(int i, const Form<S>& a) {
  if (a.grade() == 0) throw std::invalid_argument("interior product of a 0-form");
  Form<S> r(a.grade() - 1);
  for (int k = 0; k < a.size(); ++k) {
    Blade m = a.blade(k);
    if (!(m >> i & 1)) continue;
    if (interior_sign(m, i) > 0)
      r.coeff(static_cast<Blade>(m ^ (1u << i))) += a[k];
    else
      r.coeff(static_cast<Blade>(m ^ (1u << i))) -= a[k];
  }
  return r;
}

/// Linear map on V with its determinant cached.
template <class S>
class LinearMap {
 public:
  LinearMap() : LinearMap(Matrix<S>::identity(6)) {}
  explicit LinearMap(Matrix<S> m) : m_(std::move(m)) {
    if (m_.rows() != 6 || m_.cols() != 6) throw std::invalid_argument("LinearMap must be 6x6");
    det_ = determinant(m_);
  }
  const Matrix<S>& matrix() const { return m_; }
  const S& det() const { return det_; }
  Vec6<S> operator()(const Vec6<S>& v) const { return threeform::apply(m_, v); }
  friend LinearMap operator*(const LinearMap& a, const LinearMap& b) { return LinearMap(a.m_ * b.m_); }

 private:
  Matrix<S> m_;
  S det_;
};

/// (m*a)(v1..vk) = a(m v1, …, m vk); on covectors m*e^i = Σ_j m_ij e^j.
template <class S>
Form<S> pullback(const Matrix<S>& m, const Form<S>& a) {
  if (m.rows() != 6 || m.cols() != 6) throw std::invalid_argument("pullback needs a 6x6 matrix");
  std::array<Form<S>, 6> rows;
  for (int i = 0; i < 6; ++i) {
    Vec6<S> r;
    for (int j = 0; j < 6; ++j) r[j] = m(i, j);
    rows[i] = one_form(r);
  }
  Form<S> out(a.grade());
  for (int k = 0; k < a.size(); ++k) {
    if (scalar_traits<S>::is_zero(a[k])) continue;
    Form<S> t = Form<S>::scalar(a[k]);
    for (int i : blade_indices(a.blade(k))) t = wedge(t, rows[i - 1]);
    out += t;
  }
  return out;
}

template <class S>
Form<S> pullback(const LinearMap<S>& m, const Form<S>& a) {
  return pullback(m.matrix(), a);
}

/// The v with ι_v e^{123456} = a, for a 5-form a.
template <class S>
Vec6<S> five_to_vector(const Form<S>& a) {
  if (a.grade() != 5) throw std::invalid_argument("five_to_vector needs a 5-form");
  Vec6<S> v;
  for (int i = 0; i < 6; ++i) {
    const S& c = a.coeff(static_cast<Blade>(kVolumeBlade ^ (1u << i)));
    v[i] = (i % 2 == 0) ? c : S(-c);
  }
  return v;
}

/// Coefficient on e^{123456}.
template <class S>
const S& top_coeff(const Form<S>& a) {
  if (a.grade() != 6) throw std::invalid_argument("expected a 6-form");
  return a[0];
}

/// a(v1, …, vk).
template <class S>
S evaluate(const Form<S>& a, const std::vector<Vec6<S>>& vs) {
  if (static_cast<int>(vs.size()) != a.grade()) throw std::invalid_argument("evaluate: wrong number of vectors");
  Form<S> r = a;
  for (const auto& v : vs) r = interior(v, r);
  return r[0];
}

/// Basis of {v : ι_v a = 0}.
template <class S>
std::vector<Vec6<S>> kernel(const Form<S>& a, double rel_tol = kRankTolerance) {
  std::vector<Vec6<S>> out;
  if (a.grade() == 0) {
    // interior products of functions vanish
    for (int i = 0; i < 6; ++i) out.push_back(unit_vec<S>(i));
    return out;
  }
  // column i holds ι_{e_i} a
  int rows = grade_size(a.grade() - 1);
  Matrix<S> m(rows, 6);
  for (int i = 0; i < 6; ++i) {
    Form<S> c = interior_basis(i, a);
    for (int r = 0; r < rows; ++r) m(r, i) = c[r];
  }
  for (auto& x : nullspace(m, rel_tol)) {
    Vec6<S> v;
    std::copy(x.begin(), x.end(), v.begin());
    out.push_back(v);
  }
  return out;
}

template <class S>
struct Annihilator {
  std::vector<Vec6<S>> covectors;  // basis of Ann a ⊂ V*
  std::vector<Vec6<S>> perp;       // joint kernel of those covectors in V
};

template <class S>
Annihilator<S> annihilator(const Form<S>& a, double rel_tol = kRankTolerance) {
  Annihilator<S> out;
  if (a.grade() == 6 || a.overflow()) {
    // every covector wedges a top form to zero
    for (int i = 0; i < 6; ++i) out.covectors.push_back(unit_vec<S>(i));
    return out;
  }
  int rows = grade_size(a.grade() + 1);
  Matrix<S> m(rows, 6);
  for (int i = 0; i < 6; ++i) {
    Form<S> c = wedge(Form<S>::from_blade(static_cast<Blade>(1u << i)), a);
    for (int r = 0; r < rows; ++r) m(r, i) = c[r];
  }
  for (auto& x : nullspace(m, rel_tol)) {
    Vec6<S> v;
    std::copy(x.begin(), x.end(), v.begin());
    out.covectors.push_back(v);
  }
  Matrix<S> ann(out.covectors.size(), 6);
  for (std::size_t k = 0; k < out.covectors.size(); ++k)
    for (int j = 0; j < 6; ++j) ann(k, j) = out.covectors[k][j];
  if (out.covectors.empty()) {
    for (int i = 0; i < 6; ++i) out.perp.push_back(unit_vec<S>(i));
    return out;
  }
  for (auto& x : nullspace(ann, rel_tol)) {
    Vec6<S> v;
    std::copy(x.begin(), x.end(), v.begin());
    out.perp.push_back(v);
  }
  return out;
}

template <class S>
std::vector<std::vector<S>> as_rows(const std::vector<Vec6<S>>& vs) {
  std::vector<std::vector<S>> r;
  for (const auto& v : vs) r.emplace_back(v.begin(), v.end());
  return r;
}

/// Human-readable "3*e135 - e146" style rendering.
template <class S>
std::string to_string(const Form<S>& a) {
  auto ts = a.terms();
  if (ts.empty()) return "0";
  std::string out;
  for (const auto& t : ts) {
    std::string c;
    if constexpr (std::is_same_v<S, Rational>)
      c = format_rational(t.coeff);
    else if constexpr (std::is_same_v<S, QuadSurd>)
      c = t.coeff.str();
    else
      c = std::to_string(scalar_traits<S>::approx(t.coeff));
    std::string name = "e";
    for (int i : blade_indices(t.blade)) name += std::to_string(i);
    bool neg = !c.empty() && c[0] == '-';
    if (neg) c.erase(0, 1);
    if (out.empty())
      out = neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    out += (c == "1" ? "" : c + "*") + name;
  }
  return out;
}

}  // namespace threeform
