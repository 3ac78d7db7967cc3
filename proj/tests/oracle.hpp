#pragma once

// Brute-force reference used by the tests. A k-form is held as its full
// antisymmetric array of 6^k components and every product is an explicit sum
// over permutations, so nothing here shares code with the blade-mask
// implementation it checks.

#include "threeform/exterior.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace oracle {

using threeform::Form;
using threeform::Matrix;
using threeform::Rational;
using threeform::Vec6;

using Index = std::vector<int>;  // 0-based

// Sign of the permutation sorting p; 0 when an entry repeats.
inline int parity(const Index& p) {
  int s = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) s = -s;
    }
  return s;
}

inline long factorial(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// All k-tuples over {0..5} in odometer order.
inline std::vector<Index> tuples(int k) {
  std::vector<Index> out;
  Index t(k, 0);
  while (true) {
    out.push_back(t);
    int i = k - 1;
    while (i >= 0 && ++t[i] == 6) t[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

inline std::vector<Index> increasing(int k) {
  std::vector<Index> out;
  for (auto& t : tuples(k))
    if (std::is_sorted(t.begin(), t.end()) && std::adjacent_find(t.begin(), t.end()) == t.end()) out.push_back(t);
  return out;
}

struct Tensor {
  int rank = 0;
  std::vector<Rational> c;

  explicit Tensor(int k) : rank(k) {
    std::size_t n = 1;
    for (int i = 0; i < k; ++i) n *= 6;
    c.assign(n, Rational(0));
  }
  static std::size_t flat(const Index& idx) {
    std::size_t f = 0;
    for (int i : idx) f = f * 6 + static_cast<std::size_t>(i);
    return f;
  }
  const Rational& operator()(const Index& idx) const { return c[flat(idx)]; }
  Rational& operator()(const Index& idx) { return c[flat(idx)]; }

  // Fill every permutation of the increasing index I with sign·value.
  void set_antisymmetric(const Index& inc, const Rational& value) {
    Index p = inc;
    do {
      (*this)(p) = value * parity(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }
};

inline unsigned mask_of(const Index& inc) {
  unsigned m = 0;
  for (int i : inc) m |= 1u << i;
  return m;
}

inline Tensor from_form(const Form<Rational>& a) {
  Tensor t(a.grade());
  for (auto& inc : increasing(a.grade()))
    t.set_antisymmetric(inc, a.coeff(static_cast<threeform::Blade>(mask_of(inc))));
  return t;
}

inline Form<Rational> to_form(const Tensor& t) {
  Form<Rational> f(t.rank);
  for (auto& inc : increasing(t.rank)) f.coeff(static_cast<threeform::Blade>(mask_of(inc))) = t(inc);
  return f;
}

// (a∧b)_I = 1/(p!q!) Σ_σ sgn σ a_{σ(I)[:p]} b_{σ(I)[p:]}
inline Tensor wedge(const Tensor& a, const Tensor& b) {
  const int p = a.rank, q = b.rank, n = p + q;
  Tensor out(n);
  if (n > 6) return out;
  const Rational norm(1, factorial(p) * factorial(q));
  for (auto& inc : increasing(n)) {
    Rational s(0);
    Index perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      Index ia(p), ib(q);
      for (int i = 0; i < p; ++i) ia[i] = inc[perm[i]];
      for (int i = 0; i < q; ++i) ib[i] = inc[perm[p + i]];
      s += Rational(parity(perm)) * a(ia) * b(ib);
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.set_antisymmetric(inc, s * norm);
  }
  return out;
}

// (ι_v a)_J = Σ_j v^j a_{jJ}
inline Tensor interior(const Vec6<Rational>& v, const Tensor& a) {
  Tensor out(a.rank - 1);
  for (auto& j : tuples(a.rank - 1)) {
    Rational s(0);
    Index full(1 + j.size());
    std::copy(j.begin(), j.end(), full.begin() + 1);
    for (int i = 0; i < 6; ++i) {
      full[0] = i;
      s += v[i] * a(full);
    }
    out(j) = s;
  }
  return out;
}

// v with ι_v e^{123456} = a: a_J = v^i ε_{iJ} for J the complement of i.
inline Vec6<Rational> five_to_vector(const Tensor& a) {
  Vec6<Rational> v;
  for (int i = 0; i < 6; ++i) {
    Index full{i};
    Index j;
    for (int k = 0; k < 6; ++k)
      if (k != i) j.push_back(k);
    full.insert(full.end(), j.begin(), j.end());
    v[i] = a(j) / Rational(parity(full));
  }
  return v;
}

inline Vec6<Rational> unit(int i) {
  Vec6<Rational> v;
  v.fill(Rational(0));
  v[i] = 1;
  return v;
}

// K(φ)v = −(the vector of ι_vφ∧φ); returned as the matrix with K(e_j) in column j.
inline Matrix<Rational> K(const Tensor& phi) {
  Matrix<Rational> k(6, 6);
  for (int j = 0; j < 6; ++j) {
    Vec6<Rational> col = five_to_vector(wedge(interior(unit(j), phi), phi));
    for (int i = 0; i < 6; ++i) k(i, j) = -col[i];
  }
  return k;
}

// F_abc = −2 φ(K e_a, e_b, e_c)
inline Tensor F(const Tensor& phi) {
  Matrix<Rational> k = K(phi);
  Tensor out(3);
  for (auto& t : tuples(3)) {
    Rational s(0);
    for (int i = 0; i < 6; ++i) s += k(i, t[0]) * phi({i, t[1], t[2]});
    out(t) = Rational(-2) * s;
  }
  return out;
}

inline Rational Q(const Tensor& phi) { return -wedge(phi, F(phi))({0, 1, 2, 3, 4, 5}); }

// (m*a)_I = Σ_J a_J Π m_{J_k I_k}
inline Tensor pullback(const Matrix<Rational>& m, const Tensor& a) {
  Tensor out(a.rank);
  auto all = tuples(a.rank);
  for (auto& inc : increasing(a.rank)) {
    Rational s(0);
    for (auto& j : all) {
      if (a(j) == 0) continue;
      Rational term = a(j);
      for (int k = 0; k < a.rank; ++k) term *= m(j[k], inc[k]);
      s += term;
    }
    out.set_antisymmetric(inc, s);
  }
  return out;
}

inline Rational evaluate(const Tensor& a, const std::vector<Vec6<Rational>>& vs) {
  Rational s(0);
  for (auto& j : tuples(a.rank)) {
    if (a(j) == 0) continue;
    Rational term = a(j);
    for (int k = 0; k < a.rank; ++k) term *= vs[k][j[k]];
    s += term;
  }
  return s;
}

}  // namespace oracle
