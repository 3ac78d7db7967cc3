#include "threeform/random.hpp"

#include <algorithm>

namespace threeform {

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("SplitMix64::below(0)");
  // reject the top partial block so every residue is equally likely
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t x;
  do x = (*this)();
  while (x >= limit);
  return x % n;
}

long SplitMix64::range(long lo, long hi) {
  if (hi < lo) throw std::invalid_argument("SplitMix64::range: empty range");
  return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

bool SplitMix64::chance(double p) { return static_cast<double>((*this)() >> 11) * 0x1.0p-53 < p; }

Rational random_rational(SplitMix64& rng, long num, long den) {
  return Rational(rng.range(-num, num), rng.range(1, den));
}

Rational random_nonzero_rational(SplitMix64& rng, long num, long den) {
  Rational r;
  do r = random_rational(rng, num, den);
  while (r == 0);
  return r;
}

Form<Rational> random_form(SplitMix64& rng, int grade, double density) {
  Form<Rational> f(grade);
  for (int r = 0; r < f.size(); ++r)
    if (rng.chance(density)) f[r] = random_nonzero_rational(rng);
  return f;
}

Vec6<Rational> random_vector(SplitMix64& rng) {
  Vec6<Rational> v;
  for (auto& x : v) x = random_rational(rng);
  return v;
}

Matrix<Rational> random_gl(SplitMix64& rng) {
  for (;;) {
    Matrix<Rational> m(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) m(i, j) = Rational(rng.range(-2, 2));
    if (determinant(m) != 0) return m;
  }
}

Matrix<Rational> random_symplectic(SplitMix64& rng, const SymplecticFrame<Rational>& frame, int factors) {
  const Matrix<Rational>& w = frame.matrix();
  Matrix<Rational> m = Matrix<Rational>::identity(6);
  if (frame.omega() == SymplecticFrame<Rational>::standard_omega()) {
    // permute the Darboux pairs (e1,e2), (e3,e4), (e5,e6)
    std::array<int, 3> perm{0, 1, 2};
    for (int i = 2; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    Matrix<Rational> p(6, 6);
    for (int k = 0; k < 3; ++k) {
      p(2 * perm[k], 2 * k) = 1;
      p(2 * perm[k] + 1, 2 * k + 1) = 1;
    }
    m = p;
  }
  for (int f = 0; f < factors; ++f) {
    Vec6<Rational> u;
    for (auto& x : u) x = Rational(rng.range(-2, 2));
    Rational c = random_nonzero_rational(rng, 2, 2);
    // T(v) = v + c ω(u,v) u, so T = I + c u (Ωᵀu)ᵀ
    Vec6<Rational> wu = zero_vec<Rational>();
    for (int j = 0; j < 6; ++j)
      for (int i = 0; i < 6; ++i) wu[j] += u[i] * w(i, j);
    Matrix<Rational> t = Matrix<Rational>::identity(6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) t(i, j) += c * u[i] * wu[j];
    m = t * m;
  }
  return m;
}

template <class S>
Form<S> primitive_part(const SymplecticFrame<S>& frame, const Form<S>& phi) {
  require_three_form(phi);
  const Form<S>& w = frame.omega();
  Form<S> w2 = wedge(w, w);
  // L(β) = ω∧ω∧β as a 6×6 map Λ¹ → Λ⁵
  Matrix<S> l(6, 6);
  for (int j = 0; j < 6; ++j) {
    Form<S> img = wedge(w2, Form<S>::basis({j + 1}));
    for (int i = 0; i < 6; ++i) l(i, j) = img[i];
  }
  Form<S> target = wedge(w, phi);
  std::vector<S> rhs(6);
  for (int i = 0; i < 6; ++i) rhs[i] = target[i];
  std::vector<S> beta = solve(l, rhs);
  Form<S> b(1);
  for (int i = 0; i < 6; ++i) b[i] = beta[i];
  return phi - wedge(w, b);
}

template Form<Rational> primitive_part(const SymplecticFrame<Rational>&, const Form<Rational>&);
template Form<double> primitive_part(const SymplecticFrame<double>&, const Form<double>&);

Form<Rational> random_primitive(SplitMix64& rng, const SymplecticFrame<Rational>& frame, double density) {
  return primitive_part(frame, random_form(rng, 3, density));
}

Polynomial random_polynomial(SplitMix64& rng, int max_degree, int terms) {
  Polynomial p;
  for (int t = 0; t < terms; ++t) {
    Monomial m{};
    int deg = static_cast<int>(rng.range(0, max_degree));
    for (int k = 0; k < deg; ++k) ++m[rng.below(kDim)];
    p += Polynomial::monomial(m, random_nonzero_rational(rng, 3, 2));
  }
  return p;
}

FormField random_form_field(SplitMix64& rng, int grade, int max_degree, int terms, double density) {
  FormField f(grade);
  for (int r = 0; r < f.size(); ++r)
    if (rng.chance(density)) f[r] = CoefField(random_polynomial(rng, max_degree, terms));
  return f;
}

VectorField random_vector_field(SplitMix64& rng, int max_degree, int terms) {
  VectorField v;
  for (auto& c : v) c = CoefField(random_polynomial(rng, max_degree, terms));
  return v;
}

FormField random_primitive_field(SplitMix64& rng, const Form<Rational>& omega, int max_degree, int terms,
                                 double density) {
  FormField phi = random_form_field(rng, 3, max_degree, terms, density);
  // primitive_part is linear in φ, so apply it to each coefficient's unit form
  SymplecticFrame<Rational> frame(omega);
  FormField out(3);
  for (int r = 0; r < phi.size(); ++r) {
    if (phi[r].is_zero()) continue;
    Form<Rational> unit(3);
    unit[r] = 1;
    Form<Rational> proj = primitive_part(frame, unit);
    for (int s = 0; s < proj.size(); ++s)
      if (proj[s] != 0) out[s] += phi[r] * CoefField(proj[s]);
  }
  return out;
}

ExactPoint random_point(SplitMix64& rng, long num, long den) {
  ExactPoint p;
  for (auto& x : p) x = random_rational(rng, num, den);
  return p;
}

}  // namespace threeform
