#pragma once

#include "threeform/field.hpp"

#include <cstdint>
#include <limits>

namespace threeform {

/// SplitMix64 (Steele, Lea, Flood 2014). The output sequence for a seed is
/// fixed by the algorithm, so seeded suites reproduce on every platform.
/// Bounded draws use rejection sampling, never the std distributions, whose
/// output is implementation-defined.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  long range(long lo, long hi);
  bool chance(double p);
  /// Independent child stream, for per-sample generators.
  SplitMix64 split() { return SplitMix64((*this)()); }

 private:
  std::uint64_t state_;
};

/// Small rational p/q with |p| ≤ num, 1 ≤ q ≤ den.
Rational random_rational(SplitMix64& rng, long num = 5, long den = 3);
/// Small nonzero rational.
Rational random_nonzero_rational(SplitMix64& rng, long num = 5, long den = 3);

/// Each coefficient is nonzero with probability `density`.
Form<Rational> random_form(SplitMix64& rng, int grade, double density = 0.5);
Vec6<Rational> random_vector(SplitMix64& rng);

/// Invertible matrix with small integer entries.
Matrix<Rational> random_gl(SplitMix64& rng);

/// Product of `factors` symplectic transvections v ↦ v + c·ω(u,v)·u for ω,
/// together with a random block permutation of the Darboux pairs when ω is
/// the standard form. Exact.
Matrix<Rational> random_symplectic(SplitMix64& rng, const SymplecticFrame<Rational>& frame, int factors = 4);

/// Primitive part φ − ω∧β, with β fixed by ω∧ω∧β = ω∧φ.
template <class S>
Form<S> primitive_part(const SymplecticFrame<S>& frame, const Form<S>& phi);

Form<Rational> random_primitive(SplitMix64& rng, const SymplecticFrame<Rational>& frame, double density = 0.5);

Polynomial random_polynomial(SplitMix64& rng, int max_degree, int terms);
FormField random_form_field(SplitMix64& rng, int grade, int max_degree, int terms, double density = 0.5);
VectorField random_vector_field(SplitMix64& rng, int max_degree, int terms);
/// Random polynomial 3-form field made primitive for a constant ω.
FormField random_primitive_field(SplitMix64& rng, const Form<Rational>& omega, int max_degree, int terms,
                                 double density = 0.5);

ExactPoint random_point(SplitMix64& rng, long num = 7, long den = 4);

}  // namespace threeform
