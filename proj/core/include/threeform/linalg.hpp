#pragma once

#include "threeform/scalar.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace threeform {

/// Singular values below this fraction of the largest one count as zero.
inline constexpr double kRankTolerance = 1e-9;

template <class S>
using Vec6 = std::array<S, 6>;

template <class S>
Vec6<S> zero_vec() {
  Vec6<S> v;
  v.fill(S(0));
  return v;
}

template <class S>
Vec6<S> unit_vec(int i) {
  Vec6<S> v = zero_vec<S>();
  v[i] = S(1);
  return v;
}

/// Dense row-major matrix over a ring or field scalar.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const S& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& s) { return a *= s; }
  friend Matrix operator*(const S& s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in product");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::vector<S> column(std::size_t j) const {
    std::vector<S> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  template <class F>
  auto map(F f) const {
    using T = decltype(f(std::declval<const S&>()));
    Matrix<T> r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
    return r;
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <class S>
Vec6<S> apply(const Matrix<S>& m, const Vec6<S>& v) {
  Vec6<S> r = zero_vec<S>();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) r[i] += m(i, j) * v[j];
  return r;
}

template <class S>
double max_abs(const Matrix<S>& m) {
  double r = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r = std::max(r, scalar_traits<S>::magnitude(m(i, j)));
  return r;
}

/// Gaussian elimination with partial pivoting on |value|; works over any
/// field scalar, including jets whose value parts are invertible.
template <class S>
S determinant(Matrix<S> a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  S det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    double best = scalar_traits<S>::magnitude(a(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      double m = scalar_traits<S>::magnitude(a(r, c));
      if (is_exact_v<S> ? (best == 0 && m != 0) : m > best) {
        best = m;
        piv = r;
      }
    }
    if (best == 0 && scalar_traits<S>::is_zero(a(piv, c))) return S(0);
    if (best == 0) throw std::domain_error("determinant: pivot with vanishing value");
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    det *= a(c, c);
    S inv = S(1) / a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (scalar_traits<S>::is_zero(a(r, c))) continue;
      S f = a(r, c) * inv;
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

/// Solve a x = b for square invertible a. Throws on a singular pivot.
template <class S>
std::vector<S> solve(Matrix<S> a, std::vector<S> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve: shape mismatch");
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    double best = scalar_traits<S>::magnitude(a(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      double m = scalar_traits<S>::magnitude(a(r, c));
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (best == 0) throw std::domain_error("solve: singular matrix");
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      std::swap(b[c], b[piv]);
    }
    S inv = S(1) / a(c, c);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      S f = a(r, c) * inv;
      if (scalar_traits<S>::is_zero(f)) continue;
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] = b[i] / a(i, i);
  return b;
}

template <class S>
Matrix<S> inverse(const Matrix<S>& a) {
  const std::size_t n = a.rows();
  Matrix<S> inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<S> e(n, S(0));
    e[j] = S(1);
    auto col = solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

/// Basis of the null space {x : a x = 0}. Exact scalars use reduced row
/// echelon form; doubles use an SVD with the relative rank tolerance.
template <class S>
std::vector<std::vector<S>> nullspace(const Matrix<S>& a, double rel_tol = kRankTolerance);

template <class S>
std::size_t rank(const Matrix<S>& a, double rel_tol = kRankTolerance) {
  return a.cols() - nullspace(a, rel_tol).size();
}

/// Singular values (descending) of a double matrix.
std::vector<double> singular_values(const Matrix<double>& a);

/// Exact null space over a field with exact zero test.
template <class S>
std::vector<std::vector<S>> exact_nullspace(Matrix<S> a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (!scalar_traits<S>::is_zero(a(i, c))) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(piv, j));
    S inv = S(1) / a(r, c);
    for (std::size_t j = 0; j < cols; ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || scalar_traits<S>::is_zero(a(i, c))) continue;
      S f = a(i, c);
      for (std::size_t j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<S>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<S> x(cols, S(0));
    x[free] = S(1);
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) x[pivot_cols[k]] = -a(k, free);
    basis.push_back(std::move(x));
  }
  return basis;
}

template <>
std::vector<std::vector<double>> nullspace<double>(const Matrix<double>& a, double rel_tol);

template <class S>
std::vector<std::vector<S>> nullspace(const Matrix<S>& a, double) {
  static_assert(is_exact_v<S>, "numeric null spaces are only provided for double");
  return exact_nullspace(a);
}

/// Stack vectors as the rows of a matrix.
template <class S>
Matrix<S> rows_matrix(const std::vector<std::vector<S>>& vs, std::size_t cols) {
  Matrix<S> m(vs.size(), cols);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = vs[i][j];
  return m;
}

/// Dimension of the span of a set of vectors.
template <class S>
std::size_t span_dim(const std::vector<std::vector<S>>& vs, std::size_t cols,
                     double rel_tol = kRankTolerance) {
  if (vs.empty()) return 0;
  return rank(rows_matrix(vs, cols).transpose(), rel_tol);
}

/// Whether two spans coincide.
template <class S>
bool same_span(const std::vector<std::vector<S>>& a, const std::vector<std::vector<S>>& b,
               std::size_t cols, double rel_tol = kRankTolerance) {
  std::size_t da = span_dim(a, cols, rel_tol), db = span_dim(b, cols, rel_tol);
  if (da != db) return false;
  auto both = a;
  both.insert(both.end(), b.begin(), b.end());
  return span_dim(both, cols, rel_tol) == da;
}

/// Inertia (zeros, positives, negatives) of a symmetric matrix.
struct Signature {
  int zeros = 0;
  int positives = 0;
  int negatives = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Exact inertia by symmetric Gaussian elimination (congruence). When the
/// remaining diagonal vanishes, an off-diagonal pivot a_ij is moved onto the
/// diagonal by adding row/column j to row/column i.
template <class S>
Signature exact_signature(Matrix<S> a) {
  const std::size_t n = a.rows();
  Signature sig;
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t piv = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && !scalar_traits<S>::is_zero(a(i, i))) {
        piv = i;
        break;
      }
    if (piv == n) {
      std::size_t pi = n, pj = n;
      for (std::size_t i = 0; i < n && pi == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (!done[i] && !done[j] && !scalar_traits<S>::is_zero(a(i, j))) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == n) break;
      // row_i += row_j, col_i += col_j
      for (std::size_t k = 0; k < n; ++k) a(pi, k) += a(pj, k);
      for (std::size_t k = 0; k < n; ++k) a(k, pi) += a(k, pj);
      if (scalar_traits<S>::is_zero(a(pi, pi))) {
        // a_ii + 2a_ij + a_jj with a_ii = a_jj = 0 is 2a_ij != 0; unreachable
        throw std::logic_error("exact_signature: failed to create a pivot");
      }
      piv = pi;
    }
    done[piv] = true;
    S p = a(piv, piv);
    if (scalar_traits<S>::sign(p) > 0)
      ++sig.positives;
    else
      ++sig.negatives;
    S inv = S(1) / p;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || scalar_traits<S>::is_zero(a(i, piv))) continue;
      S f = a(i, piv) * inv;
      for (std::size_t k = 0; k < n; ++k) a(i, k) -= f * a(piv, k);
      for (std::size_t k = 0; k < n; ++k) a(k, i) -= f * a(k, piv);
    }
  }
  int counted = sig.positives + sig.negatives;
  sig.zeros = static_cast<int>(n) - counted;
  return sig;
}

/// Numeric inertia from eigenvalue signs, zero below rel_tol times the
/// largest |eigenvalue|.
Signature numeric_signature(const Matrix<double>& a, double rel_tol = kRankTolerance);

template <class S>
Signature signature(const Matrix<S>& a, double rel_tol = kRankTolerance) {
  if constexpr (is_exact_v<S>)
    return exact_signature(a);
  else
    return numeric_signature(a, rel_tol);
}

}  // namespace threeform
