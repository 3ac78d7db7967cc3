#include "threeform/linalg.hpp"

#include <Eigen/Dense>

namespace threeform {

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

}  // namespace

std::vector<double> singular_values(const Matrix<double>& a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(a));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

template <>
std::vector<std::vector<double>> nullspace<double>(const Matrix<double>& a, double rel_tol) {
  const std::size_t cols = a.cols();
  std::vector<std::vector<double>> basis;
  if (a.rows() == 0) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<double> e(cols, 0.0);
      e[j] = 1.0;
      basis.push_back(e);
    }
    return basis;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(a), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (smax > 0 && s(i) > rel_tol * smax) ++r;
  const auto& v = svd.matrixV();
  for (std::size_t j = r; j < cols; ++j) {
    std::vector<double> x(cols);
    for (std::size_t i = 0; i < cols; ++i) x[i] = v(i, j);
    basis.push_back(std::move(x));
  }
  return basis;
}

Signature numeric_signature(const Matrix<double>& a, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a));
  const auto& ev = es.eigenvalues();
  double emax = ev.cwiseAbs().maxCoeff();
  Signature sig;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (emax == 0 || std::fabs(ev(i)) <= rel_tol * emax)
      ++sig.zeros;
    else if (ev(i) > 0)
      ++sig.positives;
    else
      ++sig.negatives;
  }
  return sig;
}

}  // namespace threeform
