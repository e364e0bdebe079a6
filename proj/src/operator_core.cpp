#include "berezin/operator_core.hpp"

#include <cmath>

namespace berezin {

namespace detail {
void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}
}  // namespace detail

HermitianOperator::HermitianOperator(Eigen::MatrixXcd m) : mat_(std::move(m)) {
  detail::require(mat_.rows() == mat_.cols() && mat_.rows() > 0,
                  "HermitianOperator: matrix must be square and nonempty");
  if (!mat_.allFinite())
    throw std::invalid_argument("HermitianOperator: non-finite entry");
  const double defect = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 2 * kHermTol)
    throw std::invalid_argument("HermitianOperator: not Hermitian (defect " +
                                std::to_string(defect) + ")");
  // Entrywise (A - A*)/2 has zero diagonal imaginary part by construction,
  // so the explicit diagonal bound is part of the same check; clean up the
  // representation so downstream arithmetic sees an exactly Hermitian matrix.
  mat_ = ((mat_ + mat_.adjoint()) / 2.0).eval();
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  detail::require(a.dim() == b.dim(), "operator+: dimension mismatch");
  return HermitianOperator(a.matrix() + b.matrix());
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  detail::require(a.dim() == b.dim(), "operator-: dimension mismatch");
  return HermitianOperator(a.matrix() - b.matrix());
}

HermitianOperator operator*(double c, const HermitianOperator& a) {
  return HermitianOperator(c * a.matrix());
}

DensityOperator::DensityOperator(HermitianOperator op) : op_(std::move(op)) {
  if (std::abs(op_.trace() - 1.0) > kDensityTraceTol)
    throw std::invalid_argument("DensityOperator: trace != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op_.matrix(),
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("DensityOperator: eigensolver failed");
  if (es.eigenvalues().minCoeff() < -kDensityEigTol)
    throw std::invalid_argument("DensityOperator: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  detail::require(a.dim() == b.dim(), "hs_inner: dimension mismatch");
  // tr(AB) = sum_ij A_ij conj(B_ij) for Hermitian B.
  return a.matrix().cwiseProduct(b.matrix().conjugate()).sum().real();
}

EigenDecomposition hermitian_eig(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: no convergence for dim " +
                             std::to_string(a.dim()) + " operator of norm " +
                             std::to_string(a.matrix().norm()));
  }
  EigenDecomposition out;
  out.eigenvalues.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + a.dim());
  out.eigenvectors = es.eigenvectors();
  return out;
}

std::vector<double> hermitian_eigenvalues(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix(),
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigenvalues: eigensolver failed");
  return std::vector<double>(es.eigenvalues().data(),
                             es.eigenvalues().data() + a.dim());
}

DensityOperator projector_onto(const Eigen::VectorXcd& v) {
  const double n2 = v.squaredNorm();
  detail::require(n2 > 0.0, "projector_onto: zero vector");
  Eigen::MatrixXcd p = v * v.adjoint() / n2;
  return DensityOperator::unchecked(HermitianOperator(std::move(p)));
}

Eigen::VectorXd HermitianBasis::coords(const Eigen::MatrixXcd& a) const {
  const double s = std::sqrt(2.0);
  Eigen::VectorXd x(dim());
  int k = 0;
  for (int i = 0; i < n_; ++i) x[k++] = a(i, i).real();
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) x[k++] = s * a(i, j).real();
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) x[k++] = s * a(i, j).imag();
  return x;
}

Eigen::MatrixXcd HermitianBasis::matrix_from_coords(const Eigen::VectorXd& x) const {
  detail::require(x.size() == dim(), "HermitianBasis: coordinate size mismatch");
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_, n_);
  int k = 0;
  for (int i = 0; i < n_; ++i) a(i, i) = x[k++];
  int koff = k;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      a(i, j) += s * x[koff];
      a(j, i) += s * x[koff];
      ++koff;
    }
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      a(i, j) += cplx(0, s) * x[koff];
      a(j, i) += cplx(0, -s) * x[koff];
      ++koff;
    }
  return a;
}

Eigen::MatrixXd HermitianBasis::traceless_subspace() const {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim(), dim() - 1);
  int c = 0;
  // Diagonal part: (e_0+...+e_{k-1} - k e_k)/sqrt(k(k+1)), k = 1..n-1.
  for (int k = 1; k < n_; ++k, ++c) {
    const double norm = std::sqrt(double(k) * (k + 1));
    for (int i = 0; i < k; ++i) b(i, c) = 1.0 / norm;
    b(k, c) = -double(k) / norm;
  }
  // Off-diagonal basis elements are already traceless.
  for (int k = n_; k < dim(); ++k, ++c) b(k, c) = 1.0;
  return b;
}

}  // namespace berezin
