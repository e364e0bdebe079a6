// operator_core.hpp - complex Hermitian linear algebra substrate.
//
// Carries the basic objects everything else is built from: Hermitian
// operators with construction-time invariant checks, density operators,
// eigendecompositions, rank-one projectors, and the real orthonormal
// basis of the Hermitian operator space used to materialize superoperators
// as ordinary symmetric matrices.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace berezin {

using cplx = std::complex<double>;

// Tolerances fixed by the data-model contracts.
inline constexpr double kHermTol = 1e-12;       // Hermiticity at construction
inline constexpr double kDensityEigTol = 1e-10; // density eigenvalue floor
inline constexpr double kDensityTraceTol = 1e-10;

/// n x n complex self-adjoint matrix. Construction rejects (rather than
/// symmetrizes) inputs that are not Hermitian within 1e-12, and non-finite
/// entries.
class HermitianOperator {
 public:
  explicit HermitianOperator(Eigen::MatrixXcd m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return mat_; }

  double hs_norm() const { return mat_.norm(); }
  double trace() const { return mat_.trace().real(); }

  static HermitianOperator identity(int n) {
    return HermitianOperator(Eigen::MatrixXcd::Identity(n, n));
  }
  static HermitianOperator zero(int n) {
    return HermitianOperator(Eigen::MatrixXcd::Zero(n, n));
  }

 private:
  Eigen::MatrixXcd mat_;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator*(double c, const HermitianOperator& a);

/// Positive trace-one operator (a quantum state).
class DensityOperator {
 public:
  /// Checked: eigenvalues >= -1e-10 and trace = 1 within 1e-10.
  explicit DensityOperator(HermitianOperator op);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Eigen::MatrixXcd& matrix() const { return op_.matrix(); }

  /// Trusted constructor for states that are positive by construction
  /// (rank-one projectors, quadrature states). Skips the spectral check.
  static DensityOperator unchecked(HermitianOperator op) {
    return DensityOperator(std::move(op), 0);
  }

 private:
  DensityOperator(HermitianOperator op, int) : op_(std::move(op)) {}
  HermitianOperator op_;
};

/// Full real spectrum with orthonormal eigenvectors; eigenvalues ascending,
/// column k of eigenvectors paired with eigenvalues[k].
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  Eigen::MatrixXcd eigenvectors;
};

/// Hilbert-Schmidt scalar product ((A,B)) = tr(AB); real for Hermitian A, B.
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

/// Dense Hermitian eigendecomposition, eigenvalues ascending.
EigenDecomposition hermitian_eig(const HermitianOperator& a);
std::vector<double> hermitian_eigenvalues(const HermitianOperator& a);

/// Rank-one orthogonal projector vv*/|v|^2 onto a nonzero vector.
DensityOperator projector_onto(const Eigen::VectorXcd& v);

/// Orthonormal real basis of the n x n Hermitian operators under ((.,.)):
/// diagonal units, then (E_ij+E_ji)/sqrt(2) and i(E_ij-E_ji)/sqrt(2) for i<j.
/// Provides the coordinate maps used to materialize superoperators.
class HermitianBasis {
 public:
  explicit HermitianBasis(int n) : n_(n) {}

  int dim() const { return n_ * n_; }
  int matrix_dim() const { return n_; }

  Eigen::VectorXd coords(const Eigen::MatrixXcd& a) const;
  Eigen::VectorXd coords(const HermitianOperator& a) const { return coords(a.matrix()); }
  Eigen::MatrixXcd matrix_from_coords(const Eigen::VectorXd& x) const;
  HermitianOperator from_coords(const Eigen::VectorXd& x) const {
    return HermitianOperator(matrix_from_coords(x));
  }

  /// Columns form an orthonormal basis of the traceless subspace
  /// (generalized diagonal differences + the off-diagonal pairs),
  /// expressed in the coordinates above. Shape dim() x (dim()-1).
  Eigen::MatrixXd traceless_subspace() const;

 private:
  int n_;
};

namespace detail {
void require(bool cond, const std::string& what);
}

}  // namespace berezin
