// donaldson.hpp - the dynamical system T_nu on positive Hermitian products
// driven by a weighted point cloud in C^n \ {0}: fixed-point iteration to a
// balanced product, the monotone functional Psi_nu, the balanced POVM at a
// fixed point, and the finite-difference linearization (which equals the
// quantum channel of that POVM).

#pragma once

#include <optional>

#include "berezin/povm.hpp"

namespace berezin {

/// Finite atomic measure nu = sum_i nu_i delta_{[z_i]} with nonzero points.
struct PointMeasure {
  int dim = 0;
  std::vector<Eigen::VectorXcd> points;
  std::vector<double> masses;

  PointMeasure(int n, std::vector<Eigen::VectorXcd> pts, std::vector<double> ms);

  int size() const { return static_cast<int>(points.size()); }
  double total_mass() const;
};

/// Strictly positive definite Hermitian matrix (a Hermitian product on C^n).
class PositiveProduct {
 public:
  explicit PositiveProduct(HermitianOperator g);
  explicit PositiveProduct(Eigen::MatrixXcd g)
      : PositiveProduct(HermitianOperator(std::move(g))) {}

  int dim() const { return g_.dim(); }
  const HermitianOperator& op() const { return g_; }
  const Eigen::MatrixXcd& matrix() const { return g_.matrix(); }

  /// G / det(G)^{1/n}.
  PositiveProduct det_normalized() const;

 private:
  HermitianOperator g_;
};

struct IterationTrace {
  std::vector<PositiveProduct> iterates;  // det-normalized
  std::vector<double> psi_values;
  std::vector<double> step_distances;     // ||T(G_r) - G_r||_2
  std::vector<double> dets_before_norm;   // det(T(G_r)) before normalization
  bool converged = false;
  double fitted_rate = 0.0;               // beta-hat from the final third

  const PositiveProduct& final_product() const { return iterates.back(); }
  int iterations() const { return static_cast<int>(step_distances.size()); }
};

/// One application of T_nu: R_nu sum_i nu_i z_i z_i^* / <G^{-1} z_i, z_i>.
PositiveProduct t_nu_step(const PositiveProduct& g, const PointMeasure& nu);

/// Psi_nu(G) = sum_i nu_i log<G^{-1} zhat_i, zhat_i> + (|nu|/n) log det G,
/// with unit lifts zhat_i. Scale-invariant; non-increasing along T_nu.
double psi_functional(const PositiveProduct& g, const PointMeasure& nu);

/// Iterate G_{r+1} = det-normalize(T_nu(G_r)) until
/// ||T(G_r) - G_r|| / ||G_r|| < tol or max_iter is exhausted (converged
/// flag false in that case). Requires the points to span C^n.
IterationTrace iterate_to_balance(const PointMeasure& nu, const PositiveProduct& g0,
                                  double tol = 1e-12, int max_iter = 2000);

/// POVM with states proj(G^{-1/2} z_i) and weights nu_i/|nu|; requires G to
/// be a fixed point of T_nu within 1e-9 relative.
FinitePovm balanced_povm(const PointMeasure& nu, const PositiveProduct& g);

/// Central finite differences of T_nu at a fixed point G, taken in the frame
/// where G = 1 (directions conjugated by G^{1/2}), as an n^2 x n^2 matrix in
/// the orthonormal Hermitian basis. Matches channel_matrix(balanced_povm).
/// Throws if the Richardson step-halving disagreement exceeds 1e-3.
Eigen::MatrixXd linearization_fd(const PointMeasure& nu, const PositiveProduct& g,
                                 double h = 1e-5);

struct SpadeReport {
  bool spanning = false;          // rank of the point matrix equals n
  std::optional<bool> exact;      // full subspace-mass inequality, if computed
};

/// Spanning check always; the exact subspace-mass inequality
/// nu(Sigma)/(dim Sigma + 1) < |nu|/n over all proper flats is brute-forced
/// only within the size caps n <= 4, N <= 12.
SpadeReport check_spade(const PointMeasure& nu);

/// The exact inequality check alone; throws above the size caps.
bool exact_spade(const PointMeasure& nu);

}  // namespace berezin
