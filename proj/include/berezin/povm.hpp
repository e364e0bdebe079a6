// povm.hpp - finite positive-operator-valued measures and the four maps
// built on them: quantization T, dequantization T*, the quantum channel
// E = (1/n) T T*, and the Berezin transform B = (1/n) T* T.

#pragma once

#include <optional>

#include "berezin/operator_core.hpp"

namespace berezin {

inline constexpr double kPovmWeightTol = 1e-10;
inline constexpr double kPovmDefaultTol = 1e-8;

/// A real-valued function on the POVM points (an element of L2(Omega, alpha)).
struct ObservableFunction {
  Eigen::VectorXd values;

  int size() const { return static_cast<int>(values.size()); }
};

struct ValidationReport {
  double resolution_defect = 0.0;     // ||sum n a(s) F(s) - 1||_2
  double min_state_eigenvalue = 0.0;  // over all states
  double weight_sum = 0.0;
  double tolerance = kPovmDefaultTol;

  bool passed() const { return resolution_defect <= tolerance; }
};

struct PurityReport {
  bool is_pure = false;
  double max_rank_excess = 0.0;  // largest second eigenvalue among states
  bool injective = false;        // pairwise ||F(s)-F(t)||_2 > 1e-8
};

/// Finite POVM dW = n F dalpha: points, trace-one states F(s) and a
/// probability weight alpha(s) per point. Weights must be strictly positive
/// and sum to one; the resolution-of-identity defect is checked by
/// validate(), not at construction, so that defective measures can still be
/// inspected and reported on.
class FinitePovm {
 public:
  FinitePovm(int dim, std::vector<std::string> points, std::vector<double> weights,
             std::vector<DensityOperator> states);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(states_.size()); }
  const std::string& label(int s) const { return points_[s]; }
  const std::vector<std::string>& labels() const { return points_; }
  double weight(int s) const { return weights_[s]; }
  const std::vector<double>& weights() const { return weights_; }
  const DensityOperator& state(int s) const { return states_[s]; }

  int index_of(const std::string& label) const;  // throws on unknown label

 private:
  int dim_;
  std::vector<std::string> points_;
  std::vector<double> weights_;
  std::vector<DensityOperator> states_;
};

ValidationReport validate(const FinitePovm& povm, double tol = kPovmDefaultTol);

PurityReport purity(const FinitePovm& povm);

/// T(phi) = sum_s phi(s) n alpha(s) F(s).
HermitianOperator quantize(const FinitePovm& povm, const ObservableFunction& phi);

/// T*(A)(s) = n ((F(s), A)).
ObservableFunction dequantize(const FinitePovm& povm, const HermitianOperator& a);

/// E(A) = n sum_s alpha(s) ((F(s), A)) F(s).
HermitianOperator channel_apply(const FinitePovm& povm, const HermitianOperator& a);

/// N x N Markov matrix M[t][s] = n ((F(s),F(t))) alpha(s), acting on
/// functions by (B phi)(t) = sum_s M[t][s] phi(s). Row-stochastic and
/// reversible with respect to alpha.
Eigen::MatrixXd berezin_matrix(const FinitePovm& povm);

/// Symmetrization D^{1/2} M D^{-1/2} with D = diag(alpha); genuinely
/// symmetric positive semidefinite with the same spectrum as M.
Eigen::MatrixXd berezin_matrix_symmetrized(const FinitePovm& povm);

/// Gram matrix of the states, G[s][t] = ((F(s), F(t))).
Eigen::MatrixXd state_gram(const FinitePovm& povm);

/// The channel E materialized as a real symmetric n^2 x n^2 matrix in the
/// orthonormal Hermitian basis of HermitianBasis.
Eigen::MatrixXd channel_matrix(const FinitePovm& povm);

/// Choi matrix of E with the normalized maximally-entangled convention:
/// C = sum_s alpha(s) conj(F(s)) (x) F(s); positive semidefinite, and its
/// partial trace over the output slot equals 1/n.
HermitianOperator choi_matrix(const FinitePovm& povm);

/// Partial trace over the output (second) factor of an n^2 x n^2 operator.
HermitianOperator partial_trace_output(const HermitianOperator& c, int n);

}  // namespace berezin
