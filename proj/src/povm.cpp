#include "berezin/povm.hpp"

#include <cmath>
#include <unordered_map>

namespace berezin {

FinitePovm::FinitePovm(int dim, std::vector<std::string> points,
                       std::vector<double> weights,
                       std::vector<DensityOperator> states)
    : dim_(dim),
      points_(std::move(points)),
      weights_(std::move(weights)),
      states_(std::move(states)) {
  detail::require(dim_ > 0, "FinitePovm: dim must be positive");
  detail::require(!states_.empty(), "FinitePovm: empty point set");
  detail::require(points_.size() == states_.size() &&
                      weights_.size() == states_.size(),
                  "FinitePovm: points/weights/states size mismatch");
  double sum = 0.0;
  for (double w : weights_) {
    // Zero-weight points contribute nothing and break the alpha-weighted
    // symmetrization; they are rejected outright.
    detail::require(w > 0.0, "FinitePovm: weights must be strictly positive");
    sum += w;
  }
  detail::require(std::abs(sum - 1.0) <= kPovmWeightTol,
                  "FinitePovm: weights must sum to 1 (got " +
                      std::to_string(sum) + ")");
  for (const auto& st : states_)
    detail::require(st.dim() == dim_, "FinitePovm: state dimension mismatch");
}

int FinitePovm::index_of(const std::string& label) const {
  for (int s = 0; s < size(); ++s)
    if (points_[s] == label) return s;
  throw std::invalid_argument("FinitePovm: unknown point label '" + label + "'");
}

ValidationReport validate(const FinitePovm& povm, double tol) {
  const int n = povm.dim();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  double wsum = 0.0;
  double min_eig = 1.0;
  for (int s = 0; s < povm.size(); ++s) {
    acc += double(n) * povm.weight(s) * povm.state(s).matrix();
    wsum += povm.weight(s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(povm.state(s).matrix(),
                                                       Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  ValidationReport r;
  r.resolution_defect = (acc - Eigen::MatrixXcd::Identity(n, n)).norm();
  r.min_state_eigenvalue = min_eig;
  r.weight_sum = wsum;
  r.tolerance = tol;
  return r;
}

PurityReport purity(const FinitePovm& povm) {
  PurityReport r;
  double excess = 0.0;
  for (int s = 0; s < povm.size(); ++s) {
    auto ev = hermitian_eigenvalues(povm.state(s).op());
    if (ev.size() >= 2) excess = std::max(excess, ev[ev.size() - 2]);
  }
  r.max_rank_excess = excess;

  const Eigen::MatrixXd g = state_gram(povm);
  double min_dist2 = std::numeric_limits<double>::infinity();
  for (int s = 0; s < povm.size(); ++s)
    for (int t = s + 1; t < povm.size(); ++t)
      min_dist2 = std::min(min_dist2, g(s, s) + g(t, t) - 2 * g(s, t));
  r.injective = povm.size() < 2 || min_dist2 > 1e-8 * 1e-8;
  r.is_pure = excess <= 1e-8 && r.injective;
  return r;
}

HermitianOperator quantize(const FinitePovm& povm, const ObservableFunction& phi) {
  detail::require(phi.size() == povm.size(), "quantize: function length mismatch");
  const int n = povm.dim();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (int s = 0; s < povm.size(); ++s)
    acc += phi.values[s] * double(n) * povm.weight(s) * povm.state(s).matrix();
  return HermitianOperator(std::move(acc));
}

ObservableFunction dequantize(const FinitePovm& povm, const HermitianOperator& a) {
  detail::require(a.dim() == povm.dim(), "dequantize: dimension mismatch");
  ObservableFunction phi;
  phi.values.resize(povm.size());
  for (int s = 0; s < povm.size(); ++s)
    phi.values[s] = double(povm.dim()) * hs_inner(povm.state(s).op(), a);
  return phi;
}

HermitianOperator channel_apply(const FinitePovm& povm, const HermitianOperator& a) {
  detail::require(a.dim() == povm.dim(), "channel: dimension mismatch");
  const int n = povm.dim();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (int s = 0; s < povm.size(); ++s)
    acc += double(n) * povm.weight(s) * hs_inner(povm.state(s).op(), a) *
           povm.state(s).matrix();
  return HermitianOperator(std::move(acc));
}

namespace {

// N x n^2 matrix whose row s holds the real Hermitian-basis coordinates of
// F(s). All Gram-type objects below are products of this matrix.
Eigen::MatrixXd state_coords(const FinitePovm& povm) {
  HermitianBasis basis(povm.dim());
  Eigen::MatrixXd phi(povm.size(), basis.dim());
  for (int s = 0; s < povm.size(); ++s)
    phi.row(s) = basis.coords(povm.state(s).matrix()).transpose();
  return phi;
}

}  // namespace

Eigen::MatrixXd state_gram(const FinitePovm& povm) {
  const Eigen::MatrixXd phi = state_coords(povm);
  return phi * phi.transpose();
}

Eigen::MatrixXd berezin_matrix(const FinitePovm& povm) {
  const Eigen::MatrixXd g = state_gram(povm);
  const int n = povm.dim();
  Eigen::MatrixXd m(povm.size(), povm.size());
  for (int t = 0; t < povm.size(); ++t)
    for (int s = 0; s < povm.size(); ++s)
      m(t, s) = double(n) * g(s, t) * povm.weight(s);
  return m;
}

Eigen::MatrixXd berezin_matrix_symmetrized(const FinitePovm& povm) {
  const Eigen::MatrixXd g = state_gram(povm);
  const int n = povm.dim();
  Eigen::VectorXd sq(povm.size());
  for (int s = 0; s < povm.size(); ++s) sq[s] = std::sqrt(povm.weight(s));
  return double(n) * (sq.asDiagonal() * g * sq.asDiagonal());
}

Eigen::MatrixXd channel_matrix(const FinitePovm& povm) {
  const Eigen::MatrixXd phi = state_coords(povm);
  Eigen::VectorXd w(povm.size());
  for (int s = 0; s < povm.size(); ++s) w[s] = povm.weight(s);
  return double(povm.dim()) * (phi.transpose() * w.asDiagonal() * phi);
}

HermitianOperator choi_matrix(const FinitePovm& povm) {
  const int n = povm.dim();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (int s = 0; s < povm.size(); ++s) {
    const Eigen::MatrixXcd& f = povm.state(s).matrix();
    const Eigen::MatrixXcd ft = f.conjugate();  // transpose of Hermitian F
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        c.block(i * n, j * n, n, n) += povm.weight(s) * ft(i, j) * f;
  }
  return HermitianOperator(std::move(c));
}

HermitianOperator partial_trace_output(const HermitianOperator& c, int n) {
  detail::require(c.dim() == n * n, "partial_trace_output: dimension mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out(i, j) += c.matrix()(i * n + k, j * n + k);
  return HermitianOperator(std::move(out));
}

}  // namespace berezin
