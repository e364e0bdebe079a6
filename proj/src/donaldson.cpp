#include "berezin/donaldson.hpp"

#include <cmath>

namespace berezin {

namespace {

Eigen::MatrixXcd point_matrix(const PointMeasure& nu) {
  Eigen::MatrixXcd z(nu.dim, nu.size());
  for (int i = 0; i < nu.size(); ++i) z.col(i) = nu.points[i];
  return z;
}

int point_rank(const Eigen::MatrixXcd& z) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(z);
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

// G^{-1/2} via the spectral decomposition; requires G positive definite.
Eigen::MatrixXcd inverse_sqrt(const Eigen::MatrixXcd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("inverse_sqrt: eigensolver failed");
  if (es.eigenvalues().minCoeff() <= 0)
    throw std::runtime_error("inverse_sqrt: matrix not positive definite");
  return es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().adjoint();
}

double fit_log_slope_final_third(const std::vector<double>& values) {
  // Least-squares slope of log(values) over the final third of the trace.
  std::vector<std::pair<double, double>> pts;
  const size_t start = values.size() - values.size() / 3;
  for (size_t r = start; r < values.size(); ++r)
    if (values[r] > 1e-15) pts.emplace_back(double(r), std::log(values[r]));
  if (pts.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double m = pts.size();
  const double denom = m * sxx - sx * sx;
  if (denom <= 0) return 0.0;
  return (m * sxy - sx * sy) / denom;
}

}  // namespace

PointMeasure::PointMeasure(int n, std::vector<Eigen::VectorXcd> pts,
                           std::vector<double> ms)
    : dim(n), points(std::move(pts)), masses(std::move(ms)) {
  detail::require(dim > 0, "PointMeasure: dim must be positive");
  detail::require(!points.empty() && points.size() == masses.size(),
                  "PointMeasure: points/masses size mismatch");
  for (const auto& z : points) {
    detail::require(z.size() == dim, "PointMeasure: point dimension mismatch");
    detail::require(z.norm() > 0, "PointMeasure: zero point");
  }
  for (double m : masses)
    detail::require(m > 0, "PointMeasure: masses must be positive");
}

double PointMeasure::total_mass() const {
  double s = 0;
  for (double m : masses) s += m;
  return s;
}

PositiveProduct::PositiveProduct(HermitianOperator g) : g_(std::move(g)) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g_.matrix(),
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("PositiveProduct: eigensolver failed");
  if (es.eigenvalues().minCoeff() <= 0)
    throw std::invalid_argument("PositiveProduct: not positive definite (min eig " +
                                std::to_string(es.eigenvalues().minCoeff()) + ")");
}

PositiveProduct PositiveProduct::det_normalized() const {
  const int n = dim();
  const double logdet =
      Eigen::PartialPivLU<Eigen::MatrixXcd>(g_.matrix()).matrixLU().diagonal()
          .array().abs().log().sum();
  return PositiveProduct(g_.matrix() * std::exp(-logdet / n));
}

PositiveProduct t_nu_step(const PositiveProduct& g, const PointMeasure& nu) {
  detail::require(g.dim() == nu.dim, "t_nu_step: dimension mismatch");
  const int n = nu.dim;
  const double r_nu = double(n) / nu.total_mass();
  Eigen::LLT<Eigen::MatrixXcd> llt(g.matrix());
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("t_nu_step: Cholesky factorization of G failed");
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < nu.size(); ++i) {
    const Eigen::VectorXcd& z = nu.points[i];
    const double quad = z.dot(llt.solve(z)).real();  // <G^{-1} z, z>
    if (!(quad > 0))
      throw std::runtime_error("t_nu_step: nonpositive quadratic form value");
    acc += (nu.masses[i] / quad) * (z * z.adjoint());
  }
  acc *= r_nu;
  try {
    return PositiveProduct(std::move(acc));
  } catch (const std::invalid_argument&) {
    throw std::runtime_error(
        "t_nu_step: output not positive definite; points do not span C^n");
  }
}

double psi_functional(const PositiveProduct& g, const PointMeasure& nu) {
  detail::require(g.dim() == nu.dim, "psi_functional: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXcd> llt(g.matrix());
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("psi_functional: G not positive definite");
  double acc = 0.0;
  for (int i = 0; i < nu.size(); ++i) {
    const Eigen::VectorXcd zhat = nu.points[i].normalized();
    acc += nu.masses[i] * std::log(zhat.dot(llt.solve(zhat)).real());
  }
  const double logdet = 2.0 * Eigen::MatrixXcd(llt.matrixL())
                                  .diagonal().array().abs().log().sum();
  return acc + nu.total_mass() / nu.dim * logdet;
}

IterationTrace iterate_to_balance(const PointMeasure& nu, const PositiveProduct& g0,
                                  double tol, int max_iter) {
  detail::require(g0.dim() == nu.dim, "iterate_to_balance: dimension mismatch");
  if (point_rank(point_matrix(nu)) != nu.dim)
    throw std::invalid_argument("iterate_to_balance: points do not span C^n");

  IterationTrace trace;
  trace.iterates.push_back(g0.det_normalized());
  trace.psi_values.push_back(psi_functional(trace.iterates.back(), nu));

  for (int r = 0; r < max_iter; ++r) {
    const PositiveProduct g = trace.iterates.back();  // copy: push_back below
    const PositiveProduct tg = t_nu_step(g, nu);
    const double step = (tg.matrix() - g.matrix()).norm();
    const double logdet =
        Eigen::PartialPivLU<Eigen::MatrixXcd>(tg.matrix()).matrixLU().diagonal()
            .array().abs().log().sum();
    trace.step_distances.push_back(step);
    trace.dets_before_norm.push_back(std::exp(logdet));

    const PositiveProduct next = tg.det_normalized();
    const double psi = psi_functional(next, nu);
    if (psi > trace.psi_values.back() + 1e-10)
      throw std::runtime_error("iterate_to_balance: Psi_nu increased by " +
                               std::to_string(psi - trace.psi_values.back()));
    trace.iterates.push_back(next);
    trace.psi_values.push_back(psi);

    if (step / g.matrix().norm() < tol) {
      trace.converged = true;
      break;
    }
  }
  trace.fitted_rate = std::exp(fit_log_slope_final_third(trace.step_distances));
  return trace;
}

FinitePovm balanced_povm(const PointMeasure& nu, const PositiveProduct& g) {
  detail::require(g.dim() == nu.dim, "balanced_povm: dimension mismatch");
  const PositiveProduct tg = t_nu_step(g, nu);
  const double defect = (tg.matrix() - g.matrix()).norm() / g.matrix().norm();
  if (defect > 1e-9)
    throw std::runtime_error("balanced_povm: G is not a fixed point (defect " +
                             std::to_string(defect) + ")");
  const Eigen::MatrixXcd gis = inverse_sqrt(g.matrix());
  const double total = nu.total_mass();
  std::vector<std::string> labels;
  std::vector<double> weights;
  std::vector<DensityOperator> states;
  for (int i = 0; i < nu.size(); ++i) {
    labels.push_back("z" + std::to_string(i));
    weights.push_back(nu.masses[i] / total);
    states.push_back(projector_onto(gis * nu.points[i]));
  }
  return FinitePovm(nu.dim, std::move(labels), std::move(weights), std::move(states));
}

namespace {

Eigen::MatrixXd linearization_fd_step(const PointMeasure& nu_w, double h, int n) {
  HermitianBasis basis(n);
  Eigen::MatrixXd d(basis.dim(), basis.dim());
  for (int a = 0; a < basis.dim(); ++a) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(basis.dim());
    e[a] = 1.0;
    const Eigen::MatrixXcd dir = basis.matrix_from_coords(e);
    const Eigen::MatrixXcd base = Eigen::MatrixXcd::Identity(n, n);
    const PositiveProduct plus(base + h * dir);
    const PositiveProduct minus(base - h * dir);
    const Eigen::MatrixXcd diff =
        (t_nu_step(plus, nu_w).matrix() - t_nu_step(minus, nu_w).matrix()) /
        (2.0 * h);
    d.col(a) = basis.coords(diff);
  }
  return d;
}

}  // namespace

Eigen::MatrixXd linearization_fd(const PointMeasure& nu, const PositiveProduct& g,
                                 double h) {
  detail::require(h >= 1e-6 && h <= 1e-4, "linearization_fd: h out of [1e-6, 1e-4]");
  const PositiveProduct tg = t_nu_step(g, nu);
  if ((tg.matrix() - g.matrix()).norm() / g.matrix().norm() > 1e-9)
    throw std::runtime_error("linearization_fd: G is not a fixed point");

  // Work in the frame where the fixed point is the identity: replace the
  // points by w_i = G^{-1/2} z_i, under which T_nu conjugates covariantly.
  const Eigen::MatrixXcd gis = inverse_sqrt(g.matrix());
  std::vector<Eigen::VectorXcd> w;
  for (const auto& z : nu.points) w.push_back(gis * z);
  const PointMeasure nu_w(nu.dim, std::move(w), nu.masses);

  const Eigen::MatrixXd d = linearization_fd_step(nu_w, h, nu.dim);
  const Eigen::MatrixXd d_half = linearization_fd_step(nu_w, h / 2, nu.dim);
  const double disagreement = (d - d_half).cwiseAbs().maxCoeff();
  if (disagreement > 1e-3)
    throw std::runtime_error(
        "linearization_fd: step too small, cancellation detected (Richardson "
        "disagreement " + std::to_string(disagreement) + ")");
  return d_half;
}

bool exact_spade(const PointMeasure& nu) {
  const int n = nu.dim;
  const int count = nu.size();
  if (n > 4 || count > 12)
    throw std::invalid_argument(
        "exact_spade: refused above size caps n <= 4, N <= 12");
  const Eigen::MatrixXcd z = point_matrix(nu);
  const double bound = nu.total_mass() / n;

  // Every maximizing proper subspace may be taken as the span of the points
  // it contains, so enumerating spans of point subsets is exhaustive.
  for (unsigned mask = 1; mask < (1u << count); ++mask) {
    Eigen::MatrixXcd sub(n, count);
    int cols = 0;
    for (int i = 0; i < count; ++i)
      if (mask & (1u << i)) sub.col(cols++) = z.col(i);
    const int rank = point_rank(sub.leftCols(cols));
    if (rank >= n) continue;  // not a proper subspace

    // Mass of *all* points lying in the span of the subset.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(sub.leftCols(cols));
    qr.setThreshold(1e-10);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, rank);
    double mass = 0.0;
    for (int i = 0; i < count; ++i) {
      const Eigen::VectorXcd& p = nu.points[i];
      const double res = (p - q * (q.adjoint() * p)).norm() / p.norm();
      if (res < 1e-10) mass += nu.masses[i];
    }
    if (!(mass / rank < bound)) return false;
  }
  return true;
}

SpadeReport check_spade(const PointMeasure& nu) {
  SpadeReport report;
  report.spanning = point_rank(point_matrix(nu)) == nu.dim;
  if (nu.dim <= 4 && nu.size() <= 12) report.exact = exact_spade(nu);
  return report;
}

}  // namespace berezin
