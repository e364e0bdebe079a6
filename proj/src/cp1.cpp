#include "berezin/cp1.hpp"

#include <cmath>
#include <numbers>

namespace berezin {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton iteration on P_n with the Chebyshev-based initial guess; the
  // recurrence also yields P_n' for the weight formula.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    // Recompute the central node cleanly.
    nodes[n / 2] = 0.0;
    double p0 = 1.0, p1 = 0.0;
    for (int k = 2; k <= n; ++k) {
      const double p2 = (-(k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (-p0) / (-1.0);
    weights[n / 2] = 2.0 / (dp * dp);
  }
}

SphereQuadrature build_sphere_quadrature(int p) {
  detail::require(p >= 1, "build_sphere_quadrature: p >= 1 required");
  std::vector<double> t, w;
  gauss_legendre(p + 1, t, w);
  const int azimuth = 2 * p + 2;
  SphereQuadrature quad;
  quad.exactness_degree = 2 * p + 1;
  for (int i = 0; i <= p; ++i) {
    for (int j = 0; j < azimuth; ++j) {
      quad.theta.push_back(std::acos(t[i]));
      quad.phi.push_back(2.0 * std::numbers::pi * j / azimuth);
      quad.weights.push_back(0.5 * w[i] / azimuth);
    }
  }
  return quad;
}

CoherentFrame build_coherent_frame(int p) {
  CoherentFrame frame;
  frame.p = p;
  frame.quadrature = build_sphere_quadrature(p);
  const int n = p + 1;

  // sqrt of binomial(p, k); accumulated in logs to stay finite for large p.
  std::vector<double> sqrt_binom(n);
  double log_b = 0.0;
  for (int k = 0; k < n; ++k) {
    sqrt_binom[k] = std::exp(0.5 * log_b);
    log_b += std::log(double(p - k)) - std::log(double(k + 1));
  }

  for (int node = 0; node < frame.quadrature.size(); ++node) {
    const double th = frame.quadrature.theta[node];
    const double ph = frame.quadrature.phi[node];
    Eigen::Vector2cd u(std::cos(th / 2),
                       std::sin(th / 2) * std::polar(1.0, ph));
    Eigen::VectorXcd amp(n);
    for (int k = 0; k < n; ++k)
      amp[k] = sqrt_binom[k] * std::pow(u[0], p - k) * std::pow(u[1], k);
    frame.spinors.push_back(u);
    frame.amplitudes.push_back(std::move(amp));
  }
  return frame;
}

FinitePovm cp1_povm_from_frame(const CoherentFrame& frame) {
  std::vector<std::string> labels;
  std::vector<DensityOperator> states;
  for (int node = 0; node < frame.quadrature.size(); ++node) {
    labels.push_back("x" + std::to_string(node));
    states.push_back(projector_onto(frame.amplitudes[node]));
  }
  FinitePovm povm(frame.p + 1, std::move(labels), frame.quadrature.weights,
                  std::move(states));
  const auto report = validate(povm, 1e-10);
  if (!report.passed())
    throw std::runtime_error("cp1 POVM failed validation at 1e-10 (defect " +
                             std::to_string(report.resolution_defect) +
                             "); quadrature defect");
  return povm;
}

FinitePovm build_cp1_povm(int p) { return cp1_povm_from_frame(build_coherent_frame(p)); }

double gap_reference(int p) { return 2.0 / (p + 2); }

std::pair<double, int> laplace_reference(int l) {
  detail::require(l >= 0, "laplace_reference: l >= 0 required");
  return {4.0 * std::numbers::pi * l * (l + 1), 2 * l + 1};
}

double cluster_eigenvalue_reference(int p, int l) {
  detail::require(l >= 0 && l <= p, "cluster_eigenvalue_reference: need 0 <= l <= p");
  // p!(p+1)! / ((p-l)!(p+l+1)!) as a product of l ratios.
  double v = 1.0;
  for (int j = 0; j < l; ++j) v *= double(p - j) / double(p + 2 + j);
  return v;
}

std::vector<AsymptoticsRow> verify_gap_asymptotics(const std::vector<int>& p_list,
                                                   int k_max) {
  std::vector<AsymptoticsRow> rows;
  for (int p : p_list) {
    detail::require(k_max <= p, "verify_gap_asymptotics: k_max exceeds level");
    const FinitePovm povm = build_cp1_povm(p);
    const SpectralReport report = berezin_spectrum(povm, false);
    for (int l = 1; l <= k_max; ++l) {
      if (l >= static_cast<int>(report.clusters.size()))
        throw std::runtime_error("verify_gap_asymptotics: cluster missing");
      const ClusterInfo& c = report.clusters[l];
      if (c.count != 2 * l + 1)
        throw std::runtime_error(
            "verify_gap_asymptotics: cluster size mismatch at p=" +
            std::to_string(p) + " l=" + std::to_string(l) + " (got " +
            std::to_string(c.count) + ")");
      AsymptoticsRow row;
      row.p = p;
      row.l = l;
      row.gamma = c.value;
      row.p_times_defect = p * (1.0 - c.value);
      row.target = double(l) * (l + 1);
      row.residual = std::abs(row.p_times_defect - row.target);
      rows.push_back(row);
    }
  }
  return rows;
}

Eigen::MatrixXd harmonic_samples(const SphereQuadrature& quad, int l) {
  const int count = quad.size();
  Eigen::MatrixXd h(count, 2 * l + 1);
  for (int node = 0; node < count; ++node) {
    const double t = std::cos(quad.theta[node]);
    const double ph = quad.phi[node];
    int col = 0;
    h(node, col++) = std::legendre(l, t);
    for (int m = 1; m <= l; ++m) {
      const double plm = std::assoc_legendre(l, m, t);
      h(node, col++) = plm * std::cos(m * ph);
      h(node, col++) = plm * std::sin(m * ph);
    }
  }
  return h;
}

double eigenfunction_vs_harmonics(int p, int l) {
  detail::require(l >= 0 && l <= p, "eigenfunction_vs_harmonics: need 0 <= l <= p");
  const CoherentFrame frame = build_coherent_frame(p);
  const FinitePovm povm = cp1_povm_from_frame(frame);
  const SpectralReport report = berezin_spectrum(povm, true);

  if (l >= static_cast<int>(report.clusters.size()))
    throw std::runtime_error("eigenfunction_vs_harmonics: cluster unresolved");
  int start = 0;
  for (int c = 0; c < l; ++c) start += report.clusters[c].count;
  const int width = report.clusters[l].count;
  if (width != 2 * l + 1)
    throw std::runtime_error("eigenfunction_vs_harmonics: cluster unresolved");

  const int count = povm.size();
  Eigen::VectorXd sqw(count);
  for (int s = 0; s < count; ++s) sqw[s] = std::sqrt(povm.weight(s));

  // alpha-orthonormal bases of both subspaces via QR on sqrt(alpha)-scaled
  // samples; principal angles from the SVD of the cross Gram.
  auto orthonormal = [&](const Eigen::MatrixXd& cols) {
    Eigen::MatrixXd scaled = sqw.asDiagonal() * cols;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(scaled);
    return Eigen::MatrixXd(qr.householderQ() *
                           Eigen::MatrixXd::Identity(count, cols.cols()));
  };

  Eigen::MatrixXd eig_cols(count, width);
  for (int k = 0; k < width; ++k)
    eig_cols.col(k) = report.eigenfunctions[start + k].values;
  const Eigen::MatrixXd q1 = orthonormal(eig_cols);
  const Eigen::MatrixXd q2 = orthonormal(harmonic_samples(frame.quadrature, l));

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(q1.transpose() * q2);
  const double sigma_min =
      std::clamp(svd.singularValues().minCoeff(), -1.0, 1.0);
  return std::acos(sigma_min);
}

}  // namespace berezin
