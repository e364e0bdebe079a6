#include "berezin/spectral.hpp"

#include <cmath>

#include "berezin/assignment.hpp"

namespace berezin {

namespace {

void fix_sign(Eigen::VectorXd& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return;
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-9 * scale) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

std::vector<ClusterInfo> cluster_eigenvalues(const std::vector<double>& desc) {
  std::vector<ClusterInfo> clusters;
  for (double v : desc) {
    if (!clusters.empty() &&
        std::abs(v - clusters.back().value) <=
            kClusterTol * std::max(1.0, std::abs(clusters.back().value))) {
      auto& c = clusters.back();
      c.value = (c.value * c.count + v) / (c.count + 1);
      ++c.count;
    } else {
      clusters.push_back({v, 1});
    }
  }
  return clusters;
}

}  // namespace

SpectralReport berezin_spectrum(const FinitePovm& povm, bool with_eigenfunctions) {
  const int big_n = povm.size();
  const Eigen::MatrixXd s = berezin_matrix_symmetrized(povm);

  SpectralReport report;
  Eigen::VectorXd sqw(big_n);
  for (int i = 0; i < big_n; ++i) sqw[i] = std::sqrt(povm.weight(i));

  if (!with_eigenfunctions) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("berezin_spectrum: eigensolver failed");
    report.eigenvalues.assign(es.eigenvalues().data(),
                              es.eigenvalues().data() + big_n);
    std::reverse(report.eigenvalues.begin(), report.eigenvalues.end());
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("berezin_spectrum: eigensolver failed");
    report.eigenvalues.assign(es.eigenvalues().data(),
                              es.eigenvalues().data() + big_n);
    std::reverse(report.eigenvalues.begin(), report.eigenvalues.end());
    Eigen::MatrixXd vec = es.eigenvectors().rowwise().reverse();

    // sqrt(alpha) is an exact eigenvector for gamma_0 = 1. When the top
    // eigenvalue is degenerate the solver returns an arbitrary basis of the
    // cluster; rotate it so the first column is that vector and the rest
    // stay orthonormal, making psi_0 the constant function.
    int top = 1;
    while (top < big_n && report.eigenvalues[top] > 1.0 - 1e-9) ++top;
    if (top >= 1) {
      Eigen::MatrixXd block = vec.leftCols(top);
      Eigen::VectorXd u = block * (block.transpose() * sqw);
      if (u.norm() > 1e-8) {
        u.normalize();
        Eigen::MatrixXd rotated(big_n, top);
        rotated.col(0) = u;
        int filled = 1;
        for (int c = 0; c < top && filled < top; ++c) {
          Eigen::VectorXd w = block.col(c);
          w -= rotated.leftCols(filled) * (rotated.leftCols(filled).transpose() * w);
          if (w.norm() > 1e-6) rotated.col(filled++) = w.normalized();
        }
        if (filled == top) vec.leftCols(top) = rotated;
      }
    }

    report.eigenfunctions.resize(big_n);
    for (int k = 0; k < big_n; ++k) {
      Eigen::VectorXd psi = vec.col(k).cwiseQuotient(sqw);
      fix_sign(psi);
      report.eigenfunctions[k].values = std::move(psi);
    }
  }

  report.gap = 1.0 - (big_n >= 2 ? report.eigenvalues[1] : 0.0);
  report.clusters = cluster_eigenvalues(report.eigenvalues);
  return report;
}

MomentData moments(const FinitePovm& povm) {
  const int n = povm.dim();
  HermitianBasis basis(n);

  Eigen::VectorXd center = Eigen::VectorXd::Zero(basis.dim());
  for (int s = 0; s < povm.size(); ++s)
    center += povm.weight(s) * basis.coords(povm.state(s).matrix());

  double moment_i = 0.0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
  for (int s = 0; s < povm.size(); ++s) {
    Eigen::VectorXd g = basis.coords(povm.state(s).matrix()) - center;
    moment_i += povm.weight(s) * g.squaredNorm();
    cov.selfadjointView<Eigen::Lower>().rankUpdate(g, povm.weight(s));
  }
  cov = cov.selfadjointView<Eigen::Lower>();

  // The best fitting line passes through the center of mass; J is I minus
  // the top eigenvalue of the covariance form over traceless directions.
  const Eigen::MatrixXd tl = basis.traceless_subspace();
  Eigen::MatrixXd reduced = tl.transpose() * cov * tl;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reduced);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("moments: covariance eigensolver failed");
  const int last = static_cast<int>(reduced.rows()) - 1;
  const double k_max = std::max(0.0, es.eigenvalues()[last]);

  Eigen::VectorXd dir = tl * es.eigenvectors().col(last);
  fix_sign(dir);

  MomentData md{basis.from_coords(center), moment_i,
                std::max(0.0, moment_i - k_max), basis.from_coords(dir)};
  return md;
}

double gap_via_geometry(const FinitePovm& povm) {
  const MomentData md = moments(povm);
  return 1.0 - povm.dim() * (md.moment_i - md.moment_j);
}

ObservableFunction first_eigenfunction(const FinitePovm& povm) {
  const MomentData md = moments(povm);
  const double spread = md.moment_i - md.moment_j;
  if (spread < 1e-12)
    throw std::runtime_error(
        "first_eigenfunction: degenerate measure (I - J < 1e-12)");
  ObservableFunction psi;
  psi.values.resize(povm.size());
  for (int s = 0; s < povm.size(); ++s)
    psi.values[s] =
        hs_inner(povm.state(s).op(), md.bestfit_direction) / std::sqrt(spread);
  fix_sign(psi.values);
  return psi;
}

double diffusion_distance(const SpectralReport& report, double tau, int s, int t) {
  if (report.eigenfunctions.empty())
    throw std::invalid_argument("diffusion_distance: report lacks eigenfunctions");
  double acc = 0.0;
  for (size_t k = 1; k < report.eigenvalues.size(); ++k) {
    const double g = report.eigenvalues[k];
    if (g <= 1e-10) break;  // descending order
    const double d = report.eigenfunctions[k].values[s] -
                     report.eigenfunctions[k].values[t];
    acc += std::pow(g, 2.0 * tau) * d * d;
  }
  return std::sqrt(acc);
}

double diffusion_distance(const FinitePovm& povm, double tau,
                          const std::string& s, const std::string& t) {
  const SpectralReport report = berezin_spectrum(povm, true);
  return diffusion_distance(report, tau, povm.index_of(s), povm.index_of(t));
}

double wasserstein_inf_bound(const FinitePovm& a, const FinitePovm& b,
                             WassersteinMode mode) {
  detail::require(a.dim() == b.dim(),
                  "wasserstein_inf_bound: Hilbert dimension mismatch");
  detail::require(a.size() == b.size(),
                  "wasserstein_inf_bound: support size mismatch");
  const int count = a.size();

  if (mode == WassersteinMode::kIdentityCoupling) {
    for (int s = 0; s < count; ++s)
      detail::require(std::abs(a.weight(s) - b.weight(s)) <= 1e-12,
                      "wasserstein_inf_bound: identity coupling needs identical weights");
    double best = 0.0;
    for (int s = 0; s < count; ++s)
      best = std::max(best, (a.state(s).matrix() - b.state(s).matrix()).norm());
    return best;
  }

  for (int s = 0; s < count; ++s) {
    detail::require(std::abs(a.weight(s) - 1.0 / count) <= 1e-12 &&
                        std::abs(b.weight(s) - 1.0 / count) <= 1e-12,
                    "wasserstein_inf_bound: assignment mode needs uniform weights");
  }
  Eigen::MatrixXd cost(count, count);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j)
      cost(i, j) = (a.state(i).matrix() - b.state(j).matrix()).norm();
  return bottleneck_assignment(cost).value;
}

}  // namespace berezin
