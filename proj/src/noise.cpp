#include "berezin/noise.hpp"

#include <cmath>
#include <random>

namespace berezin {

HermitianOperator noise_operator(const FinitePovm& povm, const ObservableFunction& phi) {
  detail::require(phi.size() == povm.size(), "noise_operator: length mismatch");
  ObservableFunction phi2;
  phi2.values = phi.values.cwiseProduct(phi.values);
  const HermitianOperator t1 = quantize(povm, phi);
  const HermitianOperator t2 = quantize(povm, phi2);
  return HermitianOperator(t2.matrix() - t1.matrix() * t1.matrix());
}

NoiseReport minimal_noise(const FinitePovm& povm) {
  detail::require(povm.size() >= 2, "minimal_noise: need at least 2 points");
  const Eigen::MatrixXd gram = state_gram(povm);
  double max_dist2 = 0.0;
  for (int s = 0; s < povm.size(); ++s)
    for (int t = s + 1; t < povm.size(); ++t)
      max_dist2 = std::max(max_dist2, gram(s, s) + gram(t, t) - 2 * gram(s, t));
  if (max_dist2 < 1e-24)
    throw std::runtime_error("minimal_noise: degenerate POVM, all states equal");

  const SpectralReport report = berezin_spectrum(povm, true);
  NoiseReport out;
  out.minimal_noise = report.gap;
  out.argmin_function = report.eigenfunctions[1];
  out.gap_crosscheck = gap_via_geometry(povm);
  return out;
}

MeasurementChain lueders_chain(const FinitePovm& povm) {
  const PurityReport pr = purity(povm);
  if (!pr.is_pure)
    throw std::invalid_argument("lueders_chain: POVM must be pure");
  MeasurementChain chain;
  chain.transition = berezin_matrix(povm);
  chain.stationary = povm.weights();
  chain.labels = povm.labels();
  return chain;
}

std::vector<double> channel_power_convergence(const FinitePovm& povm,
                                              const DensityOperator& rho0,
                                              int k_max) {
  detail::require(rho0.dim() == povm.dim(),
                  "channel_power_convergence: dimension mismatch");
  const SpectralReport report = berezin_spectrum(povm, false);
  if (report.gap <= 1e-10)
    throw std::runtime_error("channel_power_convergence: zero spectral gap");

  const int n = povm.dim();
  HermitianBasis basis(n);
  const Eigen::MatrixXd k = channel_matrix(povm);
  const Eigen::VectorXd target =
      basis.coords(Eigen::MatrixXcd::Identity(n, n) / double(n));
  Eigen::VectorXd state = basis.coords(rho0.matrix());
  std::vector<double> norms;
  for (int step = 0; step <= k_max; ++step) {
    norms.push_back((state - target).norm());
    state = k * state;
  }
  return norms;
}

double fitted_decay_rate(const std::vector<double>& norms) {
  std::vector<std::pair<double, double>> pts;
  const size_t start = norms.size() / 5;
  for (size_t i = start; i < norms.size(); ++i)
    if (norms[i] > 1e-13) pts.emplace_back(double(i), std::log(norms[i]));
  if (pts.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double m = double(pts.size());
  return std::exp((m * sxy - sx * sy) / (m * sxx - sx * sx));
}

ChainSimulation simulate_chain(const MeasurementChain& chain, int start, int steps,
                               int runs, std::uint64_t seed) {
  const int n = static_cast<int>(chain.transition.rows());
  detail::require(start >= 0 && start < n, "simulate_chain: start out of range");
  detail::require(steps >= 0 && runs >= 1, "simulate_chain: bad steps/runs");

  ChainSimulation sim;
  sim.seed = seed;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(n);

  for (int r = 0; r < runs; ++r) {
    std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int state = start;
    std::vector<int> trajectory{state};
    for (int k = 0; k < steps; ++k) {
      const double u = unif(rng);
      double acc = 0.0;
      int next = n - 1;
      for (int j = 0; j < n; ++j) {
        acc += chain.transition(state, j);
        if (u <= acc) {
          next = j;
          break;
        }
      }
      state = next;
      if (r == 0) trajectory.push_back(state);
    }
    if (r == 0) sim.sample_trajectory = std::move(trajectory);
    counts[state] += 1.0;
  }
  sim.empirical = counts / double(runs);

  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
  row[start] = 1.0;
  for (int k = 0; k < steps; ++k) row = row * chain.transition;
  sim.exact = row.transpose();

  double tv_exact = 0.0, tv_stat = 0.0, sigma = 0.0;
  for (int j = 0; j < n; ++j) {
    tv_exact += std::abs(sim.empirical[j] - sim.exact[j]);
    tv_stat += std::abs(sim.empirical[j] - chain.stationary[j]);
    sigma += std::sqrt(std::max(0.0, sim.exact[j] * (1.0 - sim.exact[j]) / runs));
  }
  sim.tv_to_exact = tv_exact / 2;
  sim.tv_to_stationary = tv_stat / 2;
  sim.sampling_sigma = sigma / 2;
  return sim;
}

}  // namespace berezin
