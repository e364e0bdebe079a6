// noise.hpp - quantum noise of approximate measurements and the Lueders
// repeated-measurement Markov chain. The minimal relative noise at the
// maximally mixed state equals the spectral gap; the chain's transition
// matrix is the Berezin matrix, and powers of the channel drive any state
// to 1/n at rate gamma_1.

#pragma once

#include <cstdint>

#include "berezin/spectral.hpp"

namespace berezin {

/// Delta_W(phi) = T(phi^2) - T(phi)^2; positive semidefinite.
HermitianOperator noise_operator(const FinitePovm& povm, const ObservableFunction& phi);

struct NoiseReport {
  double minimal_noise = 0.0;        // 1 - gamma_1, spectral route
  ObservableFunction argmin_function;  // the gamma_1 eigenfunction
  double gap_crosscheck = 0.0;       // geometric route (moment identity)
};

/// inf over nonconstant phi of ((Delta_W(phi), 1/n)) / Var(phi, mu_{1/n}),
/// computed spectrally. Throws for degenerate POVMs (all states equal or a
/// single point).
NoiseReport minimal_noise(const FinitePovm& povm);

struct MeasurementChain {
  Eigen::MatrixXd transition;      // P[i][j] = n alpha_j ((P_i, P_j))
  std::vector<double> stationary;  // alpha
  std::vector<std::string> labels;
};

/// Markov chain of repeated Lueders measurements; requires a pure POVM.
MeasurementChain lueders_chain(const FinitePovm& povm);

/// ||E^k(rho_0) - 1/n||_2 for k = 0..k_max. Requires positive gap.
std::vector<double> channel_power_convergence(const FinitePovm& povm,
                                              const DensityOperator& rho0,
                                              int k_max);

/// Geometric decay rate fitted on log-norms, excluding the first 20% of the
/// trace and values below the 1e-13 floor.
double fitted_decay_rate(const std::vector<double>& norms);

struct ChainSimulation {
  std::vector<int> sample_trajectory;  // run 0
  Eigen::VectorXd empirical;           // distribution of the final state
  Eigen::VectorXd exact;               // start row of transition^steps
  double tv_to_exact = 0.0;
  double tv_to_stationary = 0.0;
  double sampling_sigma = 0.0;  // sum_j sqrt(p_j (1-p_j) / runs) / 2
  std::uint64_t seed = 0;
};

/// Deterministic given the seed; trajectory r draws from an engine seeded
/// with seed ^ r. Reductions are order-independent sums.
ChainSimulation simulate_chain(const MeasurementChain& chain, int start, int steps,
                               int runs, std::uint64_t seed);

}  // namespace berezin
