// spectral.hpp - spectral gap of the Berezin transform and the moment
// geometry of the push-forward measure on state space: center of mass,
// mean squared distance I, best-fit-line residual J, the first
// eigenfunction as projection to the best fitting line, diffusion
// distance, and Wasserstein-type perturbation bounds.

#pragma once

#include "berezin/povm.hpp"

namespace berezin {

struct ClusterInfo {
  double value = 0.0;  // representative (mean) eigenvalue of the cluster
  int count = 0;
};

/// Relative width used to merge nearby eigenvalues into multiplicity
/// clusters when reporting.
inline constexpr double kClusterTol = 1e-7;

struct SpectralReport {
  std::vector<double> eigenvalues;  // descending, gamma_0 >= gamma_1 >= ...
  double gap = 0.0;                 // 1 - gamma_1
  std::vector<ObservableFunction> eigenfunctions;  // alpha-orthonormal; may be
                                                   // empty if not requested
  std::vector<ClusterInfo> clusters;

  double gamma(int k) const { return eigenvalues[static_cast<size_t>(k)]; }
};

/// Spectrum of the symmetrized Berezin matrix, eigenfunctions mapped back to
/// L2(Omega, alpha). The first eigenfunction is the constant function; within
/// a degenerate top cluster the basis is rotated so this holds. Sign
/// convention: first nonzero component of each eigenfunction is positive.
SpectralReport berezin_spectrum(const FinitePovm& povm,
                                bool with_eigenfunctions = true);

struct MomentData {
  HermitianOperator center;             // C(sigma_W), equals 1/n for a POVM
  double moment_i = 0.0;                // I: mean squared distance from center
  double moment_j = 0.0;                // J: best-fit-line residual
  HermitianOperator bestfit_direction;  // traceless, HS-unit
};

MomentData moments(const FinitePovm& povm);

/// 1 - n (I - J); agrees with the spectral gap of the Berezin transform.
double gap_via_geometry(const FinitePovm& povm);

/// psi_1(s) = ((F(s), A)) / sqrt(I - J) with A the best-fit direction.
/// Throws if I - J < 1e-12 (measure concentrated at the center).
ObservableFunction first_eigenfunction(const FinitePovm& povm);

/// D_tau(s,t) = sqrt(sum_{k>=1} gamma_k^{2 tau} (psi_k(s) - psi_k(t))^2),
/// restricted to eigenvalues above 1e-10.
double diffusion_distance(const FinitePovm& povm, double tau,
                          const std::string& s, const std::string& t);
double diffusion_distance(const SpectralReport& report, double tau, int s, int t);

enum class WassersteinMode {
  kIdentityCoupling,  // same index set and weights: max_s ||F1(s)-F2(s)||
  kAssignment,        // uniform equal-size measures: exact bottleneck value
};

/// Upper bound for (identity mode) or exact value of (assignment mode) the
/// L-infinity Wasserstein distance between the push-forward measures.
double wasserstein_inf_bound(const FinitePovm& a, const FinitePovm& b,
                             WassersteinMode mode);

}  // namespace berezin
