// cp1.hpp - coherent-state POVMs on the round sphere of area 1 at tensor
// level p, built from an exact product quadrature (Gauss-Legendre in
// cos(theta) x uniform azimuth). The discretized objects integrate every
// entry of F (x) F exactly, so the spectra reproduce the continuum Berezin
// transform to machine precision; gamma_1 = p/(p+2) serves as the anchor.

#pragma once

#include "berezin/spectral.hpp"

namespace berezin {

struct SphereQuadrature {
  std::vector<double> theta;  // polar angles
  std::vector<double> phi;    // azimuths
  std::vector<double> weights;  // positive, sum 1
  int exactness_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre p+1 nodes in cos(theta) times 2p+2 uniform azimuth nodes;
/// exactness degree 2p+1.
SphereQuadrature build_sphere_quadrature(int p);

/// Gauss-Legendre nodes and weights on [-1,1] (weights sum to 2).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Coherent spinors and state amplitudes at the quadrature nodes of level p.
struct CoherentFrame {
  int p = 0;
  SphereQuadrature quadrature;
  std::vector<Eigen::Vector2cd> spinors;   // unit (a, b) per node
  std::vector<Eigen::VectorXcd> amplitudes;  // symmetric-power components
};

CoherentFrame build_coherent_frame(int p);

/// Pure POVM of the coherent projectors at the quadrature nodes; validates
/// at 1e-10.
FinitePovm build_cp1_povm(int p);
FinitePovm cp1_povm_from_frame(const CoherentFrame& frame);

/// Exact spectral gap 2/(p+2).
double gap_reference(int p);

/// Laplace-Beltrami data of the area-1 round sphere at harmonic degree l:
/// eigenvalue 4 pi l(l+1), multiplicity 2l+1.
std::pair<double, int> laplace_reference(int l);

/// Closed-form Berezin eigenvalue on the degree-l cluster,
/// p!(p+1)! / ((p-l)! (p+l+1)!). Confirmed against the quadrature route in
/// the test suite before being used as an oracle.
double cluster_eigenvalue_reference(int p, int l);

struct AsymptoticsRow {
  int p = 0;
  int l = 0;
  double gamma = 0.0;           // cluster mean
  double p_times_defect = 0.0;  // p (1 - gamma)
  double target = 0.0;          // l (l+1)
  double residual = 0.0;        // |p (1 - gamma) - l (l+1)|
};

/// Cluster the spectrum of B_p by the 1e-7 rule for each p; cluster l must
/// have size 2l+1 (throws otherwise) and is compared against the
/// Laplace-Beltrami prediction.
std::vector<AsymptoticsRow> verify_gap_asymptotics(const std::vector<int>& p_list,
                                                   int k_max);

/// Largest principal angle (radians) between the degree-l eigenfunction
/// cluster of B_p and the sampled real spherical harmonics of degree l,
/// both alpha-orthonormalized at the quadrature nodes.
double eigenfunction_vs_harmonics(int p, int l);

/// Real spherical-harmonic samples of degree l at the quadrature nodes,
/// one column per harmonic (2l+1 columns), not yet orthonormalized.
Eigen::MatrixXd harmonic_samples(const SphereQuadrature& quad, int l);

}  // namespace berezin
