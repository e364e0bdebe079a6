#include <doctest.h>

#include <functional>
#include <numbers>

#include "berezin/cp1.hpp"
#include "berezin/noise.hpp"
#include "corpus.hpp"

using namespace berezin;

namespace {

// Brute-force sphere average on a fine product grid, the quadrature oracle.
double fine_grid_average(const std::function<double(double, double)>& f) {
  const int nt = 400, np = 400;
  double acc = 0, wsum = 0;
  for (int i = 0; i < nt; ++i) {
    // midpoint rule in t = cos(theta)
    const double t = -1.0 + (i + 0.5) * 2.0 / nt;
    for (int j = 0; j < np; ++j) {
      const double phi = (j + 0.5) * 2.0 * std::numbers::pi / np;
      acc += f(std::acos(t), phi);
      wsum += 1.0;
    }
  }
  return acc / wsum;
}

double quad_integral(const SphereQuadrature& q,
                     const std::function<double(double, double)>& f) {
  double acc = 0;
  for (int k = 0; k < q.size(); ++k) acc += q.weights[k] * f(q.theta[k], q.phi[k]);
  return acc;
}

}  // namespace

TEST_SUITE("cp1") {

TEST_CASE("quadrature integrates sphere moments exactly") {
  const auto quad = build_sphere_quadrature(3);
  double wsum = 0;
  for (double w : quad.weights) {
    CHECK(w > 0);
    wsum += w;
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(quad.size() == 4 * 8);
  CHECK(quad.exactness_degree == 7);

  // ∫ z^2 = 1/3 (classical moment; the fine-grid oracle agrees).
  auto z2 = [](double th, double) { return std::cos(th) * std::cos(th); };
  CHECK(quad_integral(quad, z2) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(fine_grid_average(z2) == doctest::Approx(1.0 / 3).epsilon(1e-4));

  // Mixed monomials x^a y^b z^c up to the exactness degree.
  testing::Rng rng(61);
  for (int trial = 0; trial < 12; ++trial) {
    const int a = int(rng() % 3), b = int(rng() % 3), c = int(rng() % 3);
    if (a + b + c > quad.exactness_degree) continue;
    auto mono = [=](double th, double ph) {
      const double x = std::sin(th) * std::cos(ph);
      const double y = std::sin(th) * std::sin(ph);
      const double z = std::cos(th);
      return std::pow(x, a) * std::pow(y, b) * std::pow(z, c);
    };
    CHECK(quad_integral(quad, mono) ==
          doctest::Approx(fine_grid_average(mono)).scale(1.0).epsilon(1e-4));
  }
}

TEST_CASE("coherent POVM validates and is pure") {
  for (int p : {1, 2, 5, 9}) {
    const auto povm = build_cp1_povm(p);
    CHECK(povm.dim() == p + 1);
    const auto report = validate(povm, 1e-10);
    CHECK(report.passed());
    if (p == 1) CHECK(report.resolution_defect <= 1e-12);
  }
  CHECK(purity(build_cp1_povm(3)).is_pure);
}

TEST_CASE("overlap kernel identity") {
  const int p = 4;
  const auto frame = build_coherent_frame(p);
  const auto povm = cp1_povm_from_frame(frame);
  testing::Rng rng(62);
  for (int trial = 0; trial < 30; ++trial) {
    const int s = int(rng() % povm.size());
    const int t = int(rng() % povm.size());
    const double lhs = (p + 1) * hs_inner(povm.state(s).op(), povm.state(t).op());
    const cplx sp = frame.spinors[s].dot(frame.spinors[t]);
    CHECK(lhs == doctest::Approx((p + 1) * std::pow(std::norm(sp), p)).epsilon(1e-12));
  }
}

TEST_CASE("exact gap formula") {
  for (int p : {1, 2, 3, 6, 10}) {
    const auto report = berezin_spectrum(build_cp1_povm(p), false);
    CHECK(std::abs(report.gap - gap_reference(p)) <= 1e-10);
  }
  CHECK(gap_reference(2) == doctest::Approx(0.5));
  CHECK(gap_reference(10) == doctest::Approx(1.0 / 6));
}

TEST_CASE("laplace reference values") {
  CHECK(laplace_reference(0).first == doctest::Approx(0.0));
  CHECK(laplace_reference(0).second == 1);
  CHECK(laplace_reference(1).first == doctest::Approx(8 * std::numbers::pi));
  CHECK(laplace_reference(1).second == 3);
  CHECK(laplace_reference(2).first == doctest::Approx(24 * std::numbers::pi));
  CHECK(laplace_reference(2).second == 5);
}

TEST_CASE("closed-form cluster eigenvalues confirmed by the quadrature route") {
  for (int p : {2, 4, 7}) {
    const auto report = berezin_spectrum(build_cp1_povm(p), false);
    int idx = 0;
    for (int l = 0; l <= p; ++l) {
      const double ref = cluster_eigenvalue_reference(p, l);
      if (ref < 1e-7) break;  // deep clusters sink into rounding noise
      for (int m = 0; m < 2 * l + 1; ++m)
        CHECK(report.eigenvalues[idx++] == doctest::Approx(ref).epsilon(1e-9));
    }
  }
  CHECK(cluster_eigenvalue_reference(12, 2) ==
        doctest::Approx(12.0 * 11 / (14.0 * 15)).epsilon(1e-14));
}

TEST_CASE("asymptotics table") {
  const auto rows = verify_gap_asymptotics({8, 16}, 3);
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) {
    CHECK(row.target == doctest::Approx(double(row.l) * (row.l + 1)));
    CHECK(row.gamma ==
          doctest::Approx(cluster_eigenvalue_reference(row.p, row.l)).epsilon(1e-10));
    if (row.l == 1)
      CHECK(row.residual == doctest::Approx(4.0 / (row.p + 2)).epsilon(1e-8));
    // The O(p^{-2}) claim: residual * p stays bounded (by 4, 24, 84 for
    // l = 1, 2, 3; the exact closed forms are monotone in p).
    const double cap = row.l == 1 ? 4.0 : (row.l == 2 ? 24.0 : 84.0);
    CHECK(row.residual * row.p <= cap + 1e-9);
  }
}

TEST_CASE("eigenfunction clusters match sampled harmonics") {
  CHECK(eigenfunction_vs_harmonics(6, 0) <= 1e-6);
  // Exact SU(2) equivariance makes the eigenspaces equal to the harmonic
  // spans at every level; angles are pure rounding noise.
  CHECK(eigenfunction_vs_harmonics(8, 1) <= 1e-6);
  CHECK(eigenfunction_vs_harmonics(8, 2) <= 1e-6);
}

TEST_CASE("SU(2) equivariance of the spectrum") {
  testing::Rng rng(63);
  const int p = 5;
  const auto frame = build_coherent_frame(p);

  // Random SU(2) element.
  Eigen::VectorXcd g = testing::random_gaussian_complex(rng, 2, 1);
  g.normalize();
  Eigen::Matrix2cd u;
  u << g[0], -std::conj(g[1]), g[1], std::conj(g[0]);

  CoherentFrame rotated = frame;
  for (int k = 0; k < rotated.quadrature.size(); ++k) {
    const Eigen::Vector2cd v = u * frame.spinors[k];
    rotated.spinors[k] = v;
    Eigen::VectorXcd amp(p + 1);
    double log_b = 0.0;
    for (int j = 0; j <= p; ++j) {
      amp[j] = std::exp(0.5 * log_b) * std::pow(v[0], p - j) * std::pow(v[1], j);
      if (j < p) log_b += std::log(double(p - j)) - std::log(double(j + 1));
    }
    rotated.amplitudes[k] = amp;
  }
  const auto base = berezin_spectrum(cp1_povm_from_frame(frame), false);
  const auto conj = berezin_spectrum(cp1_povm_from_frame(rotated), false);
  for (size_t k = 0; k < base.eigenvalues.size(); ++k)
    CHECK(std::abs(base.eigenvalues[k] - conj.eigenvalues[k]) <= 1e-9);
}

TEST_CASE("pure moment identities at level p") {
  for (int p : {2, 5, 8}) {
    const auto md = moments(build_cp1_povm(p));
    CHECK(md.moment_i == doctest::Approx(1.0 - 1.0 / (p + 1)).epsilon(1e-8));
    CHECK(md.moment_j == doctest::Approx(1.0 - 2.0 / (p + 2)).epsilon(1e-8));
  }
}

TEST_CASE("markov structure and simplicity of the top eigenvalue") {
  const auto povm = build_cp1_povm(4);
  const auto m = berezin_matrix(povm);
  for (int t = 0; t < povm.size(); ++t)
    CHECK(m.row(t).sum() == doctest::Approx(1.0).epsilon(1e-10));
  for (int t = 0; t < povm.size(); t += 7)
    for (int s = 0; s < povm.size(); s += 5)
      CHECK(povm.weight(t) * m(t, s) ==
            doctest::Approx(povm.weight(s) * m(s, t)).epsilon(1e-12));

  double fitted_c = -std::numeric_limits<double>::infinity();
  for (int p : {1, 2, 4, 8, 12}) {
    const auto report = berezin_spectrum(build_cp1_povm(p), false);
    CHECK(report.eigenvalues[1] < 1.0 - 1e-6);
    fitted_c = std::max(fitted_c, (report.gap - 2.0 / p) * p * p);
    CHECK(report.gap <= 2.0 / p + 1e-12);
  }
  INFO("fitted C in gap <= 2/p + C/p^2: ", fitted_c);
  CHECK(fitted_c <= 0.0 + 1e-12);  // exact gap 2/(p+2) stays below 2/p
}

}  // TEST_SUITE
