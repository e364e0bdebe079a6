#include <doctest.h>

#include "berezin/cp1.hpp"
#include "berezin/noise.hpp"
#include "corpus.hpp"

using namespace berezin;

namespace {

FinitePovm projective_povm(int n) {
  std::vector<std::string> labels;
  std::vector<double> weights(n, 1.0 / n);
  std::vector<DensityOperator> states;
  for (int i = 0; i < n; ++i) {
    labels.push_back("e" + std::to_string(i));
    states.push_back(projector_onto(Eigen::VectorXcd::Unit(n, i)));
  }
  return FinitePovm(n, labels, weights, states);
}

double alpha_norm(const FinitePovm& povm, const Eigen::VectorXd& v) {
  double acc = 0;
  for (int s = 0; s < povm.size(); ++s) acc += v[s] * v[s] * povm.weight(s);
  return std::sqrt(acc);
}

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("noise operator") {
  testing::Rng rng(71);
  const auto povm = testing::random_pure_povm(rng, 3, 9);

  ObservableFunction constant;
  constant.values = Eigen::VectorXd::Constant(povm.size(), 2.7);
  CHECK(noise_operator(povm, constant).hs_norm() <= 1e-10);

  // Exact (projective) measurements produce no noise for any function.
  const auto proj = projective_povm(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto phi = testing::random_observable(rng, 4);
    CHECK(noise_operator(proj, phi).hs_norm() <= 1e-12);
  }

  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = testing::random_observable(rng, povm.size());
    CHECK(hermitian_eigenvalues(noise_operator(povm, phi))[0] >= -1e-9);
  }
}

TEST_CASE("minimal noise equals the gap") {
  const auto cp1 = build_cp1_povm(2);
  const auto report = minimal_noise(cp1);
  CHECK(report.minimal_noise == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(report.minimal_noise - report.gap_crosscheck) <= 1e-9);

  CHECK(minimal_noise(projective_povm(3)).minimal_noise ==
        doctest::Approx(0.0).epsilon(1e-10));

  testing::Rng rng(72);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + int(rng() % 3);
    const auto povm = testing::random_povm(rng, n, 2 * n + int(rng() % 6));
    const auto r = minimal_noise(povm);
    CHECK(std::abs(r.minimal_noise - r.gap_crosscheck) <= 1e-9);

    // Variational principle: the Rayleigh quotient of any nonconstant phi
    // dominates the minimal noise, with equality at the argmin function.
    const Eigen::MatrixXd m = berezin_matrix(povm);
    auto quotient = [&](const Eigen::VectorXd& phi) {
      double num = 0, mean = 0, second = 0;
      const Eigen::VectorXd bphi = m * phi;
      for (int s = 0; s < povm.size(); ++s) {
        num += (phi[s] - bphi[s]) * phi[s] * povm.weight(s);
        mean += phi[s] * povm.weight(s);
        second += phi[s] * phi[s] * povm.weight(s);
      }
      return num / (second - mean * mean);
    };
    for (int k = 0; k < 5; ++k) {
      const auto phi = testing::random_observable(rng, povm.size());
      CHECK(quotient(phi.values) >= r.minimal_noise - 1e-9);
    }
    CHECK(quotient(r.argmin_function.values) ==
          doctest::Approx(r.minimal_noise).epsilon(1e-8));

    // ((Delta_W(phi), theta_0)) = (((1-B) phi, phi))_alpha.
    const auto phi = testing::random_observable(rng, povm.size());
    const auto delta = noise_operator(povm, phi);
    const double lhs = hs_inner(delta, HermitianOperator(
        Eigen::MatrixXcd::Identity(n, n) / double(n)));
    double rhs = 0;
    const Eigen::VectorXd bphi = m * phi.values;
    for (int s = 0; s < povm.size(); ++s)
      rhs += (phi.values[s] - bphi[s]) * phi.values[s] * povm.weight(s);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }

  // Degenerate POVM: two copies of the maximally mixed state.
  FinitePovm degenerate(
      2, {"a", "b"}, {0.5, 0.5},
      {DensityOperator(HermitianOperator(Eigen::MatrixXcd::Identity(2, 2) / 2)),
       DensityOperator(HermitianOperator(Eigen::MatrixXcd::Identity(2, 2) / 2))});
  CHECK_THROWS_AS(minimal_noise(degenerate), std::runtime_error);
}

TEST_CASE("variance decomposition and unbiasedness") {
  testing::Rng rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + int(rng() % 3);
    const auto povm = testing::random_povm(rng, n, 2 * n + 3);
    const auto rho = projector_onto(testing::random_unit_vector(rng, n));
    const auto phi = testing::random_observable(rng, povm.size());

    // Reading distribution mu_rho(s) = n alpha_s ((F(s), rho)).
    Eigen::VectorXd mu(povm.size());
    for (int s = 0; s < povm.size(); ++s)
      mu[s] = n * povm.weight(s) * hs_inner(povm.state(s).op(), rho.op());
    CHECK(mu.minCoeff() >= -1e-12);
    CHECK(mu.sum() == doctest::Approx(1.0).epsilon(1e-10));

    double mean = 0, second = 0;
    for (int s = 0; s < povm.size(); ++s) {
      mean += phi.values[s] * mu[s];
      second += phi.values[s] * phi.values[s] * mu[s];
    }
    const auto a = quantize(povm, phi);
    CHECK(mean == doctest::Approx(hs_inner(a, rho.op())).epsilon(1e-10));

    const double var_reading = second - mean * mean;
    const double ea = hs_inner(a, rho.op());
    const double var_quantum =
        hs_inner(HermitianOperator(a.matrix() * a.matrix()), rho.op()) - ea * ea;
    const double noise = hs_inner(noise_operator(povm, phi), rho.op());
    CHECK(var_reading == doctest::Approx(var_quantum + noise).epsilon(1e-9));
  }
}

TEST_CASE("lueders chain") {
  const auto proj = projective_povm(3);
  const auto chain = lueders_chain(proj);
  CHECK((chain.transition - Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-12);

  const auto cp1 = build_cp1_povm(2);
  const auto c2 = lueders_chain(cp1);
  for (int i = 0; i < c2.transition.rows(); ++i)
    CHECK(c2.transition.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));

  testing::Rng rng(74);
  for (int trial = 0; trial < 6; ++trial) {
    const auto povm = testing::random_pure_povm(rng, 3, 8);
    const auto chain_t = lueders_chain(povm);
    // Reversibility and spectrum agreement with the Berezin matrix.
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        CHECK(chain_t.stationary[i] * chain_t.transition(i, j) ==
              doctest::Approx(chain_t.stationary[j] * chain_t.transition(j, i))
                  .epsilon(1e-10));
    const auto report = berezin_spectrum(povm, false);
    Eigen::VectorXcd ev = chain_t.transition.eigenvalues();
    std::vector<double> real_parts(ev.size());
    for (int k = 0; k < ev.size(); ++k) real_parts[k] = ev[k].real();
    std::sort(real_parts.rbegin(), real_parts.rend());
    for (size_t k = 0; k < real_parts.size(); ++k)
      CHECK(real_parts[k] == doctest::Approx(report.eigenvalues[k]).epsilon(1e-9));
  }

  CHECK_THROWS_AS(lueders_chain(testing::random_mixed_povm(rng, 3, 7)),
                  std::invalid_argument);
}

TEST_CASE("channel power convergence") {
  const int n = 3;
  const auto single = FinitePovm(
      n, {"omega"}, {1.0},
      {DensityOperator(HermitianOperator(Eigen::MatrixXcd::Identity(n, n) / n))});
  testing::Rng rng(75);
  const auto rho = testing::random_density(rng, n);
  const auto norms_single = channel_power_convergence(single, rho, 4);
  CHECK(norms_single[1] <= 1e-12);  // one application reaches 1/n exactly

  const auto cp1 = build_cp1_povm(4);
  const auto mixed = DensityOperator(
      HermitianOperator(Eigen::MatrixXcd::Identity(5, 5) / 5.0));
  const auto at_fixed_point = channel_power_convergence(cp1, mixed, 6);
  for (double v : at_fixed_point) CHECK(v <= 1e-12);

  const auto rho5 = projector_onto(testing::random_unit_vector(rng, 5));
  const auto norms = channel_power_convergence(cp1, rho5, 40);
  const double rate = fitted_decay_rate(norms);
  CHECK(std::abs(rate - 2.0 / 3) <= 0.1 * 2.0 / 3);  // gamma_1 = p/(p+2)

  const auto proj = projective_povm(3);
  CHECK_THROWS_AS(channel_power_convergence(proj, rho, 5), std::runtime_error);
}

TEST_CASE("chain simulation") {
  // Identity chain: the trajectory never moves.
  const auto proj = projective_povm(3);
  const auto id_chain = lueders_chain(proj);
  const auto sim0 = simulate_chain(id_chain, 1, 20, 50, 7);
  for (int state : sim0.sample_trajectory) CHECK(state == 1);
  CHECK(sim0.empirical[1] == doctest::Approx(1.0));

  // Seed determinism.
  const auto cp1 = build_cp1_povm(2);
  const auto chain = lueders_chain(cp1);
  const auto a = simulate_chain(chain, 0, 15, 400, 42);
  const auto b = simulate_chain(chain, 0, 15, 400, 42);
  CHECK(a.sample_trajectory == b.sample_trajectory);
  CHECK((a.empirical - b.empirical).norm() == 0.0);
  const auto c = simulate_chain(chain, 0, 15, 400, 43);
  CHECK(a.sample_trajectory != c.sample_trajectory);

  // Monte Carlo matches the exact matrix power within 3 sigma.
  const auto sim = simulate_chain(chain, 0, 12, 4000, 2024);
  CHECK(sim.tv_to_exact <= 3.0 * sim.sampling_sigma);
  // After many steps the chain has mixed: empirical distance to alpha is
  // also sampling-limited.
  CHECK(sim.tv_to_stationary <= 4.0 * sim.sampling_sigma);
}

}  // TEST_SUITE
