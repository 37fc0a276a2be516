#include <doctest.h>

#include "twistconv/bochner.hpp"

#include "test_support.hpp"

using namespace twistconv;
namespace tt = twistconv::test;

namespace {

Eigen::MatrixXd ident(Eigen::Index d) { return Eigen::MatrixXd::Identity(d, d); }

SemigroupGenerator damping_generator(double kappa) {
  return make_generator(-kappa * ident(2), 2.0 * kappa * ident(2));
}

SemigroupGenerator damping_with_jumps(double kappa) {
  Eigen::VectorXd eta(2);
  eta << 0.8, -0.5;
  return make_generator(-kappa * ident(2), 2.0 * kappa * ident(2),
                        LevyFunction::from_atoms(1, {{eta, 0.6}}));
}

PhaseVector xi2(double a, double b) {
  Eigen::VectorXd x(2);
  x << a, b;
  return PhaseVector(std::move(x));
}

}  // namespace

TEST_CASE("generator inequality spectra") {
  const SymplecticForm J = build_symplectic_form(1);

  CHECK(check_generator(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2), J).is_psd);

  // damping: 2 kappa (I - iJ) has eigenvalues {0, 4 kappa}
  const double kappa = 0.5;
  const PsdReport ok = check_generator(2.0 * kappa * ident(2), -kappa * ident(2), J);
  Eigen::Matrix2cd H = (2.0 * kappa * ident(2)).cast<Complex>() +
                       Complex(0, 1) *
                           ((-kappa * ident(2)).transpose() * J.matrix + J.matrix * (-kappa * ident(2)))
                               .cast<Complex>();
  const auto [lo, hi] = tt::eig2_hermitian(H);
  CHECK(ok.is_psd);
  CHECK(std::abs(ok.min_eigenvalue - lo) <= 1e-14);
  CHECK(hi == doctest::Approx(4.0 * kappa).epsilon(1e-13));

  // insufficient noise rate
  const PsdReport bad = check_generator(kappa * ident(2), -kappa * ident(2), J);
  CHECK_FALSE(bad.is_psd);
  CHECK(bad.min_eigenvalue == doctest::Approx(-kappa).epsilon(1e-13));

  CHECK_THROWS_AS(make_generator(-kappa * ident(2), kappa * ident(2)), AdmissibilityError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 1e-3, 0, 1;
  CHECK_THROWS_AS(make_generator(Eigen::MatrixXd::Zero(2, 2), asym), std::invalid_argument);

  LevyFunction with_b = LevyFunction::zero(1);
  with_b.gaussian_part = ident(2);
  CHECK_THROWS_AS(make_generator(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2), with_b),
                  std::invalid_argument);
}

TEST_CASE("propagate_A") {
  const SemigroupGenerator damp = damping_generator(0.5);
  CHECK((propagate_A(damp, 0.0) - ident(2)).cwiseAbs().maxCoeff() <= 1e-15);
  for (double t : {0.2, 1.0, 3.5})
    CHECK((propagate_A(damp, t) - std::exp(-0.5 * t) * ident(2)).cwiseAbs().maxCoeff() <= 1e-14);

  // rotation: exp(tJ) = [[cos t, sin t], [-sin t, cos t]]
  const SymplecticForm J = build_symplectic_form(1);
  const SemigroupGenerator rot = make_generator(J.matrix, Eigen::MatrixXd::Zero(2, 2));
  for (double t : {0.3, 1.2, 2.9}) {
    Eigen::Matrix2d want;
    want << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    CHECK((propagate_A(rot, t) - want).cwiseAbs().maxCoeff() <= 1e-14);
  }

  // series oracle on random drift matrices
  auto rng = tt::make_rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    auto [A, N] = tt::random_generator_pair(rng, 1 + trial % 2);
    const SemigroupGenerator gen = make_generator(A, N);
    const double t = 0.1 + 0.05 * trial;
    const Eigen::MatrixXd got = propagate_A(gen, t);
    const Eigen::MatrixXd want = tt::taylor_expm(t * A, 60);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, want.cwiseAbs().maxCoeff()));
  }

  CHECK_THROWS_AS(propagate_A(damp, -0.1), std::invalid_argument);
}

TEST_CASE("propagate_M closed forms and quadrature oracle") {
  const double kappa = 0.5;
  const SemigroupGenerator damp = damping_generator(kappa);

  CHECK(propagate_M(damp, 0.0).isZero(0.0));
  for (double t : {0.1, 1.0, 3.0}) {
    const double want = 1.0 - std::exp(-2.0 * kappa * t);
    CHECK((propagate_M(damp, t) - want * ident(2)).cwiseAbs().maxCoeff() <= 1e-13);
  }

  // constant integrand
  const SemigroupGenerator still = make_generator(Eigen::MatrixXd::Zero(2, 2), ident(2));
  for (double t : {0.5, 2.0})
    CHECK((propagate_M(still, t) - t * ident(2)).cwiseAbs().maxCoeff() <= 1e-13);

  // trapezoid quadrature oracle on random generators
  auto rng = tt::make_rng(19);
  for (int trial = 0; trial < 2; ++trial) {
    auto [A, N] = tt::random_generator_pair(rng, 1 + trial);
    const SemigroupGenerator gen = make_generator(A, N);
    for (double t : {0.1, 1.0, 3.0}) {
      const Eigen::MatrixXd got = propagate_M(gen, t);
      const Eigen::MatrixXd oracle = tt::trapezoid_Mt(A, N, t, 100000);
      CHECK((got - oracle).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("propagate_psi") {
  const PhaseVector xi = xi2(1.0, -0.4);

  const SemigroupGenerator jumps = damping_with_jumps(0.5);
  CHECK(std::abs(propagate_psi(jumps, 0.0, xi)) == 0.0);

  // A = 0 freezes the trajectory: psi_t = t gamma(xi)
  Eigen::VectorXd eta(2);
  eta << 0.8, -0.5;
  const LevyFunction gamma = LevyFunction::from_atoms(1, {{eta, 0.6}});
  const SemigroupGenerator frozen = make_generator(Eigen::MatrixXd::Zero(2, 2), ident(2), gamma);
  for (double t : {0.3, 1.7})
    CHECK(std::abs(propagate_psi(frozen, t, xi) - double(t) * eval_gamma(gamma, xi)) <= 1e-10);

  // brute-force quadrature oracle along the contracting trajectory
  for (double t : {0.4, 1.3}) {
    const Complex got = propagate_psi(jumps, t, xi);
    const auto integrand = [&](double tau) {
      return eval_gamma(gamma, PhaseVector(std::exp(-0.5 * tau) * xi.coords));
    };
    const Complex oracle = tt::trapezoid_complex(integrand, 0.0, t, 100000);
    CHECK(std::abs(got - oracle) <= 1e-8);
  }
}

TEST_CASE("channel_at assembles the expected triples") {
  const double kappa = 0.5;
  const SemigroupGenerator damp = damping_generator(kappa);
  const SymplecticForm J = build_symplectic_form(1);

  const TwistedChannel at0 = channel_at(damp, 0.0);
  CHECK((at0.A() - ident(2)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(at0.M().isZero(0.0));
  CHECK(std::holds_alternative<ClassicalCF::Unit>(at0.phi().node().v));

  for (double t : {0.5, 2.0}) {
    const TwistedChannel ch = channel_at(damp, t);
    CHECK((ch.A() - std::exp(-kappa * t) * ident(2)).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((ch.M() - (1.0 - std::exp(-2.0 * kappa * t)) * ident(2)).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(admissibility(ch.M(), ch.A(), J).is_psd);
  }
}

TEST_CASE("semigroup functional equations") {
  auto rng = tt::make_rng(29);
  std::uniform_real_distribution<double> uniform(0.05, 1.2);

  std::vector<SemigroupGenerator> gens;
  gens.push_back(damping_with_jumps(0.5));
  const SymplecticForm J = build_symplectic_form(1);
  gens.push_back(make_generator(J.matrix, Eigen::MatrixXd::Zero(2, 2),
                                LevyFunction::from_atoms(1, {{xi2(0.6, 0.2).coords, 0.4},
                                                             {xi2(-0.3, 0.7).coords, 0.8}})));
  {
    auto [A, N] = tt::random_generator_pair(rng, 1);
    gens.push_back(make_generator(A, N, LevyFunction::from_atoms(1, {{xi2(0.5, -0.9).coords, 0.7}})));
  }

  for (const SemigroupGenerator& gen : gens) {
    for (int trial = 0; trial < 20; ++trial) {
      const double s = uniform(rng);
      const double t = uniform(rng);
      const Eigen::MatrixXd As = propagate_A(gen, s);
      const Eigen::MatrixXd At = propagate_A(gen, t);
      CHECK((propagate_A(gen, s + t) - As * At).cwiseAbs().maxCoeff() <= 1e-11);

      const Eigen::MatrixXd Mt = propagate_M(gen, t);
      const Eigen::MatrixXd Ms = propagate_M(gen, s);
      CHECK((propagate_M(gen, t + s) - (Mt + At.transpose() * Ms * At)).cwiseAbs().maxCoeff() <=
            1e-9);

      const PhaseVector xi = tt::random_xi(rng, 1);
      const Complex lhs = propagate_psi(gen, t + s, xi);
      const Complex rhs = propagate_psi(gen, t, xi) + propagate_psi(gen, s, PhaseVector(At * xi.coords));
      CHECK(std::abs(lhs - rhs) <= 1e-8);
    }
  }
}

TEST_CASE("semigroup law at the channel level") {
  const SemigroupGenerator gen = damping_with_jumps(0.4);
  auto rng = tt::make_rng(31);
  std::uniform_real_distribution<double> uniform(0.1, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    const double s = uniform(rng);
    const double t = uniform(rng);
    const TwistedChannel left = compose(channel_at(gen, s), channel_at(gen, t));
    const TwistedChannel right = channel_at(gen, s + t);
    CHECK((left.A() - right.A()).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK((left.M() - right.M()).cwiseAbs().maxCoeff() <= 1e-9);
    for (int k = 0; k < 5; ++k) {
      const PhaseVector xi = tt::random_xi(rng, 1);
      CHECK(std::abs(eval_classical(left.phi(), xi) - eval_classical(right.phi(), xi)) <= 1e-8);
    }
  }
}

TEST_CASE("evolve_qcf") {
  const double kappa = 0.5;
  const SemigroupGenerator damp = damping_generator(kappa);
  const QuantumCF vac = QuantumCF::vacuum(1);
  auto rng = tt::make_rng(37);

  for (int k = 0; k < 20; ++k) {
    const PhaseVector xi = tt::random_xi(rng, 1);
    CHECK(std::abs(evolve_qcf(damp, vac, 0.0, xi) - eval_quantum(vac, xi)) <= 1e-15);
    // vacuum fixed point at all times
    for (double t : {0.5, 1.0, 5.0})
      CHECK(std::abs(evolve_qcf(damp, vac, t, xi) -
                     std::exp(Complex(-0.5 * xi.coords.squaredNorm(), 0))) <= 1e-12);
  }

  // two code paths, one value
  const SemigroupGenerator jumps = damping_with_jumps(0.5);
  for (double t : {0.3, 1.1}) {
    const QuantumCF through_channel = apply(channel_at(jumps, t), vac);
    for (int k = 0; k < 10; ++k) {
      const PhaseVector xi = tt::random_xi(rng, 1);
      CHECK(std::abs(evolve_qcf(jumps, vac, t, xi) - eval_quantum(through_channel, xi)) <= 1e-12);
    }
  }

  // gamma = 0 evolution stays within the Gaussian family
  auto [A, N] = tt::random_generator_pair(rng, 1);
  const SemigroupGenerator gen = make_generator(A, N);
  const auto g0 = tt::random_valid_state(rng, 1);
  const QuantumCF f0 = QuantumCF::gaussian_state(g0.mean, g0.covariance);
  for (double t : {0.4, 1.6}) {
    const Eigen::MatrixXd At = propagate_A(gen, t);
    const QuantumCF evolved = QuantumCF::gaussian_state(
        At.transpose() * g0.mean, At.transpose() * g0.covariance * At + 0.5 * propagate_M(gen, t));
    for (int k = 0; k < 100; ++k) {
      const PhaseVector xi = tt::random_xi(rng, 1);
      CHECK(std::abs(evolve_qcf(gen, f0, t, xi) - eval_quantum(evolved, xi)) <= 1e-12);
    }
  }
}

TEST_CASE("noise rate is the short-time slope of M_t") {
  auto rng = tt::make_rng(41);
  auto [A, N] = tt::random_generator_pair(rng, 1);
  const SemigroupGenerator gen = make_generator(A, N);
  double prev_ratio = -1.0;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    const double defect = (propagate_M(gen, t) / t - N).cwiseAbs().maxCoeff();
    const double ratio = defect / t;
    if (prev_ratio > 0.0) CHECK(ratio <= 3.0 * prev_ratio);  // linear decay: defect/t stays bounded
    if (prev_ratio > 0.0 && defect > 1e-12) CHECK(ratio >= prev_ratio / 3.0);
    prev_ratio = ratio;
  }
}

TEST_CASE("potential V") {
  const double kappa = 0.7;
  const SemigroupGenerator damp = damping_generator(kappa);
  CHECK(std::abs(potential_V(damp, PhaseVector(Eigen::VectorXd::Zero(2)))) == 0.0);

  auto rng = tt::make_rng(43);
  for (int k = 0; k < 20; ++k) {
    const PhaseVector xi = tt::random_xi(rng, 1);
    CHECK(std::abs(potential_V(damp, xi) - Complex(-kappa * xi.coords.squaredNorm(), 0)) <= 1e-14);
  }

  // e^V is an infinitely divisible cf: Gaussian part N/2 plus the jump part
  const SemigroupGenerator jumps = damping_with_jumps(0.5);
  LevyFunction full = jumps.gamma();
  full.gaussian_part = 0.5 * jumps.N();
  const ClassicalCF expV = ClassicalCF::compound_levy(full);
  for (int k = 0; k < 10; ++k) {
    const PhaseVector xi = tt::random_xi(rng, 1);
    CHECK(std::abs(eval_classical(expV, xi) - std::exp(potential_V(jumps, xi))) <= 1e-14);
  }
  CHECK(verify_classical_pd(expV, sample_points(1, 30, 2.0, 5)).is_positive);
}

TEST_CASE("generator residual") {
  const SemigroupGenerator damp = damping_generator(0.5);
  const QuantumCF vac = QuantumCF::vacuum(1);

  CHECK(generator_residual(damp, vac, 0.3, xi2(1.0, 0.5), 1e-4) <= 1e-6);

  // pure jump generator, A = 0: the gradient term drops out
  Eigen::VectorXd eta(2);
  eta << 0.8, -0.5;
  const SemigroupGenerator jump_only = make_generator(
      Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2),
      LevyFunction::from_atoms(1, {{eta, 0.6}}));
  CHECK(generator_residual(jump_only, vac, 0.2, xi2(0.7, -0.2), 1e-4) <= 1e-5);

  // at xi = 0 the equation is 0 = 0 up to differencing error
  CHECK(generator_residual(damp, vac, 0.2, PhaseVector(Eigen::VectorXd::Zero(2)), 1e-4) <= 1e-9);

  CHECK_THROWS_AS(generator_residual(damp, vac, 1e-5, xi2(1, 0), 1e-4), std::invalid_argument);
}

TEST_CASE("evolved states pass the bochner certificate") {
  const SymplecticForm J = build_symplectic_form(1);
  const SemigroupGenerator jumps = damping_with_jumps(0.5);
  const QuantumCF vac = QuantumCF::vacuum(1);
  for (double t : {0.1, 1.0}) {
    const QuantumCF evolved = apply(channel_at(jumps, t), vac);
    const KernelReport rep = verify_bochner(evolved, sample_points(1, 30, 1.5, 3), J);
    CHECK(rep.is_positive);
  }
}
