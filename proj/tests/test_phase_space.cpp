#include <doctest.h>

#include "test_support.hpp"

using namespace twistconv;
namespace tt = twistconv::test;

TEST_CASE("symplectic form blocks and errors") {
  const SymplecticForm J1 = build_symplectic_form(1);
  Eigen::Matrix2d expected;
  expected << 0, 1, -1, 0;
  CHECK((J1.matrix - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(build_symplectic_form(0), std::invalid_argument);

  // direct sum of the n=1 block, entrywise
  for (Eigen::Index n : {2, 3, 4}) {
    const SymplecticForm J = build_symplectic_form(n);
    CHECK((J.matrix + J.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((J.matrix * J.matrix + Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index r = 0; r < 2 * n; ++r)
      for (Eigen::Index c = 0; c < 2 * n; ++c) {
        const double want = (r / 2 == c / 2) ? expected(r % 2, c % 2) : 0.0;
        CHECK(J.matrix(r, c) == want);
      }
  }
}

TEST_CASE("symplectic product represents Im<z|z'>") {
  auto rng = tt::make_rng(101);
  for (Eigen::Index n = 1; n <= 4; ++n) {
    const SymplecticForm J = build_symplectic_form(n);
    for (int trial = 0; trial < 1000; ++trial) {
      const Eigen::VectorXcd z = tt::random_cvec(rng, n);
      const Eigen::VectorXcd zp = tt::random_cvec(rng, n);
      const PhaseVector xi = complex_to_phase(z);
      const PhaseVector eta = complex_to_phase(zp);
      const double product = xi.coords.dot(J.matrix * eta.coords);
      CHECK(std::abs(product - tt::im_scalar_product(z, zp)) <= 1e-12);
      CHECK(std::abs(xi.coords.dot(J.matrix * xi.coords)) <= 1e-13);
    }
  }
  // z = 1, z' = i: Im<1|i> = 1
  Eigen::VectorXcd one(1), imag(1);
  one << Complex(1, 0);
  imag << Complex(0, 1);
  const SymplecticForm J = build_symplectic_form(1);
  CHECK(complex_to_phase(one).coords.dot(J.matrix * complex_to_phase(imag).coords) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("complex/phase correspondence") {
  Eigen::VectorXcd z(2);
  z << Complex(1, 2), Complex(3, -1);
  const PhaseVector xi = complex_to_phase(z);
  Eigen::VectorXd want(4);
  want << 1, 2, 3, -1;
  CHECK((xi.coords - want).cwiseAbs().maxCoeff() == 0.0);

  CHECK(complex_to_phase(Eigen::VectorXcd::Zero(3)).coords.isZero(0.0));

  auto rng = tt::make_rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXcd w = tt::random_cvec(rng, 3);
    CHECK((phase_to_complex(complex_to_phase(w)) - w).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(PhaseVector(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("hermitian psd check examples") {
  const PsdReport id = hermitian_psd_check(Eigen::MatrixXcd(Eigen::Matrix2cd::Identity()), 1e-9);
  CHECK(id.is_psd);
  CHECK(id.min_eigenvalue == doctest::Approx(1.0).epsilon(1e-14));

  // I - iJ has eigenvalues {0, 2}: minimal eigenvalue exactly on the boundary
  const SymplecticForm J = build_symplectic_form(1);
  Eigen::Matrix2cd H = Eigen::Matrix2cd::Identity() - Complex(0, 1) * J.matrix.cast<Complex>();
  const auto [lo, hi] = tt::eig2_hermitian(H);
  CHECK(lo == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(hi == doctest::Approx(2.0).epsilon(1e-14));
  const PsdReport boundary = hermitian_psd_check(Eigen::MatrixXcd(H), 1e-9);
  CHECK(boundary.is_psd);
  CHECK(std::abs(boundary.min_eigenvalue - lo) <= 1e-12);

  CHECK_FALSE(hermitian_psd_check(Eigen::MatrixXcd(-Eigen::Matrix2cd::Identity()), 1e-9).is_psd);

  Eigen::Matrix2cd bad;
  bad << 1, Complex(0, 1), Complex(0, 1), 1;  // not Hermitian
  CHECK_THROWS_AS(hermitian_psd_check(Eigen::MatrixXcd(bad), 1e-9), std::invalid_argument);

  Eigen::Matrix2cd inf = Eigen::Matrix2cd::Identity();
  inf(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(hermitian_psd_check(Eigen::MatrixXcd(inf), 1e-9), std::invalid_argument);
}

TEST_CASE("psd check agrees with independent 2x2 and 4x4 oracles") {
  auto rng = tt::make_rng(42);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    Eigen::Matrix2cd H;
    H(0, 0) = normal(rng);
    H(1, 1) = normal(rng);
    H(0, 1) = Complex(normal(rng), normal(rng));
    H(1, 0) = std::conj(H(0, 1));
    const PsdReport report = hermitian_psd_check(Eigen::MatrixXcd(H), 1e-9);
    CHECK(report.is_psd == tt::char_poly_psd_2x2(H, 1e-9));
    const auto [lo, hi] = tt::eig2_hermitian(H);
    CHECK(std::abs(report.min_eigenvalue - lo) <= 1e-12);
    CHECK(std::abs(report.eigenvalues(1) - hi) <= 1e-12);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd A = tt::random_mat(rng, 4);
    const Eigen::MatrixXd H = A.transpose() * A;
    CHECK(hermitian_psd_check(Eigen::MatrixXd(H)).is_psd);
    CHECK(tt::cholesky_completes(H + 1e-12 * Eigen::MatrixXd::Identity(4, 4), 1e-12));
  }
}
