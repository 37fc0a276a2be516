#include "twistconv/phase_space.hpp"

#include <Eigen/Eigenvalues>

namespace twistconv {

SymplecticForm build_symplectic_form(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("build_symplectic_form: n must be >= 1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    J(2 * k, 2 * k + 1) = 1.0;
    J(2 * k + 1, 2 * k) = -1.0;
  }
  return SymplecticForm{n, std::move(J)};
}

PhaseVector complex_to_phase(const Eigen::VectorXcd& z) {
  Eigen::VectorXd xi(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    xi(2 * j) = z(j).real();
    xi(2 * j + 1) = z(j).imag();
  }
  return PhaseVector(std::move(xi));
}

Eigen::VectorXcd phase_to_complex(const PhaseVector& xi) {
  Eigen::VectorXcd z(xi.modes());
  for (Eigen::Index j = 0; j < z.size(); ++j)
    z(j) = Complex(xi.coords(2 * j), xi.coords(2 * j + 1));
  return z;
}

PsdReport hermitian_psd_check(const Eigen::MatrixXcd& H, double tol) {
  if (H.rows() != H.cols())
    throw std::invalid_argument("hermitian_psd_check: matrix must be square");
  if (!H.allFinite())
    throw std::invalid_argument("hermitian_psd_check: non-finite entries");

  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  const double asym = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e3 * tol * scale)
    throw std::invalid_argument("hermitian_psd_check: input is not Hermitian within tolerance");

  const Eigen::MatrixXcd Hs = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hs, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian_psd_check: eigensolver failed");

  PsdReport report;
  report.eigenvalues = es.eigenvalues();
  report.min_eigenvalue = report.eigenvalues(0);
  report.tolerance = tol;
  const double spectral_norm =
      std::max(std::abs(report.eigenvalues(0)), std::abs(report.eigenvalues(report.eigenvalues.size() - 1)));
  report.is_psd = report.min_eigenvalue >= -tol * std::max(1.0, spectral_norm);
  return report;
}

PsdReport hermitian_psd_check(const Eigen::MatrixXd& H, double tol) {
  return hermitian_psd_check(Eigen::MatrixXcd(H.cast<Complex>()), tol);
}

}  // namespace twistconv
