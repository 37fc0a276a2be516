#ifndef TWISTCONV_PHASE_SPACE_HPP
#define TWISTCONV_PHASE_SPACE_HPP

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace twistconv {

using Complex = std::complex<double>;

/// Point of the 2n-dimensional real phase space, coordinates interleaved as
/// (x1, y1, x2, y2, ..., xn, yn).
struct PhaseVector {
  Eigen::VectorXd coords;

  PhaseVector() = default;
  explicit PhaseVector(Eigen::VectorXd c) : coords(std::move(c)) {
    if (coords.size() == 0 || coords.size() % 2 != 0)
      throw std::invalid_argument("PhaseVector: length must be even and nonzero");
  }

  Eigen::Index dim() const { return coords.size(); }
  Eigen::Index modes() const { return coords.size() / 2; }
};

/// The standard symplectic form on R^{2n}: block diagonal with 2x2 blocks
/// [[0,1],[-1,0]]. Skew-symmetric, squares to -I, and represents the
/// imaginary part of the C^n scalar product: xi^T J eta = Im<z|z'> for
/// xi, eta the phase-space images of z, z'.
struct SymplecticForm {
  Eigen::Index n = 0;  // mode count; matrix is 2n x 2n
  Eigen::MatrixXd matrix;
};

/// Outcome of a Hermitian positive-semidefiniteness test. The full spectrum
/// is kept for diagnostics; is_psd uses a relative tolerance so that
/// boundary cases (min eigenvalue exactly 0) pass.
struct PsdReport {
  double min_eigenvalue = 0.0;
  bool is_psd = false;
  double tolerance = 0.0;
  Eigen::VectorXd eigenvalues;  // ascending
};

inline constexpr double kDefaultPsdTol = 1e-9;

SymplecticForm build_symplectic_form(Eigen::Index n);

/// (z_1,...,z_n) -> (Re z_1, Im z_1, ..., Re z_n, Im z_n).
PhaseVector complex_to_phase(const Eigen::VectorXcd& z);

/// Exact inverse of complex_to_phase.
Eigen::VectorXcd phase_to_complex(const PhaseVector& xi);

/// Tests H >= 0 for a Hermitian matrix. The input is symmetrized before the
/// eigensolve; asymmetry beyond tolerance (relative to max(1, max|H_ij|))
/// is treated as a broken input and throws. The PSD verdict is
/// min_eigenvalue >= -tol * max(1, spectral norm).
PsdReport hermitian_psd_check(const Eigen::MatrixXcd& H, double tol = kDefaultPsdTol);

/// Real symmetric overload.
PsdReport hermitian_psd_check(const Eigen::MatrixXd& H, double tol = kDefaultPsdTol);

}  // namespace twistconv

#endif  // TWISTCONV_PHASE_SPACE_HPP
