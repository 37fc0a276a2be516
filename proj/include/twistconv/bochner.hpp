#ifndef TWISTCONV_BOCHNER_HPP
#define TWISTCONV_BOCHNER_HPP

#include <cstdint>
#include <vector>

#include "twistconv/char_fn.hpp"

namespace twistconv {

enum class PointScheme { random_gaussian, lattice, user };

struct PointSet {
  Eigen::Index n = 0;  // mode count
  std::vector<PhaseVector> points;
  std::uint64_t seed = 0;
  PointScheme scheme = PointScheme::user;
};

enum class KernelKind { twisted, classical };

/// Report on the spectrum of a sampled kernel matrix. The verdict is
/// one-sided: is_positive = false certifies the function is NOT a (quantum
/// or classical) characteristic function; is_positive = true on finitely
/// many points is evidence, not proof. The tolerance scales with the point
/// count to absorb accumulated rounding in dense Hermitian eigensolves.
struct KernelReport {
  Eigen::Index point_count = 0;
  double min_eigenvalue = 0.0;
  bool is_positive = false;
  double tolerance = 0.0;
  KernelKind kernel_kind = KernelKind::twisted;
};

/// Default spectrum tolerance; with the default 50-point sets the PSD
/// verdict threshold is -tol * 50 = -1e-8.
inline constexpr double kDefaultKernelTol = 2e-10;

/// Deterministic point sets. random_gaussian pins point 0 to the origin
/// (anchoring the f(0)=1 row) and draws the rest with i.i.d. N(0, radius^2)
/// coordinates; lattice builds a centered grid over [-radius, radius]^{2n}
/// with round(count^(1/2n)) points per axis.
PointSet sample_points(Eigen::Index n, Eigen::Index count, double radius, std::uint64_t seed,
                       PointScheme scheme = PointScheme::random_gaussian);

/// Twisted kernel K(i,j) = f(xi_j - xi_i) * exp(i xi_i^T J xi_j). Throws if
/// the assembled matrix fails Hermitian symmetry beyond 1e-10 (a broken f).
Eigen::MatrixXcd kernel_matrix(const QuantumCF& f, const PointSet& P, const SymplecticForm& J);

KernelReport verify_bochner(const QuantumCF& f, const PointSet& P, const SymplecticForm& J,
                            double tol = kDefaultKernelTol);

/// Untwisted kernel phi(xi_j - xi_i) for classical positive definiteness.
KernelReport verify_classical_pd(const ClassicalCF& phi, const PointSet& P,
                                 double tol = kDefaultKernelTol);

/// One-dimensional classical kernel g(t_j - t_i) for section cfs and other
/// scalar-argument characteristic functions.
KernelReport verify_classical_pd_1d(const std::function<Complex(double)>& g,
                                    const std::vector<double>& ts, double tol = kDefaultKernelTol);

}  // namespace twistconv

#endif  // TWISTCONV_BOCHNER_HPP
