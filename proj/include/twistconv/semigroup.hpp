#ifndef TWISTCONV_SEMIGROUP_HPP
#define TWISTCONV_SEMIGROUP_HPP

#include "twistconv/channel.hpp"

namespace twistconv {

inline constexpr double kDefaultQuadTol = 1e-10;

/// Generator triple (A, N, gamma) of a one-parameter semigroup of twisted
/// convolution channels T_t = T(phi_t, M_t, e^{tA}):
///
///   A_t  = e^{tA}
///   M_t  = integral_0^t e^{tau A^T} N e^{tau A} dtau
///   phi_t = exp(psi_t),  psi_t(xi) = integral_0^t gamma(e^{tau A} xi) dtau.
///
/// Validity requires N symmetric PSD and N + i(A^T J + J A) >= 0. Any
/// Gaussian Lévy part belongs in N; gamma.gaussian_part must be zero.
class SemigroupGenerator {
 public:
  Eigen::Index modes() const { return n_; }
  Eigen::Index dim() const { return 2 * n_; }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::MatrixXd& N() const { return N_; }
  const LevyFunction& gamma() const { return gamma_; }

 private:
  SemigroupGenerator(Eigen::Index n, Eigen::MatrixXd A, Eigen::MatrixXd N, LevyFunction gamma)
      : n_(n), A_(std::move(A)), N_(std::move(N)), gamma_(std::move(gamma)) {}
  friend SemigroupGenerator make_generator(Eigen::MatrixXd, Eigen::MatrixXd, LevyFunction, double);

  Eigen::Index n_;
  Eigen::MatrixXd A_;
  Eigen::MatrixXd N_;
  LevyFunction gamma_;
};

/// Memo of a channel_at result, for callers evolving many states at the
/// same time point. channel.A() stays within 1e-12 of exp(t A).
struct EvolvedChannelCache {
  double t = 0.0;
  TwistedChannel channel;
  double quadrature_tolerance = kDefaultQuadTol;
};

/// Spectrum of N + i(A^T J + J A); N must be symmetric to 1e-12.
PsdReport check_generator(const Eigen::MatrixXd& N, const Eigen::MatrixXd& A,
                          const SymplecticForm& J, double tol = kDefaultPsdTol);
PsdReport check_generator(const SemigroupGenerator& gen, double tol = kDefaultPsdTol);

/// Validates and builds the generator; gamma defaults to zero.
SemigroupGenerator make_generator(Eigen::MatrixXd A, Eigen::MatrixXd N, LevyFunction gamma,
                                  double tol = kDefaultPsdTol);
SemigroupGenerator make_generator(Eigen::MatrixXd A, Eigen::MatrixXd N,
                                  double tol = kDefaultPsdTol);

/// e^{tA} by scaling-and-squaring with a Padé rational approximant.
Eigen::MatrixXd propagate_A(const SemigroupGenerator& gen, double t);

/// M_t by the augmented block exponential: exponentiate [[-A^T, N],[0, A]]
/// at time t and take (bottom-right block)^T * (top-right block). Exact up
/// to matrix-exponential accuracy; symmetrized and PSD-checked (failure
/// signals numerical breakdown and throws).
Eigen::MatrixXd propagate_M(const SemigroupGenerator& gen, double t);

/// psi_t(xi) by adaptive Simpson quadrature to absolute tolerance quad_tol.
/// Throws on non-convergence within 2^20 panels.
Complex propagate_psi(const SemigroupGenerator& gen, double t, const PhaseVector& xi,
                      double quad_tol = kDefaultQuadTol);

/// Assembles T(phi_t, M_t, e^{tA}) and re-verifies admissibility. phi_t is
/// Unit when gamma is zero, otherwise a CompoundLevy wrapping the psi_t
/// quadrature as a black-box exponent.
TwistedChannel channel_at(const SemigroupGenerator& gen, double t,
                          double quad_tol = kDefaultQuadTol);

EvolvedChannelCache make_evolved_cache(const SemigroupGenerator& gen, double t,
                                       double quad_tol = kDefaultQuadTol);

/// Psi(t, xi) = f0(e^{tA} xi) e^{-(1/2) xi^T M_t xi} phi_t(xi), computed
/// directly (not through channel_at); the two paths agree pointwise.
Complex evolve_qcf(const SemigroupGenerator& gen, const QuantumCF& f0, double t,
                   const PhaseVector& xi, double quad_tol = kDefaultQuadTol);

/// V(xi) = -(1/2) xi^T N xi + gamma(xi), the multiplicative part of the
/// dynamical generator xi^T A^T grad + V.
Complex potential_V(const SemigroupGenerator& gen, const PhaseVector& xi);

/// Relative defect of the evolution equation d/dt Psi = (xi^T A^T grad) Psi
/// + V Psi at (t, xi), with both derivatives taken by central differences of
/// step h. A Richardson consistency probe (h vs h/2 on the time derivative)
/// throws when cancellation makes the step unreliable.
double generator_residual(const SemigroupGenerator& gen, const QuantumCF& f0, double t,
                          const PhaseVector& xi, double h = 1e-4,
                          double quad_tol = kDefaultQuadTol);

namespace detail {
/// Adaptive Simpson for complex integrands on [a, b]; absolute tolerance.
Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b,
                         double abs_tol, int max_depth = 20);
}  // namespace detail

}  // namespace twistconv

#endif  // TWISTCONV_SEMIGROUP_HPP
