#ifndef TWISTCONV_CHANNEL_HPP
#define TWISTCONV_CHANNEL_HPP

#include "twistconv/char_fn.hpp"

namespace twistconv {

/// Raised when a channel or generator fails its defining matrix inequality;
/// carries the spectrum report of the offending Hermitian matrix.
class AdmissibilityError : public std::runtime_error {
 public:
  AdmissibilityError(const std::string& what, PsdReport report)
      : std::runtime_error(what), report(std::move(report)) {}
  PsdReport report;
};

/// A twisted convolution channel, acting on quantum characteristic
/// functions as f |-> e^{-(1/2) xi^T M xi} f(A xi) phi(xi). Valid instances
/// satisfy M = M^T >= 0 and M + i(J - A^T J A) >= 0; construct through
/// make_channel (or compose / convolution_channel), which enforce both.
class TwistedChannel {
 public:
  Eigen::Index modes() const { return n_; }
  Eigen::Index dim() const { return 2 * n_; }
  const ClassicalCF& phi() const { return phi_; }
  const Eigen::MatrixXd& M() const { return M_; }
  const Eigen::MatrixXd& A() const { return A_; }

 private:
  TwistedChannel(Eigen::Index n, ClassicalCF phi, Eigen::MatrixXd M, Eigen::MatrixXd A)
      : n_(n), phi_(std::move(phi)), M_(std::move(M)), A_(std::move(A)) {}
  friend TwistedChannel make_channel(ClassicalCF, Eigen::MatrixXd, Eigen::MatrixXd, double);

  Eigen::Index n_;
  ClassicalCF phi_;
  Eigen::MatrixXd M_;
  Eigen::MatrixXd A_;
};

/// Spectrum of the Hermitian matrix M + i(J - A^T J A). M must be symmetric
/// to 1e-12 (relative); it is symmetrized before the test.
PsdReport admissibility(const Eigen::MatrixXd& M, const Eigen::MatrixXd& A, const SymplecticForm& J,
                        double tol = kDefaultPsdTol);

/// Validates and builds T(phi, M, A). Throws AdmissibilityError (carrying
/// the report) when the matrix inequality fails, std::invalid_argument on
/// malformed inputs. A need not be invertible; A = 0 is a legitimate
/// complete-erasure channel provided M + iJ >= 0.
TwistedChannel make_channel(ClassicalCF phi, Eigen::MatrixXd M, Eigen::MatrixXd A,
                            double tol = kDefaultPsdTol);

/// T(1, 0, I).
TwistedChannel identity_channel(Eigen::Index n);

/// Lazy channel action: returns the composite qcf without sampling grids.
QuantumCF apply(const TwistedChannel& ch, const QuantumCF& f);

/// Closed-form Gaussian action, valid when phi is Gaussian or Unit:
/// mean' = A^T mean + mu, K' = A^T K A + (1/2) M + (1/2) Sigma. Throws
/// std::invalid_argument for other phi (use apply).
QuantumCF::GaussianState apply_gaussian(const TwistedChannel& ch, const QuantumCF::GaussianState& g);

/// Composition in operator order: compose(second, first) applies `first`
/// to the state, then `second`; the result is
/// T(phi_2 * (phi_1 o A_2), M_2 + A_2^T M_1 A_2, A_1 A_2).
TwistedChannel compose(const TwistedChannel& second, const TwistedChannel& first);

/// The convolution channel of a discrete probability measure: random
/// displacements W(eta) rho W(eta)^{-1} with law mu, acting on qcfs as
/// multiplication by mu^hat(2 J xi). Triple (cf_from_measure(atoms, J), 0, I).
TwistedChannel convolution_channel(const std::vector<Atom>& atoms, const SymplecticForm& J);

}  // namespace twistconv

#endif  // TWISTCONV_CHANNEL_HPP
