#include "twistconv/channel.hpp"

namespace twistconv {

namespace {

// Symmetrizes M when the asymmetry is at rounding level, rejects otherwise.
Eigen::MatrixXd require_symmetric(const Eigen::MatrixXd& M, const char* who) {
  if (M.rows() != M.cols()) throw std::invalid_argument(std::string(who) + ": M must be square");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() >= 1e-12 * scale)
    throw std::invalid_argument(std::string(who) + ": M must be symmetric");
  return 0.5 * (M + M.transpose());
}

}  // namespace

PsdReport admissibility(const Eigen::MatrixXd& M, const Eigen::MatrixXd& A, const SymplecticForm& J,
                        double tol) {
  const Eigen::Index d = 2 * J.n;
  if (M.rows() != d || M.cols() != d || A.rows() != d || A.cols() != d)
    throw std::invalid_argument("admissibility: dimension mismatch");
  const Eigen::MatrixXd Ms = require_symmetric(M, "admissibility");
  const Eigen::MatrixXd twist_defect = J.matrix - A.transpose() * J.matrix * A;
  const Eigen::MatrixXcd H =
      Ms.cast<Complex>() + Complex(0.0, 1.0) * twist_defect.cast<Complex>();
  return hermitian_psd_check(H, tol);
}

TwistedChannel make_channel(ClassicalCF phi, Eigen::MatrixXd M, Eigen::MatrixXd A, double tol) {
  const Eigen::Index d = M.rows();
  if (d == 0 || d % 2 != 0 || M.cols() != d || A.rows() != d || A.cols() != d)
    throw std::invalid_argument("make_channel: matrices must be square of even size");
  if (!M.allFinite() || !A.allFinite())
    throw std::invalid_argument("make_channel: non-finite entries");
  if (phi.dim() != 0 && phi.dim() != d)
    throw std::invalid_argument("make_channel: phi dimension mismatch");

  Eigen::MatrixXd Ms = require_symmetric(M, "make_channel");
  const SymplecticForm J = build_symplectic_form(d / 2);

  const PsdReport m_psd = hermitian_psd_check(Ms, tol);
  if (!m_psd.is_psd)
    throw AdmissibilityError("make_channel: M is not positive semidefinite", m_psd);
  PsdReport report = admissibility(Ms, A, J, tol);
  if (!report.is_psd)
    throw AdmissibilityError("make_channel: M + i(J - A^T J A) is not positive semidefinite",
                             std::move(report));
  return TwistedChannel(d / 2, std::move(phi), std::move(Ms), std::move(A));
}

TwistedChannel identity_channel(Eigen::Index n) {
  const Eigen::Index d = 2 * n;
  return make_channel(ClassicalCF::unit(), Eigen::MatrixXd::Zero(d, d),
                      Eigen::MatrixXd::Identity(d, d));
}

QuantumCF apply(const TwistedChannel& ch, const QuantumCF& f) {
  if (f.dim() != ch.dim()) throw std::invalid_argument("apply: dimension mismatch");
  return QuantumCF::channel_output(f, ch.A(), ch.M(), ch.phi());
}

QuantumCF::GaussianState apply_gaussian(const TwistedChannel& ch, const QuantumCF::GaussianState& g) {
  if (g.mean.size() != ch.dim()) throw std::invalid_argument("apply_gaussian: dimension mismatch");

  Eigen::VectorXd mean = ch.A().transpose() * g.mean;
  Eigen::MatrixXd K = ch.A().transpose() * g.covariance * ch.A() + 0.5 * ch.M();

  if (const auto* gphi = std::get_if<ClassicalCF::Gaussian>(&ch.phi().node().v)) {
    mean += gphi->mean;
    K += 0.5 * gphi->covariance;
  } else if (!std::holds_alternative<ClassicalCF::Unit>(ch.phi().node().v)) {
    throw std::invalid_argument("apply_gaussian: phi must be Gaussian or Unit (use apply)");
  }
  return QuantumCF::GaussianState{std::move(mean), std::move(K)};
}

TwistedChannel compose(const TwistedChannel& second, const TwistedChannel& first) {
  if (second.modes() != first.modes()) throw std::invalid_argument("compose: dimension mismatch");
  ClassicalCF phi = ClassicalCF::product(
      {second.phi(), ClassicalCF::pullback(first.phi(), second.A())});
  Eigen::MatrixXd M = second.M() + second.A().transpose() * first.M() * second.A();
  Eigen::MatrixXd A = first.A() * second.A();
  return make_channel(std::move(phi), std::move(M), std::move(A));
}

TwistedChannel convolution_channel(const std::vector<Atom>& atoms, const SymplecticForm& J) {
  const Eigen::Index d = 2 * J.n;
  return make_channel(cf_from_measure(atoms, J), Eigen::MatrixXd::Zero(d, d),
                      Eigen::MatrixXd::Identity(d, d));
}

}  // namespace twistconv
