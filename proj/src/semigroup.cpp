#include "twistconv/semigroup.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace twistconv {

namespace {

Eigen::MatrixXd symmetric_or_throw(const Eigen::MatrixXd& N, const char* who) {
  if (N.rows() != N.cols()) throw std::invalid_argument(std::string(who) + ": N must be square");
  const double scale = std::max(1.0, N.cwiseAbs().maxCoeff());
  if ((N - N.transpose()).cwiseAbs().maxCoeff() >= 1e-12 * scale)
    throw std::invalid_argument(std::string(who) + ": N must be symmetric");
  return 0.5 * (N + N.transpose());
}

void require_time(double t, const char* who) {
  if (!(t >= 0.0)) throw std::invalid_argument(std::string(who) + ": t must be >= 0");
}

}  // namespace

PsdReport check_generator(const Eigen::MatrixXd& N, const Eigen::MatrixXd& A,
                          const SymplecticForm& J, double tol) {
  const Eigen::Index d = 2 * J.n;
  if (N.rows() != d || N.cols() != d || A.rows() != d || A.cols() != d)
    throw std::invalid_argument("check_generator: dimension mismatch");
  const Eigen::MatrixXd Ns = symmetric_or_throw(N, "check_generator");
  const Eigen::MatrixXd drift_defect = A.transpose() * J.matrix + J.matrix * A;
  const Eigen::MatrixXcd H =
      Ns.cast<Complex>() + Complex(0.0, 1.0) * drift_defect.cast<Complex>();
  return hermitian_psd_check(H, tol);
}

PsdReport check_generator(const SemigroupGenerator& gen, double tol) {
  return check_generator(gen.N(), gen.A(), build_symplectic_form(gen.modes()), tol);
}

SemigroupGenerator make_generator(Eigen::MatrixXd A, Eigen::MatrixXd N, LevyFunction gamma,
                                  double tol) {
  const Eigen::Index d = A.rows();
  if (d == 0 || d % 2 != 0 || A.cols() != d || N.rows() != d || N.cols() != d)
    throw std::invalid_argument("make_generator: matrices must be square of even size");
  if (!A.allFinite() || !N.allFinite())
    throw std::invalid_argument("make_generator: non-finite entries");

  Eigen::MatrixXd Ns = symmetric_or_throw(N, "make_generator");
  const SymplecticForm J = build_symplectic_form(d / 2);

  const PsdReport n_psd = hermitian_psd_check(Ns, tol);
  if (!n_psd.is_psd)
    throw AdmissibilityError("make_generator: N is not positive semidefinite", n_psd);
  PsdReport report = check_generator(Ns, A, J, tol);
  if (!report.is_psd)
    throw AdmissibilityError("make_generator: N + i(A^T J + J A) is not positive semidefinite",
                             std::move(report));

  gamma.validate();
  if (gamma.dim() != d)
    throw std::invalid_argument("make_generator: gamma dimension mismatch");
  if (gamma.gaussian_part.size() != 0 && !gamma.gaussian_part.isZero(0.0))
    throw std::invalid_argument("make_generator: gamma.gaussian_part must be zero (fold B into N)");

  return SemigroupGenerator(d / 2, std::move(A), std::move(Ns), std::move(gamma));
}

SemigroupGenerator make_generator(Eigen::MatrixXd A, Eigen::MatrixXd N, double tol) {
  const Eigen::Index n = A.rows() / 2;
  return make_generator(std::move(A), std::move(N), LevyFunction::zero(std::max<Eigen::Index>(n, 1)), tol);
}

Eigen::MatrixXd propagate_A(const SemigroupGenerator& gen, double t) {
  require_time(t, "propagate_A");
  Eigen::MatrixXd At = (t * gen.A()).exp();
  if (!At.allFinite()) throw std::runtime_error("propagate_A: non-finite result");
  return At;
}

Eigen::MatrixXd propagate_M(const SemigroupGenerator& gen, double t) {
  require_time(t, "propagate_M");
  const Eigen::Index d = gen.dim();
  if (t == 0.0) return Eigen::MatrixXd::Zero(d, d);

  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  block.topLeftCorner(d, d) = -gen.A().transpose();
  block.topRightCorner(d, d) = gen.N();
  block.bottomRightCorner(d, d) = gen.A();

  const Eigen::MatrixXd expb = (t * block).exp();
  Eigen::MatrixXd Mt =
      expb.bottomRightCorner(d, d).transpose() * expb.topRightCorner(d, d);
  Mt = 0.5 * (Mt + Mt.transpose());

  const PsdReport report = hermitian_psd_check(Mt);
  if (!report.is_psd)
    throw AdmissibilityError("propagate_M: M_t lost positive semidefiniteness", report);
  return Mt;
}

namespace detail {

namespace {

Complex simpson_recurse(const std::function<Complex(double)>& f, double a, double b, Complex fa,
                        Complex fm, Complex fb, Complex whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const Complex flm = f(lm);
  const Complex frm = f(rm);
  const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Complex delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0)
    throw std::runtime_error("adaptive_simpson: did not converge within the panel budget");
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b,
                         double abs_tol, int max_depth) {
  if (a == b) return Complex(0.0, 0.0);
  const Complex fa = f(a);
  const Complex fb = f(b);
  const Complex fm = f(0.5 * (a + b));
  const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace detail

Complex propagate_psi(const SemigroupGenerator& gen, double t, const PhaseVector& xi,
                      double quad_tol) {
  require_time(t, "propagate_psi");
  if (xi.dim() != gen.dim()) throw std::invalid_argument("propagate_psi: dimension mismatch");
  if (t == 0.0 || gen.gamma().is_zero()) return Complex(0.0, 0.0);

  const auto integrand = [&gen, &xi](double tau) {
    const Eigen::MatrixXd Atau = (tau * gen.A()).exp();
    return eval_gamma(gen.gamma(), PhaseVector(Atau * xi.coords));
  };
  return detail::adaptive_simpson(integrand, 0.0, t, quad_tol);
}

TwistedChannel channel_at(const SemigroupGenerator& gen, double t, double quad_tol) {
  require_time(t, "channel_at");
  const Eigen::MatrixXd At = propagate_A(gen, t);
  Eigen::MatrixXd Mt = propagate_M(gen, t);

  ClassicalCF phi = ClassicalCF::unit();
  if (!gen.gamma().is_zero()) {
    LevyFunction psi;
    psi.n = gen.modes();
    psi.external_gamma = [gen, t, quad_tol](const Eigen::VectorXd& x) {
      return propagate_psi(gen, t, PhaseVector(x), quad_tol);
    };
    phi = ClassicalCF::compound_levy(std::move(psi));
  }
  return make_channel(std::move(phi), std::move(Mt), At);
}

EvolvedChannelCache make_evolved_cache(const SemigroupGenerator& gen, double t, double quad_tol) {
  return EvolvedChannelCache{t, channel_at(gen, t, quad_tol), quad_tol};
}

Complex evolve_qcf(const SemigroupGenerator& gen, const QuantumCF& f0, double t,
                   const PhaseVector& xi, double quad_tol) {
  require_time(t, "evolve_qcf");
  if (f0.dim() != gen.dim() || xi.dim() != gen.dim())
    throw std::invalid_argument("evolve_qcf: dimension mismatch");
  const Eigen::MatrixXd At = propagate_A(gen, t);
  const Eigen::MatrixXd Mt = propagate_M(gen, t);
  const Complex psi = propagate_psi(gen, t, xi, quad_tol);
  const Eigen::VectorXd& x = xi.coords;
  return eval_quantum(f0, PhaseVector(At * x)) *
         std::exp(Complex(-0.5 * x.dot(Mt * x), 0.0)) * std::exp(psi);
}

Complex potential_V(const SemigroupGenerator& gen, const PhaseVector& xi) {
  if (xi.dim() != gen.dim()) throw std::invalid_argument("potential_V: dimension mismatch");
  return Complex(-0.5 * xi.coords.dot(gen.N() * xi.coords), 0.0) + eval_gamma(gen.gamma(), xi);
}

double generator_residual(const SemigroupGenerator& gen, const QuantumCF& f0, double t,
                          const PhaseVector& xi, double h, double quad_tol) {
  if (!(t > h && h > 0.0))
    throw std::invalid_argument("generator_residual: need t > h > 0");
  if (f0.dim() != gen.dim() || xi.dim() != gen.dim())
    throw std::invalid_argument("generator_residual: dimension mismatch");

  const auto psi_at = [&](double s, const Eigen::VectorXd& x) {
    return evolve_qcf(gen, f0, s, PhaseVector(x), quad_tol);
  };

  const Eigen::VectorXd& x = xi.coords;
  const Complex value = psi_at(t, x);

  const Complex dt_h = (psi_at(t + h, x) - psi_at(t - h, x)) / (2.0 * h);
  const Complex dt_h2 = (psi_at(t + 0.5 * h, x) - psi_at(t - 0.5 * h, x)) / h;
  // Richardson probe: central differences are O(h^2), so halving must not
  // move the estimate by more than rounding allows.
  if (std::abs(dt_h - dt_h2) / 3.0 > 1e-2 * std::max(1.0, std::abs(dt_h2)))
    throw std::runtime_error("generator_residual: step h too small (cancellation detected)");

  Eigen::VectorXcd grad(gen.dim());
  for (Eigen::Index j = 0; j < gen.dim(); ++j) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp(j) += h;
    xm(j) -= h;
    grad(j) = (psi_at(t, xp) - psi_at(t, xm)) / (2.0 * h);
  }

  const Eigen::VectorXd Ax = gen.A() * x;
  Complex drift(0.0, 0.0);
  for (Eigen::Index j = 0; j < gen.dim(); ++j) drift += Ax(j) * grad(j);

  const Complex rhs = drift + potential_V(gen, xi) * value;
  return std::abs(dt_h2 - rhs) / std::max(1.0, std::abs(value));
}

}  // namespace twistconv
