#include "twistconv/bochner.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace twistconv {

namespace {

KernelReport spectrum_report(const Eigen::MatrixXcd& K, KernelKind kind, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (K + K.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("kernel eigensolver failed");
  KernelReport report;
  report.point_count = K.rows();
  report.min_eigenvalue = es.eigenvalues()(0);
  report.tolerance = tol;
  report.kernel_kind = kind;
  report.is_positive = report.min_eigenvalue >= -tol * std::max<double>(1.0, double(report.point_count));
  return report;
}

void check_hermitian(const Eigen::MatrixXcd& K, const char* who) {
  if ((K - K.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error(std::string(who) + ": kernel is not Hermitian (evaluator lacks f(-xi) = conj f(xi))");
}

}  // namespace

PointSet sample_points(Eigen::Index n, Eigen::Index count, double radius, std::uint64_t seed,
                       PointScheme scheme) {
  if (n < 1) throw std::invalid_argument("sample_points: n must be >= 1");
  if (count < 1) throw std::invalid_argument("sample_points: count must be >= 1");
  const Eigen::Index d = 2 * n;

  PointSet P;
  P.n = n;
  P.seed = seed;
  P.scheme = scheme;

  if (scheme == PointScheme::lattice) {
    const Eigen::Index per_axis =
        std::max<Eigen::Index>(1, Eigen::Index(std::lround(std::pow(double(count), 1.0 / double(d)))));
    Eigen::VectorXd idx = Eigen::VectorXd::Zero(d);
    std::vector<Eigen::Index> digits(d, 0);
    const Eigen::Index total = Eigen::Index(std::pow(double(per_axis), double(d)));
    P.points.reserve(total);
    for (Eigen::Index k = 0; k < total; ++k) {
      Eigen::VectorXd p(d);
      Eigen::Index rem = k;
      for (Eigen::Index j = 0; j < d; ++j) {
        const Eigen::Index digit = rem % per_axis;
        rem /= per_axis;
        p(j) = per_axis == 1 ? 0.0 : -radius + 2.0 * radius * double(digit) / double(per_axis - 1);
      }
      P.points.emplace_back(std::move(p));
    }
    return P;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  P.points.reserve(count);
  P.points.emplace_back(Eigen::VectorXd::Zero(d));
  for (Eigen::Index k = 1; k < count; ++k) {
    Eigen::VectorXd p(d);
    for (Eigen::Index j = 0; j < d; ++j) p(j) = radius * normal(rng);
    P.points.emplace_back(std::move(p));
  }
  return P;
}

Eigen::MatrixXcd kernel_matrix(const QuantumCF& f, const PointSet& P, const SymplecticForm& J) {
  if (P.points.empty()) throw std::invalid_argument("kernel_matrix: empty point set");
  if (f.dim() != 2 * P.n || J.n != P.n)
    throw std::invalid_argument("kernel_matrix: dimension mismatch");
  const Eigen::Index m = Eigen::Index(P.points.size());
  Eigen::MatrixXcd K(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::VectorXd& xi = P.points[size_t(i)].coords;
    for (Eigen::Index j = 0; j < m; ++j) {
      const Eigen::VectorXd& xj = P.points[size_t(j)].coords;
      const Complex twist = std::exp(Complex(0.0, xi.dot(J.matrix * xj)));
      K(i, j) = eval_quantum(f, PhaseVector(xj - xi)) * twist;
    }
  }
  check_hermitian(K, "kernel_matrix");
  return K;
}

KernelReport verify_bochner(const QuantumCF& f, const PointSet& P, const SymplecticForm& J, double tol) {
  return spectrum_report(kernel_matrix(f, P, J), KernelKind::twisted, tol);
}

KernelReport verify_classical_pd(const ClassicalCF& phi, const PointSet& P, double tol) {
  if (P.points.empty()) throw std::invalid_argument("verify_classical_pd: empty point set");
  const Eigen::Index m = Eigen::Index(P.points.size());
  Eigen::MatrixXcd K(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      K(i, j) = eval_classical(phi, PhaseVector(P.points[size_t(j)].coords - P.points[size_t(i)].coords));
  check_hermitian(K, "verify_classical_pd");
  return spectrum_report(K, KernelKind::classical, tol);
}

KernelReport verify_classical_pd_1d(const std::function<Complex(double)>& g,
                                    const std::vector<double>& ts, double tol) {
  if (ts.empty()) throw std::invalid_argument("verify_classical_pd_1d: empty point list");
  const Eigen::Index m = Eigen::Index(ts.size());
  Eigen::MatrixXcd K(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) K(i, j) = g(ts[size_t(j)] - ts[size_t(i)]);
  check_hermitian(K, "verify_classical_pd_1d");
  return spectrum_report(K, KernelKind::classical, tol);
}

}  // namespace twistconv
