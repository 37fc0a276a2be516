#ifndef TWISTCONV_FOCK_HPP
#define TWISTCONV_FOCK_HPP

#include <string>
#include <utility>

#include "twistconv/semigroup.hpp"

namespace twistconv::fock {

/// One-mode operator truncated to the first D number levels.
struct FockOperator {
  Eigen::Index cutoff = 0;
  Eigen::MatrixXcd matrix;
};

/// Truncated density matrix: Hermitian, unit trace (renormalized against the
/// truncation tail), eigenvalues >= -1e-10. Build through make_density or
/// the state factories.
struct DensityMatrix {
  Eigen::Index cutoff = 0;
  Eigen::MatrixXcd matrix;
};

/// Result of one brute-force identity check. pass is max_residual <=
/// threshold; thresholds are calibrated per cutoff by the convergence sweep,
/// not asserted a priori.
struct OracleReport {
  std::string identity;
  double max_residual = 0.0;
  Eigen::Index cutoff = 0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

/// Truncation quarantine: operator identities are asserted on the top-left
/// min(10, D/2) levels only. A displacement of amplitude |z| couples roughly
/// 2|z| sqrt(n) levels around level n, so residuals near the cutoff are
/// dominated by genuine truncation leakage; a fixed low-level block makes
/// the residuals comparable (and monotone) across cutoffs.
Eigen::Index safe_block_levels(Eigen::Index D);

/// Max |entry| over the top-left safe block.
double safe_block_max(const Eigen::MatrixXcd& R);

/// (a, a^dagger) with a|k> = sqrt(k)|k-1>.
std::pair<FockOperator, FockOperator> ladder_ops(Eigen::Index D);

/// (q, p) = ((a + a^dag)/sqrt(2), (a - a^dag)/(i sqrt(2))).
std::pair<FockOperator, FockOperator> quadrature_ops(Eigen::Index D);

/// exp(z a^dag - conj(z) a). Throws when |z| > D/8 (truncation-safety bound).
FockOperator weyl_matrix(Complex z, Eigen::Index D);

/// The phase-space form W~(xi) = weyl_matrix(xi_1 + i xi_2) for one mode.
FockOperator weyl_tilde(const PhaseVector& xi, Eigen::Index D);

DensityMatrix make_density(Eigen::MatrixXcd matrix);
DensityMatrix vacuum_state(Eigen::Index D);
DensityMatrix coherent_state(Complex alpha, Eigen::Index D);
/// Ginibre state G G^dag / tr on the first support_levels number levels
/// (default min(12, D/2)), embedded at cutoff D; deterministic in the seed.
/// Low support keeps displaced copies clear of the truncation edge.
DensityMatrix random_state(Eigen::Index D, std::uint64_t seed, Eigen::Index support_levels = 0);

/// Tr(rho W~(xi)).
Complex qcf_trace(const DensityMatrix& rho, const PhaseVector& xi);

/// Residuals of [a, W(z)] - z W(z) and [a^dag, W(z)] - conj(z) W(z) on the
/// safe block.
OracleReport commutation_checks(Complex z, Eigen::Index D, double threshold = 1e-8);

/// Residual of W(z) W(z') - e^{-i Im<z|z'>} W(z + z') on the safe block.
OracleReport weyl_composition_check(Complex z1, Complex z2, Eigen::Index D,
                                    double threshold = 1e-8);

/// Residual of weyl_matrix against exp(i sqrt(2)(xi_2 q - xi_1 p)).
OracleReport lemma1_check(const PhaseVector& xi, Eigen::Index D, double threshold = 1e-8);

/// Residuals of vacuum and coherent traces against their closed forms over
/// a deterministic |xi| <= 2 sample.
OracleReport qcf_closed_form_check(Eigen::Index D, double threshold = 1e-8);

/// Conjugates rho by W~(eta) (the random-displacement direction) and tests
/// Tr(W~(eta) rho W~(eta)^{-1} W~(xi)) = e^{2i eta^T J xi} Tr(rho W~(xi)).
/// The factor-1 variant e^{i eta^T J xi} is also evaluated and recorded in
/// detail; the factor-2 form is the one that must pass.
OracleReport conjugation_phase_check(const DensityMatrix& rho, const PhaseVector& eta,
                                     const PhaseVector& xi, double threshold = 1e-7);

/// Builds rho' = sum_k p_k W~(eta_k) rho W~(eta_k)^{-1} and compares its qcf
/// with qcf(rho) * mu^hat(2 J xi) over seeded random xi.
OracleReport mixture_channel_check(const DensityMatrix& rho, const std::vector<Atom>& atoms,
                                   double threshold = 1e-6, Eigen::Index xi_count = 50,
                                   std::uint64_t seed = 7);

/// The four translation identities between phase-variable multiplication /
/// differentiation of the qcf and left/right q, p multiplications of rho.
OracleReport phase_action_checks(const DensityMatrix& rho, const PhaseVector& xi,
                                 double threshold = 1e-5);

/// For a one-mode generator with zero Lévy part: builds L rho from the
/// left/right multiplication families (drift = sum_ij (A^T)_ij X_i Y_j,
/// potential = -(1/2) sum_ij N_ij X_i X_j) and compares Tr((L rho) W~(xi))
/// with the dynamical generator acting on the qcf by finite differences.
/// detail records a 2^4 sign-assignment sweep; the canonical assignment
/// must be the arg-min.
OracleReport operator_generator_check(const SemigroupGenerator& gen, const DensityMatrix& rho,
                                      double threshold = 1e-5, Eigen::Index xi_count = 20,
                                      std::uint64_t seed = 11);

/// Runs every identity at each cutoff with sweep-calibrated thresholds.
/// identities, when non-empty, filters by report name prefix.
std::vector<OracleReport> run_identity_suite(const std::vector<Eigen::Index>& cutoffs,
                                             const std::vector<std::string>& identities = {});

}  // namespace twistconv::fock

#endif  // TWISTCONV_FOCK_HPP
