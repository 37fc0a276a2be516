#ifndef TWISTCONV_CHAR_FN_HPP
#define TWISTCONV_CHAR_FN_HPP

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "twistconv/phase_space.hpp"

namespace twistconv {

/// A weighted location in phase space. Used both for finite Lévy measures
/// (weight = jump rate > 0) and for discrete probability measures
/// (weight = probability).
struct Atom {
  Eigen::VectorXd eta;
  double weight = 0.0;
};

/// Lévy–Khintchine exponent on R^{2n},
///
///   gamma(xi) = -xi^T B xi - i lambda^T xi
///               + sum_k w_k (e^{i eta_k.xi} - 1 - i eta_k.xi / (1+|eta_k|^2))
///               + external_gamma(xi)                        (if supplied)
///
/// with B PSD and a finite atom list (every location nonzero, every weight
/// positive). Finite atom lists make the jump integral an exact sum; general
/// Lévy measures enter only through external_gamma, a black-box evaluator
/// whose conditional positive definiteness is the caller's responsibility
/// (validate() sample-checks gamma(0) = 0 and Re gamma <= 0, nothing more).
struct LevyFunction {
  Eigen::Index n = 0;  // mode count; arguments live in R^{2n}
  Eigen::VectorXd drift;
  Eigen::MatrixXd gaussian_part;
  std::vector<Atom> atoms;
  std::function<Complex(const Eigen::VectorXd&)> external_gamma;

  static LevyFunction zero(Eigen::Index modes);
  static LevyFunction from_atoms(Eigen::Index modes, std::vector<Atom> atoms);

  Eigen::Index dim() const { return 2 * n; }
  bool is_zero() const;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

Complex eval_gamma(const LevyFunction& gamma, const PhaseVector& xi);

/// Characteristic function of a probability law on R^{2n}, as a closed
/// algebra of closed-form cases. NOTE the quadratic convention: the Gaussian
/// case carries the probabilist's 1/2,
///
///   Gaussian(mu, Sigma):  exp(i mu^T xi - (1/2) xi^T Sigma xi),
///
/// unlike QuantumCF::gaussian_state which carries none. No conversion
/// helpers are provided between the two.
class ClassicalCF {
 public:
  struct Unit;
  struct Gaussian;
  struct PointMass;
  struct CompoundLevy;
  struct Discrete;
  struct Product;
  struct Pullback;
  struct Node;

  static ClassicalCF unit();
  static ClassicalCF gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance);
  static ClassicalCF point_mass(Eigen::VectorXd shift);
  static ClassicalCF compound_levy(LevyFunction levy);
  static ClassicalCF discrete(std::vector<Atom> atoms);
  static ClassicalCF product(std::vector<ClassicalCF> factors);
  static ClassicalCF pullback(ClassicalCF inner, Eigen::MatrixXd map);

  /// 0 means dimension-free (Unit); otherwise the 2n the cf lives on.
  Eigen::Index dim() const;
  const Node& node() const;

 private:
  explicit ClassicalCF(Node node);
  std::shared_ptr<const Node> node_;
};

struct ClassicalCF::Unit {};
struct ClassicalCF::Gaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // PSD
};
struct ClassicalCF::PointMass {
  Eigen::VectorXd shift;
};
struct ClassicalCF::CompoundLevy {
  LevyFunction levy;  // value: exp(gamma(xi))
};
struct ClassicalCF::Discrete {
  std::vector<Atom> atoms;  // value: sum_k p_k e^{i eta_k.xi}
};
struct ClassicalCF::Product {
  std::vector<ClassicalCF> factors;
};
struct ClassicalCF::Pullback {
  ClassicalCF inner;
  Eigen::MatrixXd map;  // value: inner(map * xi)
};
struct ClassicalCF::Node {
  std::variant<Unit, Gaussian, PointMass, CompoundLevy, Discrete, Product, Pullback> v;
};

inline const ClassicalCF::Node& ClassicalCF::node() const { return *node_; }

Complex eval_classical(const ClassicalCF& phi, const PhaseVector& xi);

/// Quantum characteristic function of a state (or a lazily channel-mapped
/// state). The Gaussian case uses the quantum convention WITHOUT the 1/2:
///
///   gaussian_state(lambda, K):  exp(i lambda^T xi - xi^T K xi),
///
/// so the vacuum is K = I/2. ChannelOutput composes lazily; no grids are
/// ever materialized.
class QuantumCF {
 public:
  struct GaussianState;
  struct BlackBox;
  struct ChannelOutput;
  struct Node;

  static QuantumCF gaussian_state(Eigen::VectorXd mean, Eigen::MatrixXd covariance);
  static QuantumCF black_box(Eigen::Index modes, std::function<Complex(const Eigen::VectorXd&)> evaluator);
  static QuantumCF channel_output(QuantumCF base, Eigen::MatrixXd A, Eigen::MatrixXd M, ClassicalCF phi);

  /// Vacuum state, K = I/2.
  static QuantumCF vacuum(Eigen::Index modes);
  /// Coherent state of amplitude alpha: mean_j = (-2 Im alpha_j, 2 Re alpha_j), K = I/2.
  static QuantumCF coherent(const Eigen::VectorXcd& alpha);

  Eigen::Index dim() const;
  Eigen::Index modes() const { return dim() / 2; }
  const Node& node() const;

 private:
  explicit QuantumCF(Node node);
  std::shared_ptr<const Node> node_;
};

struct QuantumCF::GaussianState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // K; validity as a state is NOT enforced here
};
struct QuantumCF::BlackBox {
  Eigen::Index n = 0;
  std::function<Complex(const Eigen::VectorXd&)> evaluator;  // must be pure and reentrant
};
struct QuantumCF::ChannelOutput {
  QuantumCF base;
  Eigen::MatrixXd A;
  Eigen::MatrixXd M;
  ClassicalCF phi;  // value: base(A xi) * exp(-(1/2) xi^T M xi) * phi(xi)
};
struct QuantumCF::Node {
  std::variant<GaussianState, BlackBox, ChannelOutput> v;
};

inline const QuantumCF::Node& QuantumCF::node() const { return *node_; }

Complex eval_quantum(const QuantumCF& f, const PhaseVector& xi);

/// f(t * xi) for fixed xi != 0: as a function of t this is the classical cf
/// of the observable canonically attached to the direction xi.
Complex section_cf(const QuantumCF& f, const PhaseVector& xi, double t);

enum class Marginal { position, momentum };

/// Joint-marginal cf: position embeds r as (0, r_1, 0, r_2, ...) and gives
/// the cf of sqrt(2)*(q_1..q_n); momentum embeds as (r_1, 0, r_2, 0, ...)
/// and gives the cf of -sqrt(2)*(p_1..p_n).
Complex marginal_cf(const QuantumCF& f, Marginal which, const Eigen::VectorXd& r);

/// cf of the discrete probability measure sum p_k delta_{eta_k}, precomposed
/// with 2J: xi |-> sum_k p_k exp(i eta_k . (2 J xi)). Weights must form a
/// probability vector. A lone atom at the origin collapses to Unit.
ClassicalCF cf_from_measure(const std::vector<Atom>& atoms, const SymplecticForm& J);

}  // namespace twistconv

#endif  // TWISTCONV_CHAR_FN_HPP
