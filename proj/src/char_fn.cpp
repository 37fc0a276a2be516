#include "twistconv/char_fn.hpp"

#include <cmath>

namespace twistconv {

namespace {

void require_dim(const PhaseVector& xi, Eigen::Index dim, const char* who) {
  if (dim != 0 && xi.dim() != dim)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

// Dimensions 0 act as wildcards (Unit factors).
Eigen::Index merge_dims(Eigen::Index a, Eigen::Index b, const char* who) {
  if (a == 0) return b;
  if (b == 0) return a;
  if (a != b) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  return a;
}

}  // namespace

LevyFunction LevyFunction::zero(Eigen::Index modes) {
  LevyFunction g;
  g.n = modes;
  g.drift = Eigen::VectorXd::Zero(2 * modes);
  g.gaussian_part = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  g.validate();
  return g;
}

LevyFunction LevyFunction::from_atoms(Eigen::Index modes, std::vector<Atom> atoms) {
  LevyFunction g = zero(modes);
  g.atoms = std::move(atoms);
  g.validate();
  return g;
}

bool LevyFunction::is_zero() const {
  return atoms.empty() && !external_gamma &&
         (drift.size() == 0 || drift.isZero(0.0)) &&
         (gaussian_part.size() == 0 || gaussian_part.isZero(0.0));
}

void LevyFunction::validate() const {
  if (n < 1) throw std::invalid_argument("LevyFunction: mode count must be >= 1");
  if (drift.size() != 0 && drift.size() != dim())
    throw std::invalid_argument("LevyFunction: drift dimension mismatch");
  if (gaussian_part.size() != 0) {
    if (gaussian_part.rows() != dim() || gaussian_part.cols() != dim())
      throw std::invalid_argument("LevyFunction: gaussian_part dimension mismatch");
    if (!hermitian_psd_check(gaussian_part).is_psd)
      throw std::invalid_argument("LevyFunction: gaussian_part must be PSD");
  }
  for (const Atom& a : atoms) {
    if (a.eta.size() != dim())
      throw std::invalid_argument("LevyFunction: atom dimension mismatch");
    if (a.eta.norm() == 0.0)
      throw std::invalid_argument("LevyFunction: atom locations must be nonzero");
    if (!(a.weight > 0.0))
      throw std::invalid_argument("LevyFunction: atom weights must be positive");
  }
  if (external_gamma) {
    // Sample check: gamma(0) = 0 and Re gamma <= 0 along the axes.
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(dim());
    if (std::abs(external_gamma(zero)) > 1e-10)
      throw std::invalid_argument("LevyFunction: external_gamma(0) must be 0");
    for (Eigen::Index j = 0; j < dim(); ++j) {
      for (double s : {0.5, 1.0, 2.0}) {
        Eigen::VectorXd xi = Eigen::VectorXd::Zero(dim());
        xi(j) = s;
        if (external_gamma(xi).real() > 1e-9)
          throw std::invalid_argument("LevyFunction: external_gamma has positive real part on samples");
      }
    }
  }
}

Complex eval_gamma(const LevyFunction& gamma, const PhaseVector& xi) {
  require_dim(xi, gamma.dim(), "eval_gamma");
  const Eigen::VectorXd& x = xi.coords;
  Complex value(0.0, 0.0);
  if (gamma.gaussian_part.size() != 0) value -= x.dot(gamma.gaussian_part * x);
  if (gamma.drift.size() != 0) value -= Complex(0.0, gamma.drift.dot(x));
  for (const Atom& a : gamma.atoms) {
    const double dot = a.eta.dot(x);
    const double comp = dot / (1.0 + a.eta.squaredNorm());
    value += a.weight * (std::exp(Complex(0.0, dot)) - 1.0 - Complex(0.0, comp));
  }
  if (gamma.external_gamma) value += gamma.external_gamma(x);
  return value;
}

ClassicalCF::ClassicalCF(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

ClassicalCF ClassicalCF::unit() { return ClassicalCF(Node{Unit{}}); }

ClassicalCF ClassicalCF::gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance) {
  if (mean.size() == 0 || mean.size() % 2 != 0)
    throw std::invalid_argument("ClassicalCF::gaussian: mean must have even nonzero length");
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size())
    throw std::invalid_argument("ClassicalCF::gaussian: covariance dimension mismatch");
  if (!hermitian_psd_check(covariance).is_psd)
    throw std::invalid_argument("ClassicalCF::gaussian: covariance must be PSD");
  return ClassicalCF(Node{Gaussian{std::move(mean), std::move(covariance)}});
}

ClassicalCF ClassicalCF::point_mass(Eigen::VectorXd shift) {
  if (shift.size() == 0 || shift.size() % 2 != 0)
    throw std::invalid_argument("ClassicalCF::point_mass: shift must have even nonzero length");
  return ClassicalCF(Node{PointMass{std::move(shift)}});
}

ClassicalCF ClassicalCF::compound_levy(LevyFunction levy) {
  levy.validate();
  return ClassicalCF(Node{CompoundLevy{std::move(levy)}});
}

ClassicalCF ClassicalCF::discrete(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("ClassicalCF::discrete: empty atom list");
  const Eigen::Index d = atoms.front().eta.size();
  if (d == 0 || d % 2 != 0)
    throw std::invalid_argument("ClassicalCF::discrete: atoms must have even nonzero dimension");
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (a.eta.size() != d) throw std::invalid_argument("ClassicalCF::discrete: atom dimension mismatch");
    if (a.weight < 0.0) throw std::invalid_argument("ClassicalCF::discrete: negative weight");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("ClassicalCF::discrete: weights must sum to 1");
  return ClassicalCF(Node{Discrete{std::move(atoms)}});
}

ClassicalCF ClassicalCF::product(std::vector<ClassicalCF> factors) {
  Eigen::Index d = 0;
  for (const ClassicalCF& f : factors) d = merge_dims(d, f.dim(), "ClassicalCF::product");
  return ClassicalCF(Node{Product{std::move(factors)}});
}

ClassicalCF ClassicalCF::pullback(ClassicalCF inner, Eigen::MatrixXd map) {
  if (map.rows() != map.cols() || map.rows() == 0 || map.rows() % 2 != 0)
    throw std::invalid_argument("ClassicalCF::pullback: map must be square with even size");
  merge_dims(inner.dim(), map.rows(), "ClassicalCF::pullback");
  return ClassicalCF(Node{Pullback{std::move(inner), std::move(map)}});
}

Eigen::Index ClassicalCF::dim() const {
  struct Visitor {
    Eigen::Index operator()(const Unit&) const { return 0; }
    Eigen::Index operator()(const Gaussian& g) const { return g.mean.size(); }
    Eigen::Index operator()(const PointMass& p) const { return p.shift.size(); }
    Eigen::Index operator()(const CompoundLevy& c) const { return c.levy.dim(); }
    Eigen::Index operator()(const Discrete& m) const { return m.atoms.front().eta.size(); }
    Eigen::Index operator()(const Product& p) const {
      Eigen::Index d = 0;
      for (const ClassicalCF& f : p.factors) d = merge_dims(d, f.dim(), "ClassicalCF::dim");
      return d;
    }
    Eigen::Index operator()(const Pullback& p) const { return p.map.rows(); }
  };
  return std::visit(Visitor{}, node_->v);
}

Complex eval_classical(const ClassicalCF& phi, const PhaseVector& xi) {
  require_dim(xi, phi.dim(), "eval_classical");
  struct Visitor {
    const PhaseVector& xi;
    Complex operator()(const ClassicalCF::Unit&) const { return Complex(1.0, 0.0); }
    Complex operator()(const ClassicalCF::Gaussian& g) const {
      const Eigen::VectorXd& x = xi.coords;
      return std::exp(Complex(-0.5 * x.dot(g.covariance * x), g.mean.dot(x)));
    }
    Complex operator()(const ClassicalCF::PointMass& p) const {
      return std::exp(Complex(0.0, p.shift.dot(xi.coords)));
    }
    Complex operator()(const ClassicalCF::CompoundLevy& c) const {
      return std::exp(eval_gamma(c.levy, xi));
    }
    Complex operator()(const ClassicalCF::Discrete& m) const {
      Complex value(0.0, 0.0);
      for (const Atom& a : m.atoms) value += a.weight * std::exp(Complex(0.0, a.eta.dot(xi.coords)));
      return value;
    }
    Complex operator()(const ClassicalCF::Product& p) const {
      Complex value(1.0, 0.0);
      for (const ClassicalCF& f : p.factors) value *= eval_classical(f, xi);
      return value;
    }
    Complex operator()(const ClassicalCF::Pullback& p) const {
      return eval_classical(p.inner, PhaseVector(p.map * xi.coords));
    }
  };
  return std::visit(Visitor{xi}, phi.node().v);
}

QuantumCF::QuantumCF(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

QuantumCF QuantumCF::gaussian_state(Eigen::VectorXd mean, Eigen::MatrixXd covariance) {
  if (mean.size() == 0 || mean.size() % 2 != 0)
    throw std::invalid_argument("QuantumCF::gaussian_state: mean must have even nonzero length");
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size())
    throw std::invalid_argument("QuantumCF::gaussian_state: covariance dimension mismatch");
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, covariance.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("QuantumCF::gaussian_state: covariance must be symmetric");
  return QuantumCF(Node{GaussianState{std::move(mean), std::move(covariance)}});
}

QuantumCF QuantumCF::black_box(Eigen::Index modes, std::function<Complex(const Eigen::VectorXd&)> evaluator) {
  if (modes < 1) throw std::invalid_argument("QuantumCF::black_box: mode count must be >= 1");
  if (!evaluator) throw std::invalid_argument("QuantumCF::black_box: null evaluator");
  return QuantumCF(Node{BlackBox{modes, std::move(evaluator)}});
}

QuantumCF QuantumCF::channel_output(QuantumCF base, Eigen::MatrixXd A, Eigen::MatrixXd M, ClassicalCF phi) {
  const Eigen::Index d = base.dim();
  if (A.rows() != d || A.cols() != d || M.rows() != d || M.cols() != d)
    throw std::invalid_argument("QuantumCF::channel_output: matrix dimension mismatch");
  merge_dims(d, phi.dim(), "QuantumCF::channel_output");
  return QuantumCF(Node{ChannelOutput{std::move(base), std::move(A), std::move(M), std::move(phi)}});
}

QuantumCF QuantumCF::vacuum(Eigen::Index modes) {
  return gaussian_state(Eigen::VectorXd::Zero(2 * modes),
                        0.5 * Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

QuantumCF QuantumCF::coherent(const Eigen::VectorXcd& alpha) {
  Eigen::VectorXd mean(2 * alpha.size());
  for (Eigen::Index j = 0; j < alpha.size(); ++j) {
    mean(2 * j) = -2.0 * alpha(j).imag();
    mean(2 * j + 1) = 2.0 * alpha(j).real();
  }
  return gaussian_state(std::move(mean),
                        0.5 * Eigen::MatrixXd::Identity(2 * alpha.size(), 2 * alpha.size()));
}

Eigen::Index QuantumCF::dim() const {
  struct Visitor {
    Eigen::Index operator()(const GaussianState& g) const { return g.mean.size(); }
    Eigen::Index operator()(const BlackBox& b) const { return 2 * b.n; }
    Eigen::Index operator()(const ChannelOutput& c) const { return c.base.dim(); }
  };
  return std::visit(Visitor{}, node_->v);
}

Complex eval_quantum(const QuantumCF& f, const PhaseVector& xi) {
  require_dim(xi, f.dim(), "eval_quantum");
  struct Visitor {
    const PhaseVector& xi;
    Complex operator()(const QuantumCF::GaussianState& g) const {
      const Eigen::VectorXd& x = xi.coords;
      return std::exp(Complex(-x.dot(g.covariance * x), g.mean.dot(x)));
    }
    Complex operator()(const QuantumCF::BlackBox& b) const { return b.evaluator(xi.coords); }
    Complex operator()(const QuantumCF::ChannelOutput& c) const {
      const Eigen::VectorXd& x = xi.coords;
      return eval_quantum(c.base, PhaseVector(c.A * x)) *
             std::exp(Complex(-0.5 * x.dot(c.M * x), 0.0)) * eval_classical(c.phi, xi);
    }
  };
  return std::visit(Visitor{xi}, f.node().v);
}

Complex section_cf(const QuantumCF& f, const PhaseVector& xi, double t) {
  if (xi.coords.norm() == 0.0)
    throw std::invalid_argument("section_cf: xi must be nonzero");
  return eval_quantum(f, PhaseVector(t * xi.coords));
}

Complex marginal_cf(const QuantumCF& f, Marginal which, const Eigen::VectorXd& r) {
  if (r.size() != f.modes()) throw std::invalid_argument("marginal_cf: r must have one entry per mode");
  Eigen::VectorXd embedded = Eigen::VectorXd::Zero(f.dim());
  for (Eigen::Index j = 0; j < r.size(); ++j) {
    if (which == Marginal::position)
      embedded(2 * j + 1) = r(j);
    else
      embedded(2 * j) = r(j);
  }
  return eval_quantum(f, PhaseVector(std::move(embedded)));
}

ClassicalCF cf_from_measure(const std::vector<Atom>& atoms, const SymplecticForm& J) {
  if (atoms.empty()) throw std::invalid_argument("cf_from_measure: empty measure");
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (a.eta.size() != 2 * J.n) throw std::invalid_argument("cf_from_measure: atom dimension mismatch");
    if (a.weight < 0.0) throw std::invalid_argument("cf_from_measure: negative weight");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("cf_from_measure: weights must sum to 1");
  if (atoms.size() == 1 && atoms.front().eta.norm() == 0.0) return ClassicalCF::unit();
  return ClassicalCF::pullback(ClassicalCF::discrete(atoms), 2.0 * J.matrix);
}

}  // namespace twistconv
