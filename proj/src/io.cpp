#include "twistconv/io.hpp"

#include <fstream>

#include <json.hpp>

namespace twistconv::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument("spec file: " + what); }

json load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(path.string() + ": " + e.what());
  }
}

Eigen::VectorXd parse_vector(const json& j, Eigen::Index dim, const char* field) {
  if (!j.is_array() || Eigen::Index(j.size()) != dim) fail(std::string(field) + ": expected array of length " + std::to_string(dim));
  Eigen::VectorXd v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (!j[size_t(k)].is_number()) fail(std::string(field) + ": non-numeric entry");
    v(k) = j[size_t(k)].get<double>();
  }
  return v;
}

// Row-major flat array of length dim^2.
Eigen::MatrixXd parse_matrix(const json& j, Eigen::Index dim, const char* field) {
  if (!j.is_array() || Eigen::Index(j.size()) != dim * dim)
    fail(std::string(field) + ": expected row-major array of length " + std::to_string(dim * dim));
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      const json& e = j[size_t(r * dim + c)];
      if (!e.is_number()) fail(std::string(field) + ": non-numeric entry");
      m(r, c) = e.get<double>();
    }
  return m;
}

json dump_vector(const Eigen::VectorXd& v) {
  json j = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) j.push_back(v(k));
  return j;
}

json dump_matrix(const Eigen::MatrixXd& m) {
  json j = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) j.push_back(m(r, c));
  return j;
}

std::vector<Atom> parse_atoms(const json& j, Eigen::Index dim) {
  if (!j.is_array()) fail("atoms: expected array");
  std::vector<Atom> atoms;
  for (const json& a : j) {
    if (!a.is_object() || !a.contains("eta") || !a.contains("weight")) fail("atoms: entries need eta and weight");
    atoms.push_back(Atom{parse_vector(a["eta"], dim, "eta"), a["weight"].get<double>()});
  }
  return atoms;
}

json dump_atoms(const std::vector<Atom>& atoms) {
  json j = json::array();
  for (const Atom& a : atoms) j.push_back(json{{"eta", dump_vector(a.eta)}, {"weight", a.weight}});
  return j;
}

LevyFunction parse_gamma(const json& j, Eigen::Index n) {
  LevyFunction g = LevyFunction::zero(n);
  if (j.is_null()) return g;
  if (!j.is_object()) fail("gamma: expected object");
  if (j.contains("drift")) g.drift = parse_vector(j["drift"], 2 * n, "drift");
  if (j.contains("atoms")) g.atoms = parse_atoms(j["atoms"], 2 * n);
  g.validate();
  return g;
}

ClassicalCF parse_phi(const json& j, Eigen::Index dim) {
  if (!j.is_object() || !j.contains("type")) fail("phi: expected object with a type tag");
  const std::string type = j["type"].get<std::string>();
  if (type == "unit") return ClassicalCF::unit();
  if (type == "gaussian")
    return ClassicalCF::gaussian(parse_vector(j.at("mean"), dim, "phi.mean"),
                                 parse_matrix(j.at("covariance"), dim, "phi.covariance"));
  if (type == "point_mass") return ClassicalCF::point_mass(parse_vector(j.at("eta"), dim, "phi.eta"));
  if (type == "compound_levy") return ClassicalCF::compound_levy(parse_gamma(j.at("gamma"), dim / 2));
  if (type == "discrete") return ClassicalCF::discrete(parse_atoms(j.at("atoms"), dim));
  if (type == "product") {
    std::vector<ClassicalCF> factors;
    for (const json& f : j.at("factors")) factors.push_back(parse_phi(f, dim));
    return ClassicalCF::product(std::move(factors));
  }
  if (type == "pullback")
    return ClassicalCF::pullback(parse_phi(j.at("inner"), dim), parse_matrix(j.at("map"), dim, "phi.map"));
  fail("phi: unknown type '" + type + "'");
}

json dump_phi(const ClassicalCF& phi) {
  struct Visitor {
    json operator()(const ClassicalCF::Unit&) const { return json{{"type", "unit"}}; }
    json operator()(const ClassicalCF::Gaussian& g) const {
      return json{{"type", "gaussian"}, {"mean", dump_vector(g.mean)}, {"covariance", dump_matrix(g.covariance)}};
    }
    json operator()(const ClassicalCF::PointMass& p) const {
      return json{{"type", "point_mass"}, {"eta", dump_vector(p.shift)}};
    }
    json operator()(const ClassicalCF::CompoundLevy& c) const {
      if (c.levy.external_gamma)
        fail("phi: a black-box Lévy exponent is not serializable");
      json g{{"atoms", dump_atoms(c.levy.atoms)}};
      if (c.levy.drift.size() != 0 && !c.levy.drift.isZero(0.0)) g["drift"] = dump_vector(c.levy.drift);
      return json{{"type", "compound_levy"}, {"gamma", std::move(g)}};
    }
    json operator()(const ClassicalCF::Discrete& d) const {
      return json{{"type", "discrete"}, {"atoms", dump_atoms(d.atoms)}};
    }
    json operator()(const ClassicalCF::Product& p) const {
      json factors = json::array();
      for (const ClassicalCF& f : p.factors) factors.push_back(dump_phi(f));
      return json{{"type", "product"}, {"factors", std::move(factors)}};
    }
    json operator()(const ClassicalCF::Pullback& p) const {
      return json{{"type", "pullback"}, {"inner", dump_phi(p.inner)}, {"map", dump_matrix(p.map)}};
    }
  };
  return std::visit(Visitor{}, phi.node().v);
}

Eigen::Index parse_mode_count(const json& j) {
  if (!j.is_object() || !j.contains("n")) fail("missing field n");
  const Eigen::Index n = j["n"].get<Eigen::Index>();
  if (n < 1) fail("n must be >= 1");
  return n;
}

ChannelData channel_data_from_json(const json& j) {
  ChannelData data;
  data.n = parse_mode_count(j);
  data.A = parse_matrix(j.at("A"), 2 * data.n, "A");
  data.M = parse_matrix(j.at("M"), 2 * data.n, "M");
  data.phi = j.contains("phi") ? parse_phi(j["phi"], 2 * data.n) : ClassicalCF::unit();
  return data;
}

}  // namespace

ChannelData read_channel_data(const std::filesystem::path& path) {
  return channel_data_from_json(load(path));
}

TwistedChannel read_channel(const std::filesystem::path& path) {
  ChannelData data = read_channel_data(path);
  return make_channel(std::move(data.phi), std::move(data.M), std::move(data.A));
}

void write_channel(const TwistedChannel& ch, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path.string());
  out << channel_to_string(ch);
}

std::string channel_to_string(const TwistedChannel& ch) {
  json j{{"n", ch.modes()},
         {"A", dump_matrix(ch.A())},
         {"M", dump_matrix(ch.M())},
         {"phi", dump_phi(ch.phi())}};
  return j.dump(2) + "\n";
}

ChannelData channel_data_from_string(const std::string& text) {
  try {
    return channel_data_from_json(json::parse(text));
  } catch (const json::exception& e) {
    fail(e.what());
  }
}

GeneratorData read_generator_data(const std::filesystem::path& path) {
  const json j = load(path);
  GeneratorData data;
  data.n = parse_mode_count(j);
  data.A = parse_matrix(j.at("A"), 2 * data.n, "A");
  data.N = parse_matrix(j.at("N"), 2 * data.n, "N");
  data.gamma = parse_gamma(j.contains("gamma") ? j["gamma"] : json(), data.n);
  return data;
}

SemigroupGenerator read_generator(const std::filesystem::path& path) {
  GeneratorData data = read_generator_data(path);
  return make_generator(std::move(data.A), std::move(data.N), std::move(data.gamma));
}

StateData read_state(const std::filesystem::path& path) {
  const json j = load(path);
  StateData data;
  data.n = parse_mode_count(j);
  data.mean = parse_vector(j.at("mean"), 2 * data.n, "mean");
  data.covariance = parse_matrix(j.at("covariance"), 2 * data.n, "covariance");
  return data;
}

QuantumCF read_bochner_target(const std::filesystem::path& path) {
  const json j = load(path);
  if (j.is_object() && j.contains("state")) {
    const json& js = j["state"];
    StateData state;
    state.n = parse_mode_count(js);
    state.mean = parse_vector(js.at("mean"), 2 * state.n, "mean");
    state.covariance = parse_matrix(js.at("covariance"), 2 * state.n, "covariance");
    QuantumCF f = QuantumCF::gaussian_state(state.mean, state.covariance);
    if (j.contains("channel")) {
      ChannelData cd = channel_data_from_json(j["channel"]);
      if (cd.n != state.n) fail("bochner target: state/channel mode mismatch");
      f = apply(make_channel(std::move(cd.phi), std::move(cd.M), std::move(cd.A)), f);
    }
    return f;
  }
  StateData state;
  state.n = parse_mode_count(j);
  state.mean = parse_vector(j.at("mean"), 2 * state.n, "mean");
  state.covariance = parse_matrix(j.at("covariance"), 2 * state.n, "covariance");
  return QuantumCF::gaussian_state(state.mean, state.covariance);
}

}  // namespace twistconv::io
