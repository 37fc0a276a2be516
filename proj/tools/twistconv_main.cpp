// twistconv command line: validation, composition, evolution, kernel
// certification and the brute-force Fock identity suite for twisted
// convolution channels.
//
// Exit codes: 0 success, 1 mathematical failure (inadmissible triple,
// non-positive kernel, failing identity), 2 input error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twistconv/bochner.hpp"
#include "twistconv/fock.hpp"
#include "twistconv/io.hpp"

namespace {

using namespace twistconv;

constexpr int kExitOk = 0;
constexpr int kExitMathFailure = 1;
constexpr int kExitInputError = 2;

void print_spectrum(const PsdReport& report) {
  std::cout << std::setprecision(15);
  std::cout << "eigenvalues:";
  for (Eigen::Index k = 0; k < report.eigenvalues.size(); ++k)
    std::cout << ' ' << report.eigenvalues(k);
  std::cout << "\nmin_eigenvalue: " << report.min_eigenvalue
            << "\ntolerance: " << report.tolerance
            << "\nverdict: " << (report.is_psd ? "admissible" : "inadmissible") << "\n";
}

std::vector<double> parse_times(const std::string& csv) {
  std::vector<double> times;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    times.push_back(std::stod(item));
  }
  if (times.empty()) throw std::invalid_argument("times: empty list");
  for (size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 0.0) throw std::invalid_argument("times: must be non-negative");
    if (k > 0 && times[k] <= times[k - 1])
      throw std::invalid_argument("times: must be strictly increasing");
  }
  return times;
}

// "x1,y1,...;x1,y1,..." -> list of phase vectors
std::vector<PhaseVector> parse_xi_list(const std::string& text, Eigen::Index dim) {
  std::vector<PhaseVector> points;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.empty()) continue;
    std::vector<double> coords;
    std::stringstream ss(group);
    std::string item;
    while (std::getline(ss, item, ',')) coords.push_back(std::stod(item));
    if (Eigen::Index(coords.size()) != dim)
      throw std::invalid_argument("xi: each point needs " + std::to_string(dim) + " coordinates");
    Eigen::VectorXd x(dim);
    for (Eigen::Index j = 0; j < dim; ++j) x(j) = coords[size_t(j)];
    points.emplace_back(std::move(x));
  }
  return points;
}

int cmd_check_channel(const std::string& config, double tol) {
  const io::ChannelData data = io::read_channel_data(config);
  const PsdReport report = admissibility(data.M, data.A, build_symplectic_form(data.n), tol);
  print_spectrum(report);
  return report.is_psd ? kExitOk : kExitMathFailure;
}

int cmd_check_generator(const std::string& config, double tol) {
  const io::GeneratorData data = io::read_generator_data(config);
  const PsdReport report = check_generator(data.N, data.A, build_symplectic_form(data.n), tol);
  print_spectrum(report);
  return report.is_psd ? kExitOk : kExitMathFailure;
}

int cmd_compose(const std::string& first_path, const std::string& second_path,
                const std::string& out) {
  const TwistedChannel first = io::read_channel(first_path);
  const TwistedChannel second = io::read_channel(second_path);
  const TwistedChannel composed = compose(second, first);
  const PsdReport report =
      admissibility(composed.M(), composed.A(), build_symplectic_form(composed.modes()));
  if (!report.is_psd) {
    std::cerr << "composed channel failed admissibility re-check\n";
    return kExitMathFailure;
  }
  if (out.empty()) {
    std::cout << io::channel_to_string(composed);
  } else {
    io::write_channel(composed, out);
    std::cout << "wrote " << out << "\n";
  }
  return kExitOk;
}

int cmd_evolve(const std::string& config, const std::string& state_path, const std::string& times_csv,
               const std::string& out, const std::string& xi_list, double tol) {
  const io::GeneratorData gdata = io::read_generator_data(config);
  const PsdReport report = check_generator(gdata.N, gdata.A, build_symplectic_form(gdata.n), tol);
  if (!report.is_psd) {
    std::cerr << "generator failed its admissibility inequality\n";
    print_spectrum(report);
    return kExitMathFailure;
  }
  const SemigroupGenerator gen = make_generator(gdata.A, gdata.N, gdata.gamma, tol);

  const io::StateData state = io::read_state(state_path);
  if (state.n != gen.modes()) throw std::invalid_argument("evolve: state/generator mode mismatch");
  const std::vector<double> times = parse_times(times_csv);
  const std::vector<PhaseVector> xis = parse_xi_list(xi_list, gen.dim());
  const QuantumCF f0 = QuantumCF::gaussian_state(state.mean, state.covariance);

  std::ostringstream csv;
  csv << std::setprecision(15);
  csv << "t";
  for (Eigen::Index j = 1; j <= gen.dim(); ++j) csv << ",lambda_" << j;
  for (Eigen::Index r = 1; r <= gen.dim(); ++r)
    for (Eigen::Index c = 1; c <= gen.dim(); ++c) csv << ",K_" << r << c;
  for (size_t k = 1; k <= xis.size(); ++k) csv << ",re_f_" << k << ",im_f_" << k;
  csv << "\n";

  for (const double t : times) {
    const EvolvedChannelCache cache = make_evolved_cache(gen, t);
    const Eigen::MatrixXd& At = cache.channel.A();
    const Eigen::VectorXd mean = At.transpose() * state.mean;
    const Eigen::MatrixXd K =
        At.transpose() * state.covariance * At + 0.5 * cache.channel.M();
    csv << t;
    for (Eigen::Index j = 0; j < gen.dim(); ++j) csv << ',' << mean(j);
    for (Eigen::Index r = 0; r < gen.dim(); ++r)
      for (Eigen::Index c = 0; c < gen.dim(); ++c) csv << ',' << K(r, c);
    if (!xis.empty()) {
      const QuantumCF evolved = apply(cache.channel, f0);
      for (const PhaseVector& xi : xis) {
        const Complex value = eval_quantum(evolved, xi);
        csv << ',' << value.real() << ',' << value.imag();
      }
    }
    csv << "\n";
  }

  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream file(out);
    if (!file) throw std::invalid_argument("cannot write " + out);
    file << csv.str();
    std::cout << "wrote " << out << "\n";
  }
  return kExitOk;
}

int cmd_bochner(const std::string& config, Eigen::Index points, double radius, std::uint64_t seed,
                double tol) {
  const QuantumCF target = io::read_bochner_target(config);
  const SymplecticForm J = build_symplectic_form(target.modes());
  const PointSet P = sample_points(target.modes(), points, radius, seed);
  const KernelReport report = verify_bochner(target, P, J, tol);
  std::cout << std::setprecision(15);
  std::cout << "points: " << report.point_count << "\nmin_eigenvalue: " << report.min_eigenvalue
            << "\ntolerance: " << report.tolerance
            << "\nverdict: " << (report.is_positive ? "positive" : "not positive") << "\n";
  return report.is_positive ? kExitOk : kExitMathFailure;
}

int cmd_oracle(const std::string& config, Eigen::Index cutoff) {
  std::vector<Eigen::Index> cutoffs = {20, 30, 40};
  std::vector<std::string> identities;
  bool empty_suite = false;
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw std::invalid_argument("cannot open " + config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("suite config: ") + e.what());
    }
    if (j.contains("cutoffs")) cutoffs = j["cutoffs"].get<std::vector<Eigen::Index>>();
    if (j.contains("identities")) {
      identities = j["identities"].get<std::vector<std::string>>();
      empty_suite = identities.empty();
    }
    if (cutoffs.empty()) empty_suite = true;
  }
  if (cutoff > 0) cutoffs = {cutoff};

  std::cout << std::left << std::setw(22) << "identity" << std::setw(8) << "cutoff"
            << std::setw(14) << "residual" << std::setw(14) << "threshold" << "pass\n";
  if (empty_suite) return kExitOk;

  const auto reports = fock::run_identity_suite(cutoffs, identities);
  bool all_pass = true;
  std::cout << std::scientific << std::setprecision(3);
  for (const auto& r : reports) {
    all_pass = all_pass && r.pass;
    std::cout << std::left << std::setw(22) << r.identity << std::setw(8) << r.cutoff
              << std::setw(14) << r.max_residual << std::setw(14) << r.threshold
              << (r.pass ? "yes" : "NO");
    if (!r.detail.empty()) std::cout << "   [" << r.detail << "]";
    std::cout << "\n";
  }
  return all_pass ? kExitOk : kExitMathFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twisted convolution channels on bosonic phase space"};
  app.require_subcommand(1);

  std::string config, config2, state_path, out, times_csv = "0", xi_list;
  double tol = kDefaultPsdTol;
  double kernel_tol = kDefaultKernelTol;
  double radius = 2.0;
  std::uint64_t seed = 1;
  Eigen::Index points = 50;
  Eigen::Index cutoff = 0;

  auto* check_channel = app.add_subcommand(
      "check-channel", "validate a channel file against the twist inequality");
  check_channel->add_option("--config", config, "channel file")->required();
  check_channel->add_option("--tol", tol, "PSD tolerance");

  auto* check_generator = app.add_subcommand(
      "check-generator", "validate a generator file against the rate inequality");
  check_generator->add_option("--config", config, "generator file")->required();
  check_generator->add_option("--tol", tol, "PSD tolerance");

  auto* compose_cmd = app.add_subcommand(
      "compose", "compose two channels (the --config channel acts first)");
  compose_cmd->add_option("--config", config, "channel applied first")->required();
  compose_cmd->add_option("--config2", config2, "channel applied second")->required();
  compose_cmd->add_option("--out", out, "output channel file (stdout when omitted)");

  auto* evolve = app.add_subcommand(
      "evolve", "evolve a Gaussian state under a generator; writes a CSV trajectory");
  evolve->add_option("--config", config, "generator file")->required();
  evolve->add_option("--state", state_path, "initial Gaussian state file")->required();
  evolve->add_option("--times", times_csv, "comma-separated, strictly increasing");
  evolve->add_option("--out", out, "output CSV path (stdout when omitted)");
  evolve->add_option("--xi", xi_list, "qcf sample points, \"x1,y1,...;x1,y1,...\"");
  evolve->add_option("--tol", tol, "PSD tolerance");

  auto* bochner_cmd = app.add_subcommand(
      "bochner", "certify a state or channel-output file on a sampled twisted kernel");
  bochner_cmd->add_option("--config", config, "state or {state, channel} file")->required();
  bochner_cmd->add_option("--points", points, "point count (default 50)");
  bochner_cmd->add_option("--radius", radius, "sampling radius (default 2)");
  bochner_cmd->add_option("--seed", seed, "point-set seed");
  bochner_cmd->add_option("--tol", kernel_tol, "kernel spectrum tolerance");

  auto* oracle = app.add_subcommand(
      "oracle", "run the truncated-Fock identity suite and print a report table");
  oracle->add_option("--config", config, "suite file: {cutoffs: [...], identities: [...]}");
  oracle->add_option("--cutoff", cutoff, "single cutoff override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check_channel->parsed()) return cmd_check_channel(config, tol);
    if (check_generator->parsed()) return cmd_check_generator(config, tol);
    if (compose_cmd->parsed()) return cmd_compose(config, config2, out);
    if (evolve->parsed()) return cmd_evolve(config, state_path, times_csv, out, xi_list, tol);
    if (bochner_cmd->parsed()) return cmd_bochner(config, points, radius, seed, kernel_tol);
    if (oracle->parsed()) return cmd_oracle(config, cutoff);
  } catch (const AdmissibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    print_spectrum(e.report);
    return kExitMathFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMathFailure;
  }
  return kExitInputError;
}
