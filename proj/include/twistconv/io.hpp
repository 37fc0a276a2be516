#ifndef TWISTCONV_IO_HPP
#define TWISTCONV_IO_HPP

#include <filesystem>
#include <string>

#include "twistconv/channel.hpp"
#include "twistconv/semigroup.hpp"

namespace twistconv::io {

/// Raw channel description, before the admissibility gate. check-channel
/// style tooling needs access to inadmissible triples.
struct ChannelData {
  Eigen::Index n = 0;
  Eigen::MatrixXd A;
  Eigen::MatrixXd M;
  ClassicalCF phi = ClassicalCF::unit();
};

struct GeneratorData {
  Eigen::Index n = 0;
  Eigen::MatrixXd A;
  Eigen::MatrixXd N;
  LevyFunction gamma;
};

/// Gaussian state description (quantum convention, no 1/2):
/// f(xi) = exp(i mean.xi - xi^T covariance xi).
struct StateData {
  Eigen::Index n = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// A bochner target: either a bare Gaussian state file or
/// {"state": ..., "channel": ...} for a lazily channel-mapped state.
QuantumCF read_bochner_target(const std::filesystem::path& path);

ChannelData read_channel_data(const std::filesystem::path& path);
TwistedChannel read_channel(const std::filesystem::path& path);
void write_channel(const TwistedChannel& ch, const std::filesystem::path& path);

GeneratorData read_generator_data(const std::filesystem::path& path);
SemigroupGenerator read_generator(const std::filesystem::path& path);

StateData read_state(const std::filesystem::path& path);

/// Parse/serialize helpers exposed for round-trip tests.
std::string channel_to_string(const TwistedChannel& ch);
ChannelData channel_data_from_string(const std::string& text);

}  // namespace twistconv::io

#endif  // TWISTCONV_IO_HPP
