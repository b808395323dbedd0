#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <hpdwav/simulate.hpp>
#include <hpdwav/spectral.hpp>

namespace hpdwav::cli {

/// Bad flags, bad config documents, unreadable inputs. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ThresholdKind { Tree, Linear };

/// Settings shared by the subcommands. Loaded from a JSON document and then
/// overridden by explicit flags.
struct RunConfig {
  Order order{3, 3};
  ThresholdKind threshold = ThresholdKind::Tree;
  std::optional<double> lambda;  // unset: universal penalty
  std::optional<int> max_scale;
  std::optional<int> linear_scale;  // j0 for linear thresholding
  NoiseSpec noise;
  bool noise_enabled = true;
  SpectralConfig spectral;
  std::uint64_t seed = 0;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

/// "N1,N2" with odd positive entries.
Order parse_order(const std::string& text);
/// "n1,n2" with positive entries.
std::pair<int, int> parse_size(const std::string& text);
/// "universal" or a non-negative number.
std::optional<double> parse_lambda(const std::string& text);
/// "normal", "wishart" or "none".
void parse_noise_kind(const std::string& text, RunConfig& config);

}  // namespace hpdwav::cli
