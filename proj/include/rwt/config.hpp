#pragma once

#include "rwt/policies.hpp"
#include "rwt/problems.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rwt {

struct RwtPolicy {
  double p_check = 0.2;
  friend bool operator==(const RwtPolicy&, const RwtPolicy&) = default;
};

struct CachedRwtPolicy {
  double p_check = 0.2;
  std::uint64_t cache_size = 1;
  VerdictReuse reuse = VerdictReuse::KeepSideObservations;
  friend bool operator==(const CachedRwtPolicy&, const CachedRwtPolicy&) = default;
};

struct SgdPolicy {
  SgdConfig sgd;
  friend bool operator==(const SgdPolicy&, const SgdPolicy&) = default;
};

struct PolicySpec {
  std::string name;
  std::variant<RwtPolicy, CachedRwtPolicy, SgdPolicy> kind;
  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

struct ExperimentConfig {
  std::string title = "experiment";
  ObjectiveSpec objective = ObjectiveSpec::power(1.0, 2.0, 0.5);
  NoiseModel noise = GaussianNoise{1.0};
  std::vector<PolicySpec> policies;
  std::uint64_t horizon = 100000;
  std::uint64_t num_runs = 1;
  std::uint64_t base_seed = 1;
  /// Empty means the default geometric grid.
  std::vector<std::uint64_t> checkpoints;
  std::string output = "regret.csv";
  bool log_axes = true;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Malformed configuration; the message carries the line and field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ConfigError for violated invariants (no policies, runs = 0,
/// unsorted checkpoints or checkpoints past the horizon, bad policy params).
void validate(const ExperimentConfig& cfg);

/// 64 geometrically spaced times from ceil(T/64) to T, deduplicated.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon);
std::vector<std::uint64_t> effective_checkpoints(const ExperimentConfig& cfg);

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& cfg);

inline constexpr const char* kOutputDirEnv = "RWT_OUTPUT_DIR";

/// Relative paths are placed under $RWT_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output_path(const std::string& path);

}  // namespace rwt
