#pragma once

#include "rwt/config.hpp"
#include "rwt/policies.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace rwt {

/// Cumulative regret of one run at the configured checkpoints.
struct CheckpointTrace {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> cumulative_regret;
  std::uint64_t samples_total = 0;
  std::optional<NodeId> final_node;
  std::optional<double> final_x;
};

struct PolicySummary {
  std::string policy;
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> mean_regret;
  /// sample standard deviation / sqrt(num_runs); 0 for a single run
  std::vector<double> stderr_regret;
  std::uint64_t num_runs = 0;
};

struct SummaryTable {
  std::string title;
  std::vector<PolicySummary> policies;

  const PolicySummary& at(const std::string& policy) const;
};

/// seed = base_seed XOR run_index
std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t run_index);

RegretTrace run_policy(const ExperimentConfig& cfg, const PolicySpec& policy, std::uint64_t seed);

CheckpointTrace run_single(const ExperimentConfig& cfg, const PolicySpec& policy, std::uint64_t run_index);

/// Mean and standard error per checkpoint over `traces`, reduced in order.
PolicySummary summarize(const std::string& policy, const std::vector<CheckpointTrace>& traces);

struct RunnerOptions {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  std::function<void(const std::string& policy, std::uint64_t done, std::uint64_t total)> progress;
};

/// Every policy for run indices 0..num_runs-1. Deterministic given cfg,
/// whatever the thread count.
SummaryTable run_experiment(const ExperimentConfig& cfg, const RunnerOptions& options = {});

/// Renders the CSV text: header, then rows sorted by (policy, t).
std::string format_csv(const SummaryTable& table);
void emit_csv(const SummaryTable& table, const std::filesystem::path& path);

/// gnuplot script plotting one regret curve per policy from `csv_path`.
std::string format_plot_script(const SummaryTable& table, const std::string& csv_name, bool log_axes);
void emit_plot_script(const SummaryTable& table, const std::filesystem::path& script_path,
                      const std::filesystem::path& csv_path, bool log_axes);

/// Concatenates tables, prefixing policy names with "<prefix>/".
SummaryTable merge_tables(const std::string& title, const std::vector<std::pair<std::string, SummaryTable>>& parts);

}  // namespace rwt
