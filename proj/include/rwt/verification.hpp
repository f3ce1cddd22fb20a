#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rwt {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit_seconds = 0.0;
};

/// Scale factors for the statistical suites. `full()` is the acceptance
/// configuration; `quick()` shrinks run counts for interactive use.
struct SuiteScale {
  std::uint64_t test_runs = 2000;
  std::uint64_t heavy_test_runs = 300;
  std::uint64_t lemma1_walks = 500;
  std::uint64_t lemma1_budget = 1'000'000;
  std::uint64_t figure_runs = 200;
  std::uint64_t horizon = 100'000;
  std::uint64_t seed = 20240601;
  bool enforce_time_limits = true;

  static SuiteScale full() { return {}; }
  static SuiteScale quick();
};

CriterionResult check_test_error_rate(const SuiteScale& scale);
CriterionResult check_sample_complexity(const SuiteScale& scale);
CriterionResult check_lemma1_convergence(const SuiteScale& scale);
CriterionResult check_heavy_tail_sublinearity(const SuiteScale& scale);
CriterionResult check_structural(const SuiteScale& scale);

/// Criteria 4, 5, 6, 8 and 9 share the figure runs.
std::vector<CriterionResult> check_figures(const SuiteScale& scale);

using CriterionSink = std::function<void(const CriterionResult&)>;

/// Runs the selected criteria (all when `ids` is empty) in id order.
std::vector<CriterionResult> run_suite(const SuiteScale& scale, const std::vector<int>& ids = {},
                                       const CriterionSink& sink = {});

std::string format_result(const CriterionResult& r);

}  // namespace rwt
