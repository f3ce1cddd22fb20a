#pragma once

#include "rwt/dyadic_tree.hpp"
#include "rwt/problems.hpp"
#include "rwt/sequential_tests.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <variant>
#include <vector>

namespace rwt {

enum class MoveDecision { LeftChild, RightChild, Parent };

/// (-,+,+) -> LeftChild, (-,-,+) -> RightChild, anything else -> Parent.
MoveDecision decide_move(TestVerdict left, TestVerdict mid, TestVerdict right);

NodeId apply_move(const NodeId& node, MoveDecision move);

/// A run of consecutive time steps spent at one query point.
struct RegretSegment {
  double excess;  // f(x) - f(x*)
  std::uint64_t length;
};

/// One realization of a policy: the instantaneous expected regret per time
/// step, stored run-length encoded.
struct RegretTrace {
  std::vector<RegretSegment> segments;
  std::uint64_t time_steps = 0;
  std::uint64_t samples_total = 0;
  std::uint64_t walk_steps = 0;
  std::optional<NodeId> final_node;
  std::optional<double> final_x;

  void append(double excess, std::uint64_t length = 1);
  void append(const RegretTrace& other);
};

/// Prefix sums of the per-step regret, one entry per time step.
std::vector<double> regret_of(const RegretTrace& trace);

/// Cumulative regret after each of the given (sorted, 1-based) time steps.
/// Checkpoints past the end of the trace read the final total.
std::vector<double> cumulative_at(const RegretTrace& trace, const std::vector<std::uint64_t>& checkpoints);

struct WalkState {
  NodeId node;
  std::uint64_t steps_taken = 0;
  std::uint64_t time = 0;
};

struct MoveRecord {
  NodeId from;
  NodeId to;
  MoveDecision decision;
  std::uint64_t steps_taken;  // after the move
  std::uint64_t time;         // samples consumed when the move happened
};

using MoveObserver = std::function<void(const MoveRecord&)>;

struct WalkOptions {
  /// Stop after this many moves even if time remains.
  std::optional<std::uint64_t> max_steps;
  MoveObserver on_move;
  /// Checked after every move; returning true ends the run.
  std::function<bool(const WalkState&)> stop_when;
};

/// Sub-Gaussian test with σ² for Gaussian noise; truncated-mean test with
/// (b, u = moment_certificate) for Pareto-tail noise.
TestConfig default_test_config(const ObjectiveSpec& obj, const NoiseModel& noise, double p_check);

/// Random walk on the dyadic tree driven by three local tests per node.
RegretTrace run_rwt(const ObjectiveSpec& obj, const NoiseModel& noise, std::uint64_t horizon,
                    const TestConfig& test, std::uint64_t seed, const WalkOptions& options = {});
RegretTrace run_rwt(const ObjectiveSpec& obj, const NoiseModel& noise, std::uint64_t horizon, double p_check,
                    std::uint64_t seed);

/// Lifetime of completed verdicts in the cached walk.
enum class VerdictReuse {
  /// Every verdict drives at most one move, then is dropped.
  ConsumeOnUse,
  /// Verdicts of tests that finished outside the head slot (side
  /// observations) are kept for the rest of the run; head verdicts are
  /// consumed by the move they drive.
  KeepSideObservations,
  /// Every verdict is kept for the rest of the run.
  KeepAll,
};

struct CachedVerdict {
  TestVerdict verdict;
  /// Finished while not at the head of the queue.
  bool side_observation = false;
};

/// Priority-queue state of the cached walk.
struct CacheState {
  std::uint64_t capacity = 1;
  std::map<DyadicPoint, TestSession> active;
  std::map<DyadicPoint, CachedVerdict> completed;
  std::vector<DyadicPoint> queue;
};

/// Query points of the node's neighborhood in priority order: the node's own
/// points (left, mid, right), then the unshared points of the parent, left
/// child and right child, then those of the grandparent, sibling and the four
/// grandchildren. Endpoints 0 and 1 and duplicates are skipped.
std::vector<DyadicPoint> neighborhood_queue(const NodeId& node);

/// Up to `capacity` unresolved queue entries, head first.
std::vector<DyadicPoint> active_points(const CacheState& cache);

/// Verdict for `p` if known without sampling (endpoint convention or cache).
std::optional<TestVerdict> known_verdict(const CacheState& cache, const DyadicPoint& p);

struct CachedWalkOptions {
  std::uint64_t cache_size = 1;
  VerdictReuse reuse = VerdictReuse::KeepSideObservations;
  WalkOptions walk;
};

/// RWT with `cache_size` tests sampled in parallel per time step; regret is
/// charged at the head test only. cache_size = 1 reproduces run_rwt exactly.
RegretTrace run_rwt_cached(const ObjectiveSpec& obj, const NoiseModel& noise, std::uint64_t horizon,
                           const TestConfig& test, std::uint64_t seed, const CachedWalkOptions& options);

/// Resolves every move of `walk.node` that needs no sampling. Returns the
/// number of moves taken. Exposed for tests.
std::uint64_t advance_cached_walk(WalkState& walk, CacheState& cache, VerdictReuse reuse,
                                  const WalkOptions& options = {});

struct ConstantOverT {
  double c;
  friend bool operator==(const ConstantOverT&, const ConstantOverT&) = default;
};
struct InverseAlphaT {
  double alpha_hat;
  friend bool operator==(const InverseAlphaT&, const InverseAlphaT&) = default;
};
struct InverseSqrtT {
  friend bool operator==(const InverseSqrtT&, const InverseSqrtT&) = default;
};

using StepSchedule = std::variant<ConstantOverT, InverseAlphaT, InverseSqrtT>;

double step_size(const StepSchedule& schedule, std::uint64_t t);

struct SgdConfig {
  StepSchedule schedule;
  /// Fixed starting point; uniform on [0, 1] when empty.
  std::optional<double> x1;

  friend bool operator==(const SgdConfig&, const SgdConfig&) = default;
};

void validate(const SgdConfig& cfg);

/// proj_[0,1](x - eta * g)
double sgd_update(double x, double eta, double gradient_sample);

RegretTrace run_sgd(const ObjectiveSpec& obj, const NoiseModel& noise, std::uint64_t horizon, const SgdConfig& cfg,
                    std::uint64_t seed);

}  // namespace rwt
