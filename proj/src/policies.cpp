#include "rwt/policies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace rwt {

MoveDecision decide_move(TestVerdict left, TestVerdict mid, TestVerdict right) {
  if (left == TestVerdict::Minus && right == TestVerdict::Plus) {
    return mid == TestVerdict::Plus ? MoveDecision::LeftChild : MoveDecision::RightChild;
  }
  return MoveDecision::Parent;
}

NodeId apply_move(const NodeId& node, MoveDecision move) {
  switch (move) {
    case MoveDecision::LeftChild:
      return left_child(node);
    case MoveDecision::RightChild:
      return right_child(node);
    case MoveDecision::Parent:
      break;
  }
  return parent(node);
}

void RegretTrace::append(double excess, std::uint64_t length) {
  if (length == 0) return;
  if (!segments.empty() && segments.back().excess == excess) {
    segments.back().length += length;
  } else {
    segments.push_back({excess, length});
  }
  time_steps += length;
}

void RegretTrace::append(const RegretTrace& other) {
  for (const auto& s : other.segments) append(s.excess, s.length);
}

std::vector<double> regret_of(const RegretTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.time_steps);
  double total = 0.0;
  for (const auto& s : trace.segments) {
    for (std::uint64_t i = 0; i < s.length; ++i) {
      total += s.excess;
      out.push_back(total);
    }
  }
  return out;
}

std::vector<double> cumulative_at(const RegretTrace& trace, const std::vector<std::uint64_t>& checkpoints) {
  std::vector<double> out;
  out.reserve(checkpoints.size());
  double total = 0.0;
  std::uint64_t t = 0;
  auto seg = trace.segments.begin();
  std::uint64_t used_in_seg = 0;
  for (const auto cp : checkpoints) {
    while (t < cp && seg != trace.segments.end()) {
      const std::uint64_t take = std::min(seg->length - used_in_seg, cp - t);
      // Same accumulation order as regret_of, so checkpoints agree bit for bit.
      for (std::uint64_t i = 0; i < take; ++i) total += seg->excess;
      t += take;
      used_in_seg += take;
      if (used_in_seg == seg->length) {
        ++seg;
        used_in_seg = 0;
      }
    }
    out.push_back(total);
  }
  return out;
}

TestConfig default_test_config(const ObjectiveSpec& obj, const NoiseModel& noise, double p_check) {
  const ConfidenceParam p(p_check);
  if (const auto* g = std::get_if<GaussianNoise>(&noise)) return SubGaussianTestConfig(g->sigma_sq, p);
  const auto& pareto = std::get<ParetoTailNoise>(noise);
  const double b = pareto.moment_order;
  return HeavyTailTestConfig(b, moment_certificate(obj, noise, b), p);
}

namespace {

bool step_limit_reached(const WalkState& walk, const WalkOptions& options) {
  if (options.max_steps && walk.steps_taken >= *options.max_steps) return true;
  return walk.steps_taken > 0 && options.stop_when && options.stop_when(walk);
}

void record_move(WalkState& walk, MoveDecision move, const WalkOptions& options) {
  NodeId next = apply_move(walk.node, move);
  ++walk.steps_taken;
  if (options.on_move) options.on_move({walk.node, next, move, walk.steps_taken, walk.time});
  walk.node = std::move(next);
}

std::optional<TestVerdict> endpoint_verdict(const DyadicPoint& p) {
  if (p.is_zero()) return TestVerdict::Minus;
  if (p.is_one()) return TestVerdict::Plus;
  return std::nullopt;
}

}  // namespace

RegretTrace run_rwt(const ObjectiveSpec& obj, const NoiseModel& noise, std::uint64_t horizon,
                    const TestConfig& test, std::uint64_t seed, const WalkOptions& options) {
  GradientOracle oracle(obj, noise, seed);
  RegretTrace trace;
  WalkState walk;
  bool cut = false;
  while (!cut && walk.time < horizon && !step_limit_reached(walk, options)) {
    const auto iv = interval(walk.node);
    const std::array<const DyadicPoint*, 3> points{&iv.left, &iv.mid, &iv.right};
    std::array<TestVerdict, 3> verdicts{};
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (const auto v = endpoint_verdict(*points[i])) {
        verdicts[i] = *v;
        continue;
      }
      const double x = points[i]->to_double();
      TestSession session;
      std::uint64_t used = 0;
      while (session.running() && walk.time < horizon) {
        session = step(session, oracle.sample(x), test);
        ++walk.time;
        ++used;
      }
      trace.append(excess_value(obj, x), used);
      if (session.running()) {
        cut = true;
        break;
      }
      verdicts[i] = *session.verdict;
    }
    if (!cut) record_move(walk, decide_move(verdicts[0], verdicts[1], verdicts[2]), options);
  }
  trace.samples_total = walk.time;
  trace.walk_steps = walk.steps_taken;
  trace.final_node = walk.node;
  return trace;
}

RegretTrace run_rwt(const ObjectiveSpec& obj, const NoiseModel& noise, std::uint64_t horizon, double p_check,
                    std::uint64_t seed) {
  return run_rwt(obj, noise, horizon, default_test_config(obj, noise, p_check), seed);
}

std::vector<DyadicPoint> neighborhood_queue(const NodeId& node) {
  std::vector<DyadicPoint> queue;
  const auto add = [&queue](const NodeId& n) {
    const auto iv = interval(n);
    for (const auto* p : {&iv.left, &iv.mid, &iv.right}) {
      if (p->is_zero() || p->is_one()) continue;
      if (std::find(queue.begin(), queue.end(), *p) == queue.end()) queue.push_back(*p);
    }
  };
  add(node);
  if (!node.is_root()) add(parent(node));
  const NodeId lc = left_child(node);
  const NodeId rc = right_child(node);
  add(lc);
  add(rc);
  if (node.depth() >= 2) add(parent(parent(node)));
  if (!node.is_root()) {
    const NodeId up = parent(node);
    add(left_child(up) == node ? right_child(up) : left_child(up));
  }
  for (const auto& c : {lc, rc}) {
    add(left_child(c));
    add(right_child(c));
  }
  return queue;
}

std::optional<TestVerdict> known_verdict(const CacheState& cache, const DyadicPoint& p) {
  if (const auto v = endpoint_verdict(p)) return v;
  if (const auto it = cache.completed.find(p); it != cache.completed.end()) return it->second.verdict;
  return std::nullopt;
}

std::vector<DyadicPoint> active_points(const CacheState& cache) {
  std::vector<DyadicPoint> out;
  for (const auto& p : cache.queue) {
    if (out.size() >= cache.capacity) break;
    if (!known_verdict(cache, p)) out.push_back(p);
  }
  return out;
}

std::uint64_t advance_cached_walk(WalkState& walk, CacheState& cache, VerdictReuse reuse,
                                  const WalkOptions& options) {
  std::uint64_t moves = 0;
  while (!step_limit_reached(walk, options)) {
    const auto iv = interval(walk.node);
    const auto l = known_verdict(cache, iv.left);
    const auto m = known_verdict(cache, iv.mid);
    const auto r = known_verdict(cache, iv.right);
    if (!l || !m || !r) break;
    for (const auto* p : {&iv.left, &iv.mid, &iv.right}) {
      const auto it = cache.completed.find(*p);
      if (it == cache.completed.end()) continue;
      const bool keep = reuse == VerdictReuse::KeepAll ||
                        (reuse == VerdictReuse::KeepSideObservations && it->second.side_observation);
      if (!keep) cache.completed.erase(it);
    }
    record_move(walk, decide_move(*l, *m, *r), options);
    ++moves;
    cache.queue = neighborhood_queue(walk.node);
    const auto keep = active_points(cache);
    std::erase_if(cache.active, [&keep](const auto& entry) {
      return std::find(keep.begin(), keep.end(), entry.first) == keep.end();
    });
  }
  return moves;
}

RegretTrace run_rwt_cached(const ObjectiveSpec& obj, const NoiseModel& noise, std::uint64_t horizon,
                           const TestConfig& test, std::uint64_t seed, const CachedWalkOptions& options) {
  if (options.cache_size < 1) throw std::invalid_argument("cache size must be at least 1");
  GradientOracle oracle(obj, noise, seed);
  RegretTrace trace;
  WalkState walk;
  CacheState cache;
  cache.capacity = options.cache_size;
  cache.queue = neighborhood_queue(walk.node);

  // The active window only changes when a test finishes or the walk moves;
  // between those events the hot loop works on these precomputed slots.
  struct Slot {
    DyadicPoint point;
    double x;
    TestSession* session;
  };
  std::vector<Slot> slots;
  double head_excess = 0.0;
  const auto refresh = [&] {
    slots.clear();
    for (auto& p : active_points(cache)) {
      const double x = p.to_double();
      TestSession* session = &cache.active[p];
      slots.push_back({std::move(p), x, session});
    }
    if (!slots.empty()) head_excess = excess_value(obj, slots.front().x);
  };

  std::uint64_t samples = 0;
  bool dirty = true;
  while (true) {
    if (dirty) {
      advance_cached_walk(walk, cache, options.reuse, options.walk);
      refresh();
      dirty = false;
    }
    if (walk.time >= horizon || step_limit_reached(walk, options.walk)) break;
    trace.append(head_excess);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      TestSession& session = *slots[i].session;
      session = step(session, oracle.sample(slots[i].x), test);
      ++samples;
      if (!session.running()) {
        cache.completed[slots[i].point] = {*session.verdict, i != 0};
        dirty = true;
      }
    }
    if (dirty) {
      std::erase_if(cache.active, [](const auto& entry) { return !entry.second.running(); });
    }
    ++walk.time;
  }
  trace.samples_total = samples;
  trace.walk_steps = walk.steps_taken;
  trace.final_node = walk.node;
  return trace;
}

double step_size(const StepSchedule& schedule, std::uint64_t t) {
  const double n = static_cast<double>(t);
  return std::visit(
      [n](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ConstantOverT>) return s.c / n;
        else if constexpr (std::is_same_v<S, InverseAlphaT>) return 1.0 / (s.alpha_hat * n);
        else return 1.0 / std::sqrt(n);
      },
      schedule);
}

void validate(const SgdConfig& cfg) {
  if (const auto* c = std::get_if<ConstantOverT>(&cfg.schedule); c && !(c->c > 0.0)) {
    throw std::invalid_argument("step constant c must be positive");
  }
  if (const auto* a = std::get_if<InverseAlphaT>(&cfg.schedule); a && !(a->alpha_hat > 0.0)) {
    throw std::invalid_argument("alpha_hat must be positive");
  }
  if (cfg.x1 && !(*cfg.x1 >= 0.0 && *cfg.x1 <= 1.0)) throw std::invalid_argument("x1 must lie in [0, 1]");
}

double sgd_update(double x, double eta, double gradient_sample) {
  return std::clamp(x - eta * gradient_sample, 0.0, 1.0);
}

RegretTrace run_sgd(const ObjectiveSpec& obj, const NoiseModel& noise, std::uint64_t horizon, const SgdConfig& cfg,
                    std::uint64_t seed) {
  validate(cfg);
  GradientOracle oracle(obj, noise, seed);
  RegretTrace trace;
  double x = cfg.x1 ? *cfg.x1 : oracle.uniform01();
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    trace.append(excess_value(obj, x));
    x = sgd_update(x, step_size(cfg.schedule, t), oracle.sample(x));
  }
  trace.samples_total = horizon;
  trace.final_x = x;
  return trace;
}

}  // namespace rwt
