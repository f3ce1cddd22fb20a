#include "rwt/bounds.hpp"
#include "rwt/policies.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace rwt;

namespace {

const TestConfig kSubG = SubGaussianTestConfig(1.0, ConfidenceParam(0.2));

void expect_same_trace(const RegretTrace& a, const RegretTrace& b) {
  ASSERT_EQ(a.segments.size(), b.segments.size());
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    ASSERT_EQ(a.segments[i].excess, b.segments[i].excess) << i;
    ASSERT_EQ(a.segments[i].length, b.segments[i].length) << i;
  }
  EXPECT_EQ(a.samples_total, b.samples_total);
  EXPECT_EQ(a.walk_steps, b.walk_steps);
  EXPECT_EQ(a.final_node, b.final_node);
}

}  // namespace

TEST(DecideMove, Table) {
  using V = TestVerdict;
  EXPECT_EQ(decide_move(V::Minus, V::Plus, V::Plus), MoveDecision::LeftChild);
  EXPECT_EQ(decide_move(V::Minus, V::Minus, V::Plus), MoveDecision::RightChild);
  EXPECT_EQ(decide_move(V::Plus, V::Plus, V::Plus), MoveDecision::Parent);
  EXPECT_EQ(decide_move(V::Minus, V::Minus, V::Minus), MoveDecision::Parent);
  EXPECT_EQ(decide_move(V::Plus, V::Minus, V::Plus), MoveDecision::Parent);
  EXPECT_EQ(apply_move(NodeId(1, 2), MoveDecision::LeftChild), NodeId(2, 3));
  EXPECT_EQ(apply_move(NodeId::root(), MoveDecision::Parent), NodeId::root());
}

TEST(RegretTrace, PrefixSums) {
  RegretTrace zero;
  zero.append(0.0, 5);
  EXPECT_EQ(regret_of(zero), std::vector<double>(5, 0.0));

  RegretTrace one;
  one.append(0.7);
  EXPECT_EQ(regret_of(one), std::vector<double>{0.7});

  RegretTrace a, b;
  a.append(0.5, 2);
  a.append(0.25);
  b.append(1.0);
  b.append(0.125, 2);
  RegretTrace ab = a;
  ab.append(b);
  const auto ra = regret_of(a), rb = regret_of(b), rab = regret_of(ab);
  ASSERT_EQ(rab.size(), ra.size() + rb.size());
  for (std::size_t i = 0; i < rb.size(); ++i) EXPECT_DOUBLE_EQ(rab[ra.size() + i], ra.back() + rb[i]);

  RegretTrace merged;
  merged.append(0.5, 2);
  merged.append(0.5, 3);
  EXPECT_EQ(merged.segments.size(), 1u);
  EXPECT_EQ(merged.time_steps, 5u);
}

TEST(RegretTrace, CumulativeAtMatchesPrefixSums) {
  RegretTrace t;
  t.append(0.3, 4);
  t.append(0.1, 7);
  t.append(0.05, 3);
  const auto full = regret_of(t);
  const auto at = cumulative_at(t, {1, 4, 5, 14, 20});
  EXPECT_EQ(at[0], full[0]);
  EXPECT_EQ(at[1], full[3]);
  EXPECT_EQ(at[2], full[4]);
  EXPECT_EQ(at[3], full[13]);
  EXPECT_EQ(at[4], full[13]);
}

TEST(RunRwt, EmptyHorizon) {
  const auto t = run_rwt(ObjectiveSpec::power(4.0, 1.2, 0.2), GaussianNoise{1.0}, 0, kSubG, 1);
  EXPECT_TRUE(t.segments.empty());
  EXPECT_EQ(t.time_steps, 0u);
}

TEST(RunRwt, RootSamplesOnlyTheMidpoint) {
  const auto obj = ObjectiveSpec::power(4.0, 1.2, 0.2);
  std::vector<MoveRecord> moves;
  WalkOptions opts;
  opts.on_move = [&moves](const MoveRecord& m) { moves.push_back(m); };
  const auto t = run_rwt(obj, GaussianNoise{1.0}, 100000, kSubG, 3, opts);
  ASSERT_FALSE(t.segments.empty());
  EXPECT_EQ(t.segments.front().excess, excess_value(obj, 0.5));
  ASSERT_FALSE(moves.empty());
  EXPECT_EQ(moves.front().from, NodeId::root());
  EXPECT_EQ(t.time_steps, 100000u);
}

TEST(RunRwt, NoiselessWalkAlwaysDescendsTowardOptimum) {
  const auto obj = ObjectiveSpec::power(1.0, 1.4, 0.3);
  const TestConfig cfg = SubGaussianTestConfig(1e-12, ConfidenceParam(0.2));
  std::uint64_t count = 0;
  WalkOptions opts;
  opts.max_steps = 40;
  opts.on_move = [&](const MoveRecord& m) {
    ++count;
    EXPECT_EQ(m.to.depth(), m.from.depth() + 1);
    EXPECT_TRUE(contains(m.to, 0.3)) << m.to;
  };
  const auto t = run_rwt(obj, GaussianNoise{0.0}, 100000, cfg, 1, opts);
  EXPECT_EQ(count, 40u);
  EXPECT_EQ(t.final_node->depth(), 40u);
  EXPECT_LE(max_distance_to(*t.final_node, 0.3), std::ldexp(1.0, -40));
}

TEST(RunRwt, DyadicOptimumStopsAtTheNodeWithOptimumAsMidpoint) {
  const auto obj = ObjectiveSpec::power(1.0, 1.4, 0.25);
  const TestConfig cfg = SubGaussianTestConfig(1e-12, ConfidenceParam(0.2));
  WalkOptions opts;
  opts.on_move = [](const MoveRecord& m) { EXPECT_TRUE(contains(m.to, 0.25)); };
  const auto t = run_rwt(obj, GaussianNoise{0.0}, 1000, cfg, 1, opts);
  EXPECT_EQ(*t.final_node, NodeId(1, 1));
  EXPECT_EQ(t.segments.back().excess, 0.0);
}

TEST(RunRwt, MoveBiasAtLeastGuaranteed) {
  // fraction of correct moves at a node containing x* and at one that does not
  const auto obj = ObjectiveSpec::power(4.0, 1.2, 0.2);
  const double p = std::pow(0.8, 3.0);
  const int trials = 300;
  for (const NodeId& node : {NodeId(2, 1), NodeId(2, 3)}) {
    int correct = 0;
    for (int r = 0; r < trials; ++r) {
      GradientOracle oracle(obj, GaussianNoise{1.0}, 500 + r);
      const GradientSampler s = [&oracle](double x) { return oracle.sample(x); };
      const auto iv = interval(node);
      const auto l = run_test(iv.left, s, kSubG, 10000000).verdict;
      const auto m = run_test(iv.mid, s, kSubG, 10000000).verdict;
      const auto rt = run_test(iv.right, s, kSubG, 10000000).verdict;
      ASSERT_TRUE(l && m && rt);
      const NodeId next = apply_move(node, decide_move(*l, *m, *rt));
      const bool good = contains(node, 0.2) ? next.depth() > node.depth() && contains(next, 0.2)
                                            : next.depth() < node.depth();
      correct += good;
    }
    EXPECT_GE(correct / double(trials), p - 3.0 * std::sqrt(p * (1 - p) / trials)) << node;
  }
}

TEST(WalkTailProperty, SyntheticBiasedWalk) {
  // Each move is correct with probability p, otherwise it heads away from x*.
  const double xstar = 1.0 / 3.0;
  const double p = 0.8;
  const std::uint64_t n = 60;
  const auto bound = lemma1_tail(n, p);
  std::mt19937_64 rng(77);
  std::bernoulli_distribution good(p);
  const int walks = 2000;
  int violations = 0;
  for (int w = 0; w < walks; ++w) {
    NodeId node = NodeId::root();
    for (std::uint64_t i = 0; i < n; ++i) {
      const bool inside = contains(node, xstar);
      const NodeId l = left_child(node), r = right_child(node);
      const NodeId toward = contains(l, xstar) ? l : r;
      const NodeId away = contains(l, xstar) ? r : l;
      if (good(rng)) {
        node = inside ? toward : parent(node);
      } else {
        node = inside ? away : l;
      }
    }
    if (max_distance_to(node, xstar) > bound.delta_bound) ++violations;
  }
  EXPECT_LE(violations / double(walks), bound.prob_bound + 3.0 * std::sqrt(0.25 / walks));
}

TEST(CachedWalk, PrecompletedVerdictsMoveWithoutSampling) {
  CacheState cache;
  cache.completed[DyadicPoint(1, 2)] = {TestVerdict::Minus, true};
  cache.completed[DyadicPoint(1, 1)] = {TestVerdict::Plus, true};
  WalkState walk{NodeId(1, 1), 0, 0};
  cache.queue = neighborhood_queue(walk.node);
  const auto moves = advance_cached_walk(walk, cache, VerdictReuse::ConsumeOnUse);
  EXPECT_EQ(moves, 1u);
  EXPECT_EQ(walk.node, NodeId(2, 2));
  EXPECT_EQ(walk.time, 0u);
  EXPECT_TRUE(cache.completed.empty());
}

TEST(CachedWalk, ReuseModes) {
  for (const auto mode : {VerdictReuse::KeepAll, VerdictReuse::KeepSideObservations}) {
    CacheState cache;
    cache.completed[DyadicPoint(1, 2)] = {TestVerdict::Minus, true};
    cache.completed[DyadicPoint(1, 1)] = {TestVerdict::Plus, false};
    WalkState walk{NodeId(1, 1), 0, 0};
    advance_cached_walk(walk, cache, mode);
    EXPECT_TRUE(cache.completed.contains(DyadicPoint(1, 2)));
    EXPECT_EQ(cache.completed.contains(DyadicPoint(1, 1)), mode == VerdictReuse::KeepAll);
  }
}

TEST(CachedWalk, NeighborhoodQueue) {
  const auto q = neighborhood_queue(NodeId(2, 2));
  ASSERT_GE(q.size(), 2u);
  EXPECT_EQ(q[0], DyadicPoint(1, 2));
  EXPECT_EQ(q[1], DyadicPoint(3, 3));
  EXPECT_EQ(q[2], DyadicPoint(1, 1));
  for (std::size_t i = 0; i < q.size(); ++i) {
    EXPECT_FALSE(q[i].is_zero() || q[i].is_one());
    for (std::size_t j = 0; j < i; ++j) EXPECT_NE(q[i], q[j]);
  }
  const auto root = neighborhood_queue(NodeId::root());
  EXPECT_EQ(root.front(), DyadicPoint(1, 1));
}

TEST(CachedWalk, CacheOneReproducesPlainWalk) {
  for (const auto& obj : {ObjectiveSpec::power(1.0, 1.4, 0.05), ObjectiveSpec::power(4.0, 1.2, 0.2)}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto plain = run_rwt(obj, GaussianNoise{1.0}, 20000, kSubG, seed);
      for (const auto mode : {VerdictReuse::KeepSideObservations, VerdictReuse::ConsumeOnUse}) {
        CachedWalkOptions opts;
        opts.reuse = mode;
        expect_same_trace(plain, run_rwt_cached(obj, GaussianNoise{1.0}, 20000, kSubG, seed, opts));
      }
    }
  }
}

TEST(CachedWalk, LargerCacheSpendsSameTime) {
  const auto obj = ObjectiveSpec::power(1.0, 1.4, 0.05);
  CachedWalkOptions opts;
  opts.cache_size = 3;
  const auto t = run_rwt_cached(obj, GaussianNoise{1.0}, 5000, kSubG, 4, opts);
  EXPECT_EQ(t.time_steps, 5000u);
  EXPECT_THROW(run_rwt_cached(obj, GaussianNoise{1.0}, 10, kSubG, 1, CachedWalkOptions{0, VerdictReuse::KeepSideObservations, {}}), std::invalid_argument);
}

TEST(Sgd, UpdateAndSchedules) {
  EXPECT_DOUBLE_EQ(sgd_update(0.5, 0.1, 2.0), 0.3);
  EXPECT_EQ(sgd_update(0.05, 0.1, 2.0), 0.0);
  EXPECT_EQ(sgd_update(0.95, 0.1, -2.0), 1.0);
  const double alpha = strong_convexity_alpha(4.0, 1.2, 0.2);
  EXPECT_NEAR(step_size(InverseAlphaT{alpha}, 1), 1.0 / 1.1476229997480444, 1e-14);
  EXPECT_DOUBLE_EQ(step_size(ConstantOverT{0.1}, 4), 0.025);
  EXPECT_DOUBLE_EQ(step_size(InverseSqrtT{}, 4), 0.5);
  EXPECT_THROW(validate(SgdConfig{ConstantOverT{0.0}, {}}), std::invalid_argument);
  EXPECT_THROW(validate(SgdConfig{InverseSqrtT{}, 1.5}), std::invalid_argument);
}

TEST(Sgd, IteratesStayInUnitInterval) {
  const auto obj = ObjectiveSpec::power(4.0, 1.2, 0.2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = run_sgd(obj, GaussianNoise{1.0}, 2000, SgdConfig{InverseSqrtT{}, {}}, seed);
    EXPECT_EQ(t.time_steps, 2000u);
    ASSERT_TRUE(t.final_x);
    EXPECT_GE(*t.final_x, 0.0);
    EXPECT_LE(*t.final_x, 1.0);
    for (const auto& s : t.segments) ASSERT_LE(s.excess, std::max(f_value(obj, 0.0), f_value(obj, 1.0)));
  }
}

TEST(Sgd, FixedStartIsDeterministic) {
  const auto obj = ObjectiveSpec::power(4.0, 1.2, 0.2);
  const SgdConfig cfg{ConstantOverT{0.1}, 0.9};
  const auto a = run_sgd(obj, GaussianNoise{1.0}, 500, cfg, 8);
  const auto b = run_sgd(obj, GaussianNoise{1.0}, 500, cfg, 8);
  expect_same_trace(a, b);
  EXPECT_EQ(a.segments.front().excess, excess_value(obj, 0.9));
}
