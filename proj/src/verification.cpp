#include "rwt/verification.hpp"

#include "rwt/bounds.hpp"
#include "rwt/experiment.hpp"
#include "rwt/presets.hpp"
#include "rwt/sequential_tests.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rwt {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CriterionResult finish(CriterionResult r, bool ok, const SuiteScale& scale, Clock::time_point start) {
  r.seconds = elapsed(start);
  const bool in_time = !scale.enforce_time_limits || r.seconds <= r.time_limit_seconds;
  if (!in_time) r.detail += "; exceeded time limit " + num(r.time_limit_seconds) + "s";
  r.passed = ok && in_time;
  return r;
}

// Constant-gradient sampler g + ξ; the oracle is only used as a noise source.
struct ConstantGradient {
  double g;
  GradientOracle noise;

  ConstantGradient(double g_, const NoiseModel& model, std::uint64_t seed)
      : g(g_), noise(ObjectiveSpec::power(1.0, 2.0, 0.5), model, seed) {}

  double operator()(double) { return g + noise.draw_noise(); }
};

struct TestStats {
  std::uint64_t runs = 0;
  std::uint64_t wrong = 0;
  std::uint64_t exhausted = 0;
  double mean_tau = 0.0;
};

TestStats run_tests(double g, const NoiseModel& model, const TestConfig& cfg, std::uint64_t runs,
                    std::uint64_t seed, std::uint64_t budget) {
  TestStats st;
  st.runs = runs;
  double tau_sum = 0.0;
  const DyadicPoint interior(1, 1);
  for (std::uint64_t r = 0; r < runs; ++r) {
    ConstantGradient sampler(g, model, run_seed(seed, r));
    const auto out = run_test(interior, std::ref(sampler), cfg, budget);
    tau_sum += static_cast<double>(out.samples_used);
    if (!out.verdict) {
      ++st.exhausted;
      ++st.wrong;
    } else if (*out.verdict != (g > 0 ? TestVerdict::Plus : TestVerdict::Minus)) {
      ++st.wrong;
    }
  }
  st.mean_tau = tau_sum / static_cast<double>(runs);
  return st;
}

constexpr double kGradient = 0.3;
constexpr double kPCheck = 0.2;
constexpr std::uint64_t kTestBudget = 100'000'000;

std::vector<std::uint64_t> with_points(std::vector<std::uint64_t> grid, std::initializer_list<std::uint64_t> extra) {
  grid.insert(grid.end(), extra);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double final_mean(const PolicySummary& s) { return s.mean_regret.back(); }

}  // namespace

SuiteScale SuiteScale::quick() {
  SuiteScale s;
  s.test_runs = 400;
  s.heavy_test_runs = 60;
  s.lemma1_walks = 40;
  s.lemma1_budget = 200'000;
  s.figure_runs = 20;
  s.horizon = 10'000;
  s.enforce_time_limits = false;
  return s;
}

CriterionResult check_test_error_rate(const SuiteScale& scale) {
  const auto start = Clock::now();
  CriterionResult r{1, "sub-Gaussian test error rate", false, "", 0.0, 60.0};
  const SubGaussianTestConfig cfg(1.0, ConfidenceParam(kPCheck));
  const auto st = run_tests(kGradient, GaussianNoise{1.0}, cfg, scale.test_runs, scale.seed, kTestBudget);
  const double rate = static_cast<double>(st.wrong) / static_cast<double>(st.runs);
  const double margin = scale.test_runs == 2000 ? 0.027
                                                : 3.0 * std::sqrt(kPCheck * (1 - kPCheck) / scale.test_runs);
  const double limit = kPCheck + margin;
  r.detail = "wrong-sign rate " + num(rate) + " over " + std::to_string(st.runs) + " runs (limit " + num(limit) +
             "), mean tau " + num(st.mean_tau);
  return finish(r, rate <= limit, scale, start);
}

CriterionResult check_sample_complexity(const SuiteScale& scale) {
  const auto start = Clock::now();
  CriterionResult r{2, "sample-complexity dominance", false, "", 0.0, 120.0};
  const SubGaussianTestConfig subg(1.0, ConfidenceParam(kPCheck));
  const auto gauss = run_tests(kGradient, GaussianNoise{1.0}, subg, scale.test_runs, scale.seed, kTestBudget);
  const double bound2 = lemma2_sample_bound(kGradient, 1.0, kPCheck);

  const ParetoTailNoise pareto{1.9, 0.1, 1.5};
  const double u = moment_certificate(kGradient, pareto, pareto.moment_order);
  const HeavyTailTestConfig ht(pareto.moment_order, u, ConfidenceParam(kPCheck));
  const auto heavy = run_tests(kGradient, pareto, ht, scale.heavy_test_runs, scale.seed, kTestBudget);
  const double bound3 = lemma3_sample_bound(kGradient, pareto.moment_order, u, kPCheck);
  const double heavy_rate = static_cast<double>(heavy.wrong) / static_cast<double>(heavy.runs);

  const bool ok = gauss.exhausted == 0 && gauss.mean_tau <= bound2 && heavy.exhausted == 0 && heavy.mean_tau <= bound3;
  r.detail = "sub-Gaussian mean tau " + num(gauss.mean_tau) + " <= " + num(bound2) + "; heavy-tail (Pareto 1.9, b=1.5, u=" +
             num(u) + ") mean tau " + num(heavy.mean_tau) + " <= " + num(bound3) + " over " +
             std::to_string(heavy.runs) + " runs, wrong rate " + num(heavy_rate);
  return finish(r, ok, scale, start);
}

CriterionResult check_lemma1_convergence(const SuiteScale& scale) {
  const auto start = Clock::now();
  CriterionResult r{3, "geometric walk convergence", false, "", 0.0, 300.0};
  constexpr std::uint64_t kSteps = 200;
  const auto obj = ObjectiveSpec::power(4.0, 1.2, 0.2);
  const TestConfig cfg = SubGaussianTestConfig(1.0, ConfidenceParam(kPCheck));
  const double p = std::pow(1.0 - kPCheck, 3.0);
  const auto bound = lemma1_tail(kSteps, p);

  std::uint64_t violated = 0;
  std::uint64_t certified = 0;
  std::uint64_t undetermined = 0;
  std::uint64_t max_steps_seen = 0;
  for (std::uint64_t w = 0; w < scale.lemma1_walks; ++w) {
    // Within the remaining r moves the walk stays inside the interval of the
    // current node's r-th ancestor, so a small enough ancestor certifies the
    // outcome at step n without simulating further.
    bool early = false;
    WalkOptions opts;
    opts.max_steps = kSteps;
    opts.stop_when = [&](const WalkState& s) {
      NodeId ancestor = s.node;
      for (std::uint64_t i = s.steps_taken; i < kSteps && !ancestor.is_root(); ++i) ancestor = parent(ancestor);
      if (s.steps_taken < kSteps && !ancestor.is_root() && max_distance_to(ancestor, obj.xstar()) <= bound.delta_bound) {
        early = true;
      }
      return early;
    };
    const auto trace = run_rwt(obj, GaussianNoise{1.0}, scale.lemma1_budget, cfg, run_seed(scale.seed, w), opts);
    max_steps_seen = std::max(max_steps_seen, trace.walk_steps);
    if (early) {
      ++certified;
    } else if (trace.walk_steps >= kSteps) {
      if (max_distance_to(*trace.final_node, obj.xstar()) > bound.delta_bound) ++violated;
    } else {
      ++undetermined;
    }
  }
  const double n = static_cast<double>(scale.lemma1_walks);
  const double worst = static_cast<double>(violated + undetermined) / n;
  const double limit = bound.prob_bound + 0.035;
  r.detail = "violations " + std::to_string(violated) + ", certified " + std::to_string(certified) +
             ", unfinished within " + std::to_string(scale.lemma1_budget) + " samples " +
             std::to_string(undetermined) + " of " + std::to_string(scale.lemma1_walks) +
             " (max steps reached " + std::to_string(max_steps_seen) + "); violation fraction counting unfinished " +
             num(worst) + " (limit " + num(limit) + ")";
  return finish(r, worst <= limit, scale, start);
}

std::vector<CriterionResult> check_figures(const SuiteScale& scale) {
  const PresetOptions opts{scale.figure_runs, scale.horizon, scale.seed};
  const std::uint64_t h = scale.horizon;
  std::vector<CriterionResult> out;
  std::vector<std::pair<const PolicySummary*, ExperimentConfig>> dominance;

  // 4: fig3
  auto start = Clock::now();
  auto fig3 = make_preset("fig3", opts).front().second;
  fig3.checkpoints = with_points(default_checkpoints(h), {h / 100, h / 10, h});
  const auto t3 = run_experiment(fig3);
  {
    CriterionResult r{4, "fig3 comparison with SGD", false, "", 0.0, 1200.0};
    const double rwt = final_mean(t3.at("rwt"));
    const double sqrt_t = final_mean(t3.at("sgd_inv_sqrt_t"));
    const double hat = final_mean(t3.at("sgd_inv_alpha_hat_t"));
    r.detail = "R_rwt " + num(rwt) + " < R_sgd(1/sqrt t) " + num(sqrt_t) + " and < R_sgd(1/(alpha_hat t)) " + num(hat) +
               "; R_sgd(0.1/t) " + num(final_mean(t3.at("sgd_0.1_over_t"))) + ", R_sgd(1/(alpha t)) " +
               num(final_mean(t3.at("sgd_inv_alpha_t")));
    out.push_back(finish(r, rwt < sqrt_t && rwt < hat, scale, start));
  }

  // 5: fig4
  start = Clock::now();
  auto parts = make_preset("fig4", opts);
  std::vector<SummaryTable> t4;
  for (auto& [name, cfg] : parts) {
    cfg.checkpoints = with_points(default_checkpoints(h), {h / 100, h / 10, h});
    t4.push_back(run_experiment(cfg));
  }
  {
    CriterionResult r{5, "fig4 adaptivity", false, "", 0.0, 1200.0};
    const double rwt1 = final_mean(t4[0].at("rwt"));
    const double rwt2 = final_mean(t4[1].at("rwt"));
    const double sgd1 = final_mean(t4[0].at("sgd_inv_sqrt_t"));
    const double sgd2 = final_mean(t4[1].at("sgd_inv_sqrt_t"));
    r.detail = "RWT f2 " + num(rwt2) + " < f1 " + num(rwt1) + "; SGD(1/sqrt t) f2 " + num(sgd2) + " >= f1 " + num(sgd1);
    out.push_back(finish(r, rwt2 < rwt1 && sgd2 >= sgd1, scale, start));
  }

  // 6: fig5
  start = Clock::now();
  auto fig5 = make_preset("fig5", opts).front().second;
  const auto t5 = run_experiment(fig5);
  {
    CriterionResult r{6, "fig5 caching gain", false, "", 0.0, 1800.0};
    const double c1 = final_mean(t5.at("rwt_cache1"));
    const double c3 = final_mean(t5.at("rwt_cache3"));
    const double c6 = final_mean(t5.at("rwt_cache6"));
    const double reduction = 1.0 - c3 / c1;
    const double further = 1.0 - c6 / c3;
    r.detail = "R(c=1) " + num(c1) + ", R(c=3) " + num(c3) + ", R(c=6) " + num(c6) + "; reduction 3 vs 1 " +
               num(100 * reduction) + "% (>= 40%), improvement 6 vs 3 " + num(100 * further) + "% (<= 15%)";
    out.push_back(finish(r, reduction >= 0.40 && further <= 0.15, scale, start));
  }

  // 8: regret bound over the RWT curves of criteria 4 and 5
  start = Clock::now();
  {
    CriterionResult r{8, "regret bound dominance", false, "", 0.0, 60.0};
    bool ok = true;
    std::ostringstream detail;
    const std::vector<std::pair<const PolicySummary*, const ExperimentConfig*>> curves{
        {&t3.at("rwt"), &fig3}, {&t4[0].at("rwt"), &parts[0].second}, {&t4[1].at("rwt"), &parts[1].second}};
    for (const auto& [curve, cfg] : curves) {
      BoundInputs in;
      in.p_check = kPCheck;
      in.sigma_sq = 1.0;
      in.g_max = cfg->objective.g_max();
      double worst_ratio = 0.0;
      for (std::size_t j = 0; j < curve->checkpoints.size(); ++j) {
        const double t = static_cast<double>(curve->checkpoints[j]);
        if (t < 3) continue;
        const double bound = theorem1_regret_bound(cfg->objective.fclass(), in, t);
        worst_ratio = std::max(worst_ratio, curve->mean_regret[j] / bound);
        if (!(curve->mean_regret[j] <= bound)) ok = false;
      }
      detail << cfg->title << " (" << class_name(cfg->objective.fclass()) << ") max regret/bound " << num(worst_ratio)
             << "; ";
    }
    r.detail = detail.str();
    out.push_back(finish(r, ok, scale, start));
  }

  // 9: regret grows slower than sqrt(T) on the strongly convex run
  start = Clock::now();
  {
    CriterionResult r{9, "sub-sqrt(T) regret order", false, "", 0.0, 60.0};
    const auto& curve = t3.at("rwt");
    std::vector<double> ratios;
    for (const auto t : {h / 100, h / 10, h}) {
      const auto it = std::find(curve.checkpoints.begin(), curve.checkpoints.end(), t);
      const double reg = curve.mean_regret[static_cast<std::size_t>(it - curve.checkpoints.begin())];
      ratios.push_back(reg / std::sqrt(static_cast<double>(t)));
    }
    r.detail = "R(T)/sqrt(T) at T=" + std::to_string(h / 100) + "," + std::to_string(h / 10) + "," +
               std::to_string(h) + ": " + num(ratios[0]) + ", " + num(ratios[1]) + ", " + num(ratios[2]);
    out.push_back(finish(r, ratios[0] > ratios[1] && ratios[1] > ratios[2], scale, start));
  }
  return out;
}

CriterionResult check_heavy_tail_sublinearity(const SuiteScale& scale) {
  const auto start = Clock::now();
  CriterionResult r{7, "heavy-tail sublinear regret", false, "", 0.0, 1200.0};
  const std::uint64_t h = scale.horizon;
  ExperimentConfig cfg;
  cfg.title = "heavy_tail";
  cfg.objective = ObjectiveSpec::power(4.0, 1.2, 0.2);
  cfg.noise = ParetoTailNoise{1.9, 1.0, 1.5};
  cfg.policies = {{"rwt", RwtPolicy{kPCheck}}};
  cfg.horizon = h;
  cfg.num_runs = scale.figure_runs;
  cfg.base_seed = scale.seed;
  cfg.checkpoints = {h / 10, h};
  const auto table = run_experiment(cfg);
  const auto& curve = table.at("rwt");
  const double early = curve.mean_regret[0] / static_cast<double>(h / 10);
  const double late = curve.mean_regret[1] / static_cast<double>(h);
  // Strict decrease beyond floating-point accumulation noise (~1e-11 relative).
  const bool sublinear = late < early * (1.0 - 1e-9);

  const double b = 1.5;
  const double u = moment_certificate(cfg.objective, cfg.noise, b);
  BoundInputs in;
  in.p_check = kPCheck;
  in.b = b;
  in.u = u;
  in.g_max = cfg.objective.g_max();
  bool dominated = true;
  for (std::size_t j = 0; j < 2; ++j) {
    const double bound = theorem2_regret_bound(cfg.objective.fclass(), in,
                                               static_cast<double>(curve.checkpoints[j]));
    dominated = dominated && curve.mean_regret[j] <= bound;  // false on NaN
  }

  // Samples the first midpoint test needs before its threshold can fall below |g(1/2)|.
  const HeavyTailTestConfig ht(b, u, ConfidenceParam(kPCheck));
  const double g_mid = std::abs(g_value(cfg.objective, 0.5));
  double penalty = 0.0;
  std::uint64_t s = 0;
  constexpr std::uint64_t kScan = 100'000'000;
  while (s < kScan) {
    ++s;
    penalty += truncation_penalty(s, ht);
    if (s >= kMinSamples && heavytail_threshold(s, penalty, ht) < g_mid) break;
  }
  r.detail = "R(T)/T at T=" + std::to_string(h / 10) + ": " + num(early) + ", T=" + std::to_string(h) + ": " +
             num(late) + "; heavy-tail regret bound " + (dominated ? "holds" : "violated") + " (u=" + num(u) + ", B0=" +
             num(ht.b0) + "); root-midpoint test threshold first drops below |g(0.5)|=" + num(g_mid) + " at s=" +
             (s < kScan ? std::to_string(s) : ">" + std::to_string(kScan));
  return finish(r, sublinear && dominated, scale, start);
}

CriterionResult check_structural(const SuiteScale& scale) {
  const auto start = Clock::now();
  CriterionResult r{10, "determinism and structural invariants", false, "", 0.0, 60.0};
  std::ostringstream detail;
  bool ok = true;

  // byte-identical CSV on rerun
  auto cfg = make_preset("fig3", {4, 1000, 7}).front().second;
  const bool same_csv = format_csv(run_experiment(cfg)) == format_csv(run_experiment(cfg));
  ok = ok && same_csv;
  detail << "csv rerun " << (same_csv ? "identical" : "DIFFERS");

  // tree invariants to depth 12
  std::uint64_t nodes = 0;
  bool tree_ok = true;
  for (std::uint64_t depth = 0; depth <= 12; ++depth) {
    for (std::uint64_t k = 1; k <= (std::uint64_t{1} << depth); ++k) {
      const NodeId node(depth, k);
      const auto iv = interval(node);
      const auto lc = interval(left_child(node));
      const auto rc = interval(right_child(node));
      tree_ok = tree_ok && lc.left == iv.left && lc.right == iv.mid && rc.left == iv.mid && rc.right == iv.right;
      tree_ok = tree_ok && parent(left_child(node)) == node && parent(right_child(node)) == node;
      tree_ok = tree_ok && iv.right - iv.left == DyadicPoint::pow2_inverse(depth);
      ++nodes;
    }
  }
  ok = ok && tree_ok;
  detail << "; tree invariants over " << nodes << " nodes " << (tree_ok ? "hold" : "FAIL");

  // threshold strictly decreasing in s
  const SubGaussianTestConfig subg(1.0, ConfidenceParam(kPCheck));
  bool mono = true;
  double prev = subgaussian_threshold(3, subg);
  for (std::uint64_t s = 4; s <= 100'000; ++s) {
    const double cur = subgaussian_threshold(s, subg);
    mono = mono && cur < prev;
    prev = cur;
  }
  ok = ok && mono;
  detail << "; threshold monotone s=3..1e5 " << (mono ? "yes" : "NO");

  // cache size 1 reproduces plain RWT
  const auto obj = ObjectiveSpec::power(1.0, 1.4, 0.05);
  const TestConfig tc = SubGaussianTestConfig(1.0, ConfidenceParam(kPCheck));
  bool same_trace = true;
  constexpr std::uint64_t kSeeds = 10;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const auto plain = run_rwt(obj, GaussianNoise{1.0}, scale.horizon, tc, seed);
    const auto cached = run_rwt_cached(obj, GaussianNoise{1.0}, scale.horizon, tc, seed, CachedWalkOptions{});
    bool eq = plain.segments.size() == cached.segments.size() && plain.samples_total == cached.samples_total &&
              plain.final_node == cached.final_node && plain.walk_steps == cached.walk_steps;
    for (std::size_t i = 0; eq && i < plain.segments.size(); ++i) {
      eq = plain.segments[i].excess == cached.segments[i].excess &&
           plain.segments[i].length == cached.segments[i].length;
    }
    same_trace = same_trace && eq;
  }
  ok = ok && same_trace;
  detail << "; cache-1 trace equals plain RWT for " << kSeeds << " seeds " << (same_trace ? "yes" : "NO");
  r.detail = detail.str();
  return finish(r, ok, scale, start);
}

std::vector<CriterionResult> run_suite(const SuiteScale& scale, const std::vector<int>& ids,
                                       const CriterionSink& sink) {
  const auto wanted = [&ids](std::initializer_list<int> group) {
    if (ids.empty()) return true;
    return std::any_of(group.begin(), group.end(),
                       [&ids](int id) { return std::find(ids.begin(), ids.end(), id) != ids.end(); });
  };
  std::vector<CriterionResult> all;
  const auto emit = [&](CriterionResult r) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), r.id) == ids.end()) return;
    if (sink) sink(r);
    all.push_back(std::move(r));
  };
  if (wanted({1})) emit(check_test_error_rate(scale));
  if (wanted({2})) emit(check_sample_complexity(scale));
  if (wanted({3})) emit(check_lemma1_convergence(scale));
  if (wanted({4, 5, 6, 8, 9})) {
    for (auto& r : check_figures(scale)) emit(std::move(r));
  }
  if (wanted({7})) emit(check_heavy_tail_sublinearity(scale));
  if (wanted({10})) emit(check_structural(scale));
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return all;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << " " << r.name << ": " << r.detail << " ("
     << num(r.seconds) << "s)";
  return os.str();
}

}  // namespace rwt
