#include "rwt/config.hpp"
#include "rwt/presets.hpp"

#include <gtest/gtest.h>


using namespace rwt;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal = R"(horizon = 100
runs = 1
[objective]
xstar = 0.2
terms = 4:1.2
[noise]
kind = gaussian
sigma_sq = 1
[policy rwt]
type = rwt
p_check = 0.2
)";

}  // namespace

TEST(Config, ParsesFile) {
  const auto cfg = load_config(RWT_TEST_DATA_DIR "/heavy.ini");
  EXPECT_EQ(cfg.title, "heavy");
  EXPECT_EQ(cfg.horizon, 5000u);
  EXPECT_EQ(cfg.num_runs, 3u);
  EXPECT_EQ(cfg.base_seed, 11u);
  EXPECT_EQ(cfg.checkpoints, (std::vector<std::uint64_t>{10, 100, 5000}));
  EXPECT_TRUE(std::holds_alternative<NonDiffAtOpt>(cfg.objective.fclass()));
  EXPECT_EQ(std::get<ParetoTailNoise>(cfg.noise), (ParetoTailNoise{1.9, 0.5, 1.5}));
  ASSERT_EQ(cfg.policies.size(), 3u);
  EXPECT_EQ(cfg.policies[0].name, "walk");
  EXPECT_EQ(std::get<RwtPolicy>(cfg.policies[0].kind).p_check, 0.1);
  const auto& cached = std::get<CachedRwtPolicy>(cfg.policies[1].kind);
  EXPECT_EQ(cached.cache_size, 3u);
  EXPECT_EQ(cached.reuse, VerdictReuse::KeepAll);
  const auto& sgd = std::get<SgdPolicy>(cfg.policies[2].kind);
  EXPECT_EQ(sgd.sgd.schedule, StepSchedule{ConstantOverT{0.1}});
  EXPECT_EQ(sgd.sgd.x1, 0.75);
}

TEST(Config, RoundTrip) {
  const auto cfg = load_config(RWT_TEST_DATA_DIR "/heavy.ini");
  EXPECT_EQ(parse_config(serialize_config(cfg)), cfg);
  for (const auto& name : {"fig3", "fig4", "fig5"}) {
    for (const auto& [label, preset] : make_preset(name, {3, 1000, 2})) {
      EXPECT_EQ(parse_config(serialize_config(preset)), preset) << label;
    }
  }
}

TEST(Config, Defaults) {
  const auto cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.base_seed, 1u);
  EXPECT_TRUE(cfg.checkpoints.empty());
  EXPECT_EQ(effective_checkpoints(cfg), default_checkpoints(100));
}

TEST(Config, DefaultCheckpoints) {
  const auto grid = default_checkpoints(100000);
  EXPECT_EQ(grid.size(), 64u);
  EXPECT_EQ(grid.front(), 1563u);
  EXPECT_EQ(grid.back(), 100000u);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_LT(grid[i - 1], grid[i]);
  const auto small = default_checkpoints(10);
  EXPECT_EQ(small.front(), 1u);
  EXPECT_EQ(small.back(), 10u);
  EXPECT_LE(small.size(), 10u);
}

TEST(Config, Diagnostics) {
  std::string text = kMinimal;
  EXPECT_NE(error_of(text + "bogus = 1\n").find("line 12"), std::string::npos);
  EXPECT_NE(error_of(text + "bogus = 1\n").find("unknown field"), std::string::npos);
  EXPECT_NE(error_of(std::string("horizon = ten\n") + (kMinimal + 14)).find("horizon"), std::string::npos);
  EXPECT_NE(error_of(text + "[policy x]\ntype = sgd\nschedule = nope\n").find("unknown schedule"), std::string::npos);
  EXPECT_NE(error_of(text + "[policy rwt]\ntype = rwt\np_check = 0.2\n").find("rwt"), std::string::npos);
  EXPECT_NE(error_of("checkpoints = 50, 10\n" + text).find("increasing"), std::string::npos);
  EXPECT_NE(error_of("checkpoints = 10, 500\n" + text).find("horizon"), std::string::npos);
  EXPECT_NE(error_of("horizon = 100\n[objective]\nxstar = 0.2\nterms = 4:1.2\n").find("runs"), std::string::npos);
  EXPECT_FALSE(error_of("horizon = 100\nruns = 2\n[objective]\nxstar = 0.2\nterms = 4:1.2\n").empty());
}

TEST(Config, MissingFile) {
  try {
    load_config("/nonexistent/missing.toml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("file not found"), std::string::npos);
  }
}

TEST(Config, OutputDirectoryOverride) {
  ::setenv(kOutputDirEnv, "/tmp/rwt_out", 1);
  EXPECT_EQ(resolve_output_path("a.csv"), std::filesystem::path("/tmp/rwt_out/a.csv"));
  EXPECT_EQ(resolve_output_path("/abs/a.csv"), std::filesystem::path("/abs/a.csv"));
  ::unsetenv(kOutputDirEnv);
  EXPECT_EQ(resolve_output_path("a.csv"), std::filesystem::path("a.csv"));
}

TEST(Presets, Contents) {
  const auto fig3 = make_preset("fig3", {});
  ASSERT_EQ(fig3.size(), 1u);
  const auto& cfg = fig3.front().second;
  EXPECT_EQ(cfg.num_runs, 1000u);
  EXPECT_EQ(cfg.policies.size(), 5u);
  const double alpha = strong_convexity_alpha(4.0, 1.2, 0.2);
  for (const auto& p : cfg.policies) {
    if (p.name == "sgd_inv_alpha_hat_t") {
      EXPECT_EQ(std::get<SgdPolicy>(p.kind).sgd.schedule, StepSchedule{InverseAlphaT{alpha / 4}});
    }
  }
  const auto fig4 = make_preset("fig4", {});
  ASSERT_EQ(fig4.size(), 2u);
  EXPECT_EQ(fig4[0].second.objective, f1_objective());
  EXPECT_EQ(fig4[1].second.objective, ObjectiveSpec::power(3.0, 1.6, 0.2));
  const auto fig5 = make_preset("fig5", {});
  std::vector<std::uint64_t> sizes;
  for (const auto& p : fig5.front().second.policies) sizes.push_back(std::get<CachedRwtPolicy>(p.kind).cache_size);
  EXPECT_EQ(sizes, (std::vector<std::uint64_t>{1, 3, 6}));
  EXPECT_THROW(make_preset("fig9", {}), std::invalid_argument);
}
