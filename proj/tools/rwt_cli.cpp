#include "rwt/bounds.hpp"
#include "rwt/config.hpp"
#include "rwt/experiment.hpp"
#include "rwt/presets.hpp"
#include "rwt/verification.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;

namespace {

void write_outputs(const rwt::SummaryTable& table, const fs::path& csv, bool log_axes) {
  rwt::emit_csv(table, csv);
  fs::path gp = csv;
  gp.replace_extension(".gp");
  rwt::emit_plot_script(table, gp, csv, log_axes);
  std::cout << "wrote " << csv.string() << " and " << gp.string() << "\n";
}

rwt::RunnerOptions runner(unsigned threads, bool quiet) {
  rwt::RunnerOptions opts;
  opts.threads = threads;
  if (!quiet) {
    opts.progress = [](const std::string& policy, std::uint64_t done, std::uint64_t total) {
      if (done == total || done % 100 == 0) std::cerr << "\r" << policy << " " << done << "/" << total << std::flush;
      if (done == total) std::cerr << "\n";
    };
  }
  return opts;
}

int cmd_run(const std::string& path, unsigned threads, bool quiet) {
  const auto cfg = rwt::load_config(path);
  const auto table = rwt::run_experiment(cfg, runner(threads, quiet));
  write_outputs(table, rwt::resolve_output_path(cfg.output), cfg.log_axes);
  return 0;
}

int cmd_preset(const std::string& name, const rwt::PresetOptions& popts, unsigned threads, bool quiet) {
  auto parts = rwt::make_preset(name, popts);
  std::vector<std::pair<std::string, rwt::SummaryTable>> tables;
  for (const auto& [label, cfg] : parts) tables.emplace_back(label, rwt::run_experiment(cfg, runner(threads, quiet)));
  const auto& first = parts.front().second;
  const auto table = tables.size() == 1 ? tables.front().second : rwt::merge_tables(name, tables);
  write_outputs(table, rwt::resolve_output_path(name + ".csv"), first.log_axes);
  return 0;
}

int cmd_bounds(const std::string& path) {
  const auto cfg = rwt::load_config(path);
  rwt::BoundInputs in;
  in.g_max = cfg.objective.g_max();
  const bool heavy = std::holds_alternative<rwt::ParetoTailNoise>(cfg.noise);
  if (heavy) {
    const auto& pt = std::get<rwt::ParetoTailNoise>(cfg.noise);
    in.b = pt.moment_order;
    in.u = rwt::moment_certificate(cfg.objective, cfg.noise, in.b);
  } else {
    in.sigma_sq = std::get<rwt::GaussianNoise>(cfg.noise).sigma_sq;
  }
  std::printf("class %s, g_max %.6g, %s\n", rwt::class_name(cfg.objective.fclass()).c_str(), in.g_max,
              heavy ? "heavy-tailed noise" : "sub-Gaussian noise");
  for (const auto& policy : cfg.policies) {
    const double p_check = std::visit(
        [](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, rwt::SgdPolicy>) return -1.0;
          else return k.p_check;
        },
        policy.kind);
    if (p_check < 0) continue;
    in.p_check = p_check;
    std::printf("policy %s (p_check %.6g)\n%12s %20s\n", policy.name.c_str(), p_check, "t", "regret_bound");
    for (const auto t : rwt::effective_checkpoints(cfg)) {
      if (t < 3) continue;
      const double td = static_cast<double>(t);
      const double bound = heavy ? rwt::theorem2_regret_bound(cfg.objective.fclass(), in, td)
                                 : rwt::theorem1_regret_bound(cfg.objective.fclass(), in, td);
      std::printf("%12llu %20.10g\n", static_cast<unsigned long long>(t), bound);
    }
  }
  return 0;
}

int cmd_verify(bool quick, const std::vector<int>& ids) {
  const auto scale = quick ? rwt::SuiteScale::quick() : rwt::SuiteScale::full();
  const auto results = rwt::run_suite(scale, ids, [](const rwt::CriterionResult& r) {
    std::cout << rwt::format_result(r) << std::endl;
  });
  for (const auto& r : results)
    if (!r.passed) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walk on a dyadic tree: experiments and checks"};
  app.require_subcommand(1);
  unsigned threads = 0;
  bool quiet = false;
  app.add_option("-j,--threads", threads, "worker threads (0 = all cores)");
  app.add_flag("-q,--quiet", quiet, "no progress output");

  std::string config_path;
  auto* run = app.add_subcommand("run", "run an experiment config, write CSV and gnuplot script");
  run->add_option("config", config_path, "config file")->required();

  std::string preset_name;
  rwt::PresetOptions popts;
  auto* preset = app.add_subcommand("preset", "run a figure preset");
  preset->add_option("name", preset_name, "fig3, fig4 or fig5")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "fig5"}));
  preset->add_option("--runs", popts.runs, "independent runs")->check(CLI::PositiveNumber);
  preset->add_option("--horizon", popts.horizon, "time horizon T")->check(CLI::PositiveNumber);
  preset->add_option("--seed", popts.seed, "base seed");

  std::string bounds_path;
  auto* bounds = app.add_subcommand("bounds", "print regret bounds at the config's checkpoints");
  bounds->add_option("config", bounds_path, "config file")->required();

  bool quick = false;
  std::vector<int> ids;
  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  verify->add_flag("--quick", quick, "reduced run counts, no time limits");
  verify->add_option("--only", ids, "criterion ids")->check(CLI::Range(1, 10));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, threads, quiet);
    if (*preset) return cmd_preset(preset_name, popts, threads, quiet);
    if (*bounds) return cmd_bounds(bounds_path);
    if (*verify) return cmd_verify(quick, ids);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
