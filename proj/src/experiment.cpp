#include "rwt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rwt {

const PolicySummary& SummaryTable::at(const std::string& policy) const {
  for (const auto& p : policies) {
    if (p.policy == policy) return p;
  }
  throw std::out_of_range("no policy named '" + policy + "' in table");
}

std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t run_index) { return base_seed ^ run_index; }

RegretTrace run_policy(const ExperimentConfig& cfg, const PolicySpec& policy, std::uint64_t seed) {
  return std::visit(
      [&](const auto& k) -> RegretTrace {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, RwtPolicy>) {
          return run_rwt(cfg.objective, cfg.noise, cfg.horizon,
                         default_test_config(cfg.objective, cfg.noise, k.p_check), seed);
        } else if constexpr (std::is_same_v<K, CachedRwtPolicy>) {
          CachedWalkOptions opts;
          opts.cache_size = k.cache_size;
          opts.reuse = k.reuse;
          return run_rwt_cached(cfg.objective, cfg.noise, cfg.horizon,
                                default_test_config(cfg.objective, cfg.noise, k.p_check), seed, opts);
        } else {
          return run_sgd(cfg.objective, cfg.noise, cfg.horizon, k.sgd, seed);
        }
      },
      policy.kind);
}

CheckpointTrace run_single(const ExperimentConfig& cfg, const PolicySpec& policy, std::uint64_t run_index) {
  const auto trace = run_policy(cfg, policy, run_seed(cfg.base_seed, run_index));
  CheckpointTrace out;
  out.checkpoints = effective_checkpoints(cfg);
  out.cumulative_regret = cumulative_at(trace, out.checkpoints);
  out.samples_total = trace.samples_total;
  out.final_node = trace.final_node;
  out.final_x = trace.final_x;
  return out;
}

PolicySummary summarize(const std::string& policy, const std::vector<CheckpointTrace>& traces) {
  PolicySummary s;
  s.policy = policy;
  s.num_runs = traces.size();
  if (traces.empty()) return s;
  s.checkpoints = traces.front().checkpoints;
  const std::size_t k = s.checkpoints.size();
  const double n = static_cast<double>(traces.size());
  s.mean_regret.assign(k, 0.0);
  s.stderr_regret.assign(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double sum = 0.0;
    for (const auto& t : traces) sum += t.cumulative_regret[j];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& t : traces) ss += (t.cumulative_regret[j] - mean) * (t.cumulative_regret[j] - mean);
    s.mean_regret[j] = mean;
    s.stderr_regret[j] = traces.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  }
  return s;
}

SummaryTable run_experiment(const ExperimentConfig& cfg, const RunnerOptions& options) {
  validate(cfg);
  SummaryTable table;
  table.title = cfg.title;
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, cfg.num_runs));
  for (const auto& policy : cfg.policies) {
    std::vector<CheckpointTrace> traces(cfg.num_runs);
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> done{0};
    std::mutex progress_mutex;
    std::exception_ptr failure;
    const auto worker = [&] {
      try {
        for (auto r = next++; r < cfg.num_runs; r = next++) {
          traces[r] = run_single(cfg, policy, r);
          const auto finished = ++done;
          if (options.progress) {
            std::lock_guard lock(progress_mutex);
            options.progress(policy.name, finished, cfg.num_runs);
          }
        }
      } catch (...) {
        std::lock_guard lock(progress_mutex);
        if (!failure) failure = std::current_exception();
        next = cfg.num_runs;
      }
    };
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    table.policies.push_back(summarize(policy.name, traces));
  }
  return table;
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

std::string format_csv(const SummaryTable& table) {
  std::ostringstream os;
  os << "policy,checkpoint_t,mean_regret,stderr,num_runs\n";
  std::vector<const PolicySummary*> sorted;
  for (const auto& p : table.policies) sorted.push_back(&p);
  std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->policy < b->policy; });
  for (const auto* p : sorted) {
    for (std::size_t j = 0; j < p->checkpoints.size(); ++j) {
      os << p->policy << "," << p->checkpoints[j] << "," << fmt17(p->mean_regret[j]) << ","
         << fmt17(p->stderr_regret[j]) << "," << p->num_runs << "\n";
    }
  }
  return os.str();
}

void emit_csv(const SummaryTable& table, const std::filesystem::path& path) { write_file(path, format_csv(table)); }

std::string format_plot_script(const SummaryTable& table, const std::string& csv_name, bool log_axes) {
  std::vector<std::string> names;
  for (const auto& p : table.policies) names.push_back(p.policy);
  std::sort(names.begin(), names.end());
  std::string png = csv_name;
  if (const auto dot = png.rfind('.'); dot != std::string::npos) png.erase(dot);
  png += ".png";

  std::ostringstream os;
  os << "# regret curves: " << table.title << "\n";
  os << "set datafile separator ','\n";
  os << "set terminal pngcairo size 900,600\n";
  os << "set output '" << png << "'\n";
  os << "set title '" << table.title << "'\n";
  os << "set xlabel 'time t'\n";
  os << "set ylabel 'cumulative regret'\n";
  os << "set key top left\n";
  if (log_axes) os << "set logscale xy\n";
  os << "plot \\\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    os << "  '" << csv_name << "' skip 1 using 2:(strcol(1) eq '" << names[i]
       << "' ? $3 : 1/0) with linespoints title '" << names[i] << "'" << (i + 1 < names.size() ? ", \\" : "")
       << "\n";
  }
  return os.str();
}

void emit_plot_script(const SummaryTable& table, const std::filesystem::path& script_path,
                      const std::filesystem::path& csv_path, bool log_axes) {
  write_file(script_path, format_plot_script(table, csv_path.filename().string(), log_axes));
}

SummaryTable merge_tables(const std::string& title,
                          const std::vector<std::pair<std::string, SummaryTable>>& parts) {
  SummaryTable out;
  out.title = title;
  for (const auto& [prefix, table] : parts) {
    for (auto p : table.policies) {
      p.policy = prefix + "/" + p.policy;
      out.policies.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace rwt
