#include "rwt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace rwt {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::string value;
  int line;
  bool used = false;
};

// One [section] of the file with its key/value fields.
class Section {
 public:
  Section(std::string name, int line) : name_(std::move(name)), line_(line) {}

  void set(const std::string& key, std::string value, int line) {
    if (fields_.count(key)) throw ConfigError(where(line, key) + "duplicate field");
    fields_.emplace(key, Field{std::move(value), line});
  }

  bool has(const std::string& key) const { return fields_.count(key) != 0; }

  std::string text(const std::string& key) {
    auto& f = field(key);
    f.used = true;
    return f.value;
  }

  std::optional<std::string> optional_text(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return text(key);
  }

  double real(const std::string& key) {
    auto& f = field(key);
    f.used = true;
    return parse_real(f.value, f.line, key);
  }

  std::uint64_t integer(const std::string& key) {
    auto& f = field(key);
    f.used = true;
    return parse_integer(f.value, f.line, key);
  }

  double parse_real(const std::string& v, int line, const std::string& key) const {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
      throw ConfigError(where(line, key) + "expected a real number, got '" + v + "'");
    }
    return out;
  }

  std::uint64_t parse_integer(const std::string& v, int line, const std::string& key) const {
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) {
      throw ConfigError(where(line, key) + "expected a non-negative integer, got '" + v + "'");
    }
    return out;
  }

  int line_of(const std::string& key) const { return fields_.at(key).line; }

  std::string where(int line, const std::string& key) const {
    return "line " + std::to_string(line) + ": [" + name_ + "] field '" + key + "': ";
  }

  void reject_unknown() const {
    for (const auto& [key, f] : fields_) {
      if (!f.used) throw ConfigError(where(f.line, key) + "unknown field");
    }
  }

  const std::string& name() const { return name_; }
  int line() const { return line_; }

 private:
  Field& field(const std::string& key) {
    const auto it = fields_.find(key);
    if (it == fields_.end()) {
      throw ConfigError("line " + std::to_string(line_) + ": [" + name_ + "] missing field '" + key + "'");
    }
    return it->second;
  }

  std::string name_;
  int line_;
  std::map<std::string, Field> fields_;
};

ObjectiveSpec parse_objective(Section& s) {
  const double xstar = s.real("xstar");
  std::vector<PowerTerm> terms;
  const int line = s.line_of("terms");
  for (const auto& item : split(s.text("terms"), ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError(s.where(line, "terms") + "expected coefficient:exponent pairs, got '" + item + "'");
    }
    terms.push_back({s.parse_real(trim(item.substr(0, colon)), line, "terms"),
                     s.parse_real(trim(item.substr(colon + 1)), line, "terms")});
  }
  if (terms.empty()) throw ConfigError(s.where(line, "terms") + "no terms given");
  const std::string cls = s.optional_text("class").value_or("auto");
  try {
    if (cls == "auto") {
      if (terms.size() != 1) throw ConfigError(s.where(s.line(), "class") + "auto class needs a single term");
      return ObjectiveSpec::power(terms[0].coefficient, terms[0].exponent, xstar);
    }
    if (cls == "convex") return ObjectiveSpec(terms, xstar, Convex{});
    if (cls == "strongly_convex") return ObjectiveSpec(terms, xstar, StronglyConvex{s.real("alpha")});
    if (cls == "nondiff") return ObjectiveSpec(terms, xstar, NonDiffAtOpt{s.real("delta")});
  } catch (const std::invalid_argument& e) {
    throw ConfigError("line " + std::to_string(s.line()) + ": [objective] " + e.what());
  }
  throw ConfigError(s.where(s.line_of("class"), "class") + "unknown class '" + cls + "'");
}

NoiseModel parse_noise(Section& s) {
  const std::string kind = s.text("kind");
  NoiseModel noise;
  if (kind == "gaussian") {
    noise = GaussianNoise{s.real("sigma_sq")};
  } else if (kind == "pareto") {
    noise = ParetoTailNoise{s.real("tail_index"), s.real("scale"), s.real("moment_order")};
  } else {
    throw ConfigError(s.where(s.line_of("kind"), "kind") + "unknown noise kind '" + kind + "'");
  }
  try {
    validate(noise);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("line " + std::to_string(s.line()) + ": [noise] " + e.what());
  }
  return noise;
}

PolicySpec parse_policy(Section& s, const std::string& name) {
  const std::string type = s.text("type");
  if (type == "rwt") return {name, RwtPolicy{s.real("p_check")}};
  if (type == "rwt_cached") {
    CachedRwtPolicy p{s.real("p_check"), s.integer("cache_size")};
    const std::string reuse = s.optional_text("reuse").value_or("side");
    if (reuse == "consume") {
      p.reuse = VerdictReuse::ConsumeOnUse;
    } else if (reuse == "all") {
      p.reuse = VerdictReuse::KeepAll;
    } else if (reuse != "side") {
      throw ConfigError(s.where(s.line_of("reuse"), "reuse") + "expected side, consume or all");
    }
    return {name, p};
  }
  if (type == "sgd") {
    SgdConfig sgd{InverseSqrtT{}, std::nullopt};
    const std::string schedule = s.text("schedule");
    if (schedule == "c_over_t") {
      sgd.schedule = ConstantOverT{s.real("c")};
    } else if (schedule == "inv_alpha_t") {
      sgd.schedule = InverseAlphaT{s.real("alpha_hat")};
    } else if (schedule != "inv_sqrt_t") {
      throw ConfigError(s.where(s.line_of("schedule"), "schedule") + "unknown schedule '" + schedule + "'");
    }
    const std::string x1 = s.optional_text("x1").value_or("uniform");
    if (x1 != "uniform") sgd.x1 = s.parse_real(x1, s.line_of("x1"), "x1");
    return {name, SgdPolicy{sgd}};
  }
  throw ConfigError(s.where(s.line_of("type"), "type") + "unknown policy type '" + type + "'");
}

const char* reuse_name(VerdictReuse r) {
  switch (r) {
    case VerdictReuse::ConsumeOnUse:
      return "consume";
    case VerdictReuse::KeepAll:
      return "all";
    case VerdictReuse::KeepSideObservations:
      break;
  }
  return "side";
}

bool parse_bool(Section& s, const std::string& key) {
  const std::string v = s.text(key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(s.where(s.line_of(key), key) + "expected true or false");
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.num_runs < 1) throw ConfigError("runs must be at least 1");
  if (cfg.horizon < 1) throw ConfigError("horizon must be at least 1");
  if (cfg.policies.empty()) throw ConfigError("at least one [policy ...] section is required");
  if (!std::is_sorted(cfg.checkpoints.begin(), cfg.checkpoints.end()) ||
      std::adjacent_find(cfg.checkpoints.begin(), cfg.checkpoints.end()) != cfg.checkpoints.end()) {
    throw ConfigError("checkpoints must be strictly increasing");
  }
  if (!cfg.checkpoints.empty() && (cfg.checkpoints.front() < 1 || cfg.checkpoints.back() > cfg.horizon)) {
    throw ConfigError("checkpoints must lie in [1, horizon]");
  }
  std::set<std::string> names;
  for (const auto& p : cfg.policies) {
    if (p.name.empty() || p.name.find_first_of(" \t,[]") != std::string::npos) {
      throw ConfigError("policy name '" + p.name + "' must be non-empty without spaces, commas or brackets");
    }
    if (!names.insert(p.name).second) throw ConfigError("duplicate policy name '" + p.name + "'");
    try {
      std::visit(
          [](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, SgdPolicy>) {
              validate(k.sgd);
            } else {
              ConfidenceParam{k.p_check};
              if constexpr (std::is_same_v<K, CachedRwtPolicy>) {
                if (k.cache_size < 1) throw std::invalid_argument("cache_size must be at least 1");
              }
            }
          },
          p.kind);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("policy '" + p.name + "': " + e.what());
    }
  }
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon) {
  constexpr int kPoints = 64;
  const double first = std::ceil(static_cast<double>(horizon) / kPoints);
  const double ratio = std::pow(static_cast<double>(horizon) / first, 1.0 / (kPoints - 1));
  std::vector<std::uint64_t> out;
  for (int i = 0; i < kPoints; ++i) {
    auto t = static_cast<std::uint64_t>(std::llround(first * std::pow(ratio, i)));
    t = std::clamp<std::uint64_t>(t, 1, horizon);
    if (out.empty() || t > out.back()) out.push_back(t);
  }
  if (out.back() != horizon) out.push_back(horizon);
  return out;
}

std::vector<std::uint64_t> effective_checkpoints(const ExperimentConfig& cfg) {
  return cfg.checkpoints.empty() ? default_checkpoints(cfg.horizon) : cfg.checkpoints;
}

ExperimentConfig parse_config(const std::string& text) {
  std::vector<Section> sections;
  sections.emplace_back("general", 1);
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated section header");
      sections.emplace_back(trim(content.substr(1, content.size() - 2)), line);
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value', got '" + content + "'");
    }
    const std::string key = trim(content.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key");
    sections.back().set(key, trim(content.substr(eq + 1)), line);
  }

  ExperimentConfig cfg;
  Section& general = sections.front();
  cfg.title = general.optional_text("title").value_or(cfg.title);
  cfg.horizon = general.integer("horizon");
  cfg.num_runs = general.integer("runs");
  cfg.base_seed = general.has("seed") ? general.integer("seed") : cfg.base_seed;
  cfg.output = general.optional_text("output").value_or(cfg.output);
  if (general.has("log_axes")) cfg.log_axes = parse_bool(general, "log_axes");
  if (const auto cps = general.optional_text("checkpoints"); cps && *cps != "default") {
    for (const auto& item : split(*cps, ',')) {
      cfg.checkpoints.push_back(general.parse_integer(item, general.line_of("checkpoints"), "checkpoints"));
    }
  }
  general.reject_unknown();

  bool have_objective = false;
  bool have_noise = false;
  for (std::size_t i = 1; i < sections.size(); ++i) {
    Section& s = sections[i];
    const auto& name = s.name();
    if (name == "objective") {
      if (have_objective) throw ConfigError("line " + std::to_string(s.line()) + ": duplicate [objective]");
      cfg.objective = parse_objective(s);
      have_objective = true;
    } else if (name == "noise") {
      if (have_noise) throw ConfigError("line " + std::to_string(s.line()) + ": duplicate [noise]");
      cfg.noise = parse_noise(s);
      have_noise = true;
    } else if (name.rfind("policy ", 0) == 0) {
      cfg.policies.push_back(parse_policy(s, trim(name.substr(7))));
    } else {
      throw ConfigError("line " + std::to_string(s.line()) + ": unknown section [" + name + "]");
    }
    s.reject_unknown();
  }
  if (!have_objective) throw ConfigError("missing [objective] section");
  if (!have_noise) throw ConfigError("missing [noise] section");
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "': file not found");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "title = " << cfg.title << "\n";
  os << "horizon = " << cfg.horizon << "\n";
  os << "runs = " << cfg.num_runs << "\n";
  os << "seed = " << cfg.base_seed << "\n";
  os << "output = " << cfg.output << "\n";
  os << "log_axes = " << (cfg.log_axes ? "true" : "false") << "\n";
  if (!cfg.checkpoints.empty()) {
    os << "checkpoints = ";
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) os << (i ? ", " : "") << cfg.checkpoints[i];
    os << "\n";
  }

  os << "\n[objective]\n";
  os << "xstar = " << fmt_double(cfg.objective.xstar()) << "\n";
  os << "terms = ";
  const auto& terms = cfg.objective.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    os << (i ? ", " : "") << fmt_double(terms[i].coefficient) << ":" << fmt_double(terms[i].exponent);
  }
  os << "\nclass = " << class_name(cfg.objective.fclass()) << "\n";
  if (const auto* sc = std::get_if<StronglyConvex>(&cfg.objective.fclass())) {
    os << "alpha = " << fmt_double(sc->alpha) << "\n";
  } else if (const auto* nd = std::get_if<NonDiffAtOpt>(&cfg.objective.fclass())) {
    os << "delta = " << fmt_double(nd->delta) << "\n";
  }

  os << "\n[noise]\n";
  if (const auto* g = std::get_if<GaussianNoise>(&cfg.noise)) {
    os << "kind = gaussian\nsigma_sq = " << fmt_double(g->sigma_sq) << "\n";
  } else {
    const auto& p = std::get<ParetoTailNoise>(cfg.noise);
    os << "kind = pareto\ntail_index = " << fmt_double(p.tail_index) << "\nscale = " << fmt_double(p.scale)
       << "\nmoment_order = " << fmt_double(p.moment_order) << "\n";
  }

  for (const auto& policy : cfg.policies) {
    os << "\n[policy " << policy.name << "]\n";
    std::visit(
        [&os](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, RwtPolicy>) {
            os << "type = rwt\np_check = " << fmt_double(k.p_check) << "\n";
          } else if constexpr (std::is_same_v<K, CachedRwtPolicy>) {
            os << "type = rwt_cached\np_check = " << fmt_double(k.p_check) << "\ncache_size = " << k.cache_size
               << "\nreuse = " << reuse_name(k.reuse) << "\n";
          } else {
            os << "type = sgd\n";
            std::visit(
                [&os](const auto& s) {
                  using S = std::decay_t<decltype(s)>;
                  if constexpr (std::is_same_v<S, ConstantOverT>) {
                    os << "schedule = c_over_t\nc = " << fmt_double(s.c) << "\n";
                  } else if constexpr (std::is_same_v<S, InverseAlphaT>) {
                    os << "schedule = inv_alpha_t\nalpha_hat = " << fmt_double(s.alpha_hat) << "\n";
                  } else {
                    os << "schedule = inv_sqrt_t\n";
                  }
                },
                k.sgd.schedule);
            os << "x1 = " << (k.sgd.x1 ? fmt_double(*k.sgd.x1) : std::string("uniform")) << "\n";
          }
        },
        policy.kind);
  }
  return os.str();
}

std::filesystem::path resolve_output_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      return std::filesystem::path(dir) / p;
    }
  }
  return p;
}

}  // namespace rwt
