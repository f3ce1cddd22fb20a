#include "rwt/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwt {
namespace {

constexpr int kGrid = 400;

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

double raw_f(const std::vector<PowerTerm>& terms, double xstar, double x) {
  const double d = std::abs(x - xstar);
  double v = 0.0;
  for (const auto& t : terms) v += t.coefficient * std::pow(d, t.exponent);
  return v;
}

double raw_g(const std::vector<PowerTerm>& terms, double xstar, double x) {
  if (x == xstar) return 0.0;
  const double diff = x - xstar;
  const double d = std::abs(diff);
  double v = 0.0;
  for (const auto& t : terms) v += t.coefficient * t.exponent * std::pow(d, t.exponent - 1.0);
  return sgn(diff) * v;
}

}  // namespace

std::string class_name(const FunctionClass& fclass) {
  return std::visit(
      [](const auto& c) -> std::string {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, Convex>) return "convex";
        else if constexpr (std::is_same_v<C, StronglyConvex>) return "strongly_convex";
        else return "nondiff";
      },
      fclass);
}

ObjectiveSpec::ObjectiveSpec(std::vector<PowerTerm> terms, double xstar, FunctionClass fclass)
    : terms_(std::move(terms)), xstar_(xstar), fclass_(fclass), g_max_(0.0) {
  if (terms_.empty()) throw std::invalid_argument("objective needs at least one term");
  if (!(xstar_ >= 0.0 && xstar_ <= 1.0)) throw std::invalid_argument("x* must lie in [0, 1]");
  for (const auto& t : terms_) {
    if (!(t.exponent >= 1.0)) throw std::invalid_argument("term exponents must be >= 1");
    if (!std::isfinite(t.coefficient)) throw std::invalid_argument("term coefficient must be finite");
  }
  if (const auto* sc = std::get_if<StronglyConvex>(&fclass_); sc && !(sc->alpha > 0.0)) {
    throw std::invalid_argument("strong convexity parameter must be positive");
  }
  if (const auto* nd = std::get_if<NonDiffAtOpt>(&fclass_); nd && !(nd->delta > 0.0)) {
    throw std::invalid_argument("gradient lower bound delta must be positive");
  }

  const double fmin = raw_f(terms_, xstar_, xstar_);
  const auto at = [](int i) { return static_cast<double>(i) / kGrid; };
  for (int i = 0; i <= kGrid; ++i) {
    const double fx = raw_f(terms_, xstar_, at(i));
    if (fx < fmin - 1e-12) throw std::invalid_argument("objective is not minimized at x*");
    for (int j = i + 2; j <= kGrid; j += 2) {
      const double fy = raw_f(terms_, xstar_, at(j));
      const double fm = raw_f(terms_, xstar_, at((i + j) / 2));
      const double tol = 1e-12 * (1.0 + std::abs(fx) + std::abs(fy));
      if (fm > 0.5 * (fx + fy) + tol) throw std::invalid_argument("objective fails the convexity grid check");
    }
  }
  if (const auto* nd = std::get_if<NonDiffAtOpt>(&fclass_)) {
    for (int i = 0; i <= kGrid; ++i) {
      if (at(i) == xstar_) continue;
      if (std::abs(raw_g(terms_, xstar_, at(i))) < nd->delta * (1.0 - 1e-12)) {
        throw std::invalid_argument("gradient magnitude drops below delta");
      }
    }
  }
  g_max_ = std::max(std::abs(raw_g(terms_, xstar_, 0.0)), std::abs(raw_g(terms_, xstar_, 1.0)));
}

ObjectiveSpec ObjectiveSpec::power(double a, double b, double xstar) {
  if (!(a > 0.0)) throw std::invalid_argument("coefficient must be positive");
  FunctionClass fclass = Convex{};
  if (b == 1.0) {
    fclass = NonDiffAtOpt{a};
  } else if (b > 1.0 && b <= 2.0) {
    fclass = StronglyConvex{strong_convexity_alpha(a, b, xstar)};
  }
  return ObjectiveSpec({{a, b}}, xstar, fclass);
}

double f_value(const ObjectiveSpec& obj, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::out_of_range("query point outside [0, 1]");
  return raw_f(obj.terms(), obj.xstar(), x);
}

double g_value(const ObjectiveSpec& obj, double x) { return raw_g(obj.terms(), obj.xstar(), x); }

double excess_value(const ObjectiveSpec& obj, double x) {
  return f_value(obj, x) - raw_f(obj.terms(), obj.xstar(), obj.xstar());
}

double strong_convexity_alpha(double a, double b, double xstar) {
  if (!(b > 1.0)) throw std::invalid_argument("strong convexity needs b > 1");
  return a * b * (b - 1.0) * std::pow(std::max(xstar, 1.0 - xstar), b - 2.0);
}

void validate(const NoiseModel& noise) {
  if (const auto* g = std::get_if<GaussianNoise>(&noise)) {
    if (!(g->sigma_sq >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
    return;
  }
  const auto& p = std::get<ParetoTailNoise>(noise);
  if (!(p.tail_index > 1.0)) throw std::invalid_argument("tail index must exceed 1");
  if (!(p.scale > 0.0)) throw std::invalid_argument("noise scale must be positive");
  if (!(p.moment_order > 1.0 && p.moment_order < p.tail_index)) {
    throw std::invalid_argument("moment order must lie in (1, tail index)");
  }
}

double pareto_abs_moment(const ParetoTailNoise& noise, double b) {
  const double a = noise.tail_index;
  if (!(b < a)) throw std::invalid_argument("moment of order >= tail index is infinite");
  // core mass a/(a+1) uniform on [0, s]; tail mass 1/(a+1) Pareto(a) on [s, inf)
  return std::pow(noise.scale, b) * a / (a + 1.0) * (1.0 / (b + 1.0) + 1.0 / (a - b));
}

double moment_certificate(double g_max, const ParetoTailNoise& noise, double b) {
  return std::pow(2.0, b - 1.0) * (std::pow(g_max, b) + pareto_abs_moment(noise, b));
}

double moment_certificate(const ObjectiveSpec& obj, const NoiseModel& noise, double b) {
  const auto* p = std::get_if<ParetoTailNoise>(&noise);
  if (p == nullptr) throw std::invalid_argument("moment certificate needs the heavy-tailed noise model");
  return moment_certificate(obj.g_max(), *p, b);
}

GradientOracle::GradientOracle(ObjectiveSpec objective, NoiseModel noise, std::uint64_t seed)
    : objective_(std::move(objective)), noise_(noise), rng_(seed) {
  validate(noise_);
}

double GradientOracle::uniform01() { return uniform_(rng_); }

double GradientOracle::draw_noise() {
  if (const auto* g = std::get_if<GaussianNoise>(&noise_)) {
    if (g->sigma_sq == 0.0) return 0.0;
    return std::sqrt(g->sigma_sq) * normal_(rng_);
  }
  const auto& p = std::get<ParetoTailNoise>(noise_);
  const double a = p.tail_index;
  const double pick = uniform_(rng_);
  const double side = uniform_(rng_) < 0.5 ? -1.0 : 1.0;
  if (pick < a / (a + 1.0)) return side * p.scale * uniform_(rng_);
  // 1 - U lies in (0, 1]
  return side * p.scale * std::pow(1.0 - uniform_(rng_), -1.0 / a);
}

double GradientOracle::sample(double x) { return g_value(objective_, x) + draw_noise(); }

}  // namespace rwt
