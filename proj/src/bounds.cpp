#include "rwt/bounds.hpp"

#include "rwt/sequential_tests.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rwt {
namespace {

void require_positive_gradient(double g_abs) {
  if (!(g_abs > 0.0)) throw std::domain_error("sample-complexity bound is undefined at g = 0");
}

void require_horizon(double horizon) {
  if (!(horizon >= 3.0)) throw std::invalid_argument("regret bounds need T >= 3");
}

// g_max (log T + 4), shared by every regret bound.
double tail_term(double g_max, double horizon) { return g_max * (std::log(horizon) + 4.0); }

// The nested logs are undefined for small T; the inner argument is floored at e.
double log_floor_e(double x) { return std::log(std::max(x, std::numbers::e)); }

// log((12/√p̌) log(2(2p-1)² T / (3 log T √p̌)))
double subg_log_term(const BoundInputs& in, double horizon) {
  const double k = 2.0 * in.bias() - 1.0;
  const double sp = std::sqrt(in.p_check);
  return std::log(12.0 / sp * log_floor_e(2.0 * k * k * horizon / (3.0 * std::log(horizon) * sp)));
}

// log((18/c_b) log((18/c_b) (T / (9 γ_b log T))^{2(b-1)/b}))
double ht_log_term(const BoundInputs& in, double horizon, double gb) {
  const double cb = in.c_b();
  const double ratio = std::pow(horizon / (9.0 * gb * std::log(horizon)), 2.0 * (in.b - 1.0) / in.b);
  return std::log(18.0 / cb * log_floor_e(18.0 / cb * ratio));
}

}  // namespace

double BoundInputs::bias() const {
  const double v = p.value_or(std::pow(1.0 - p_check, 3.0));
  if (!(v > 0.5 && v <= 1.0)) throw std::invalid_argument("walk bias must lie in (1/2, 1]");
  return v;
}

double BoundInputs::b0() const { return compute_b0(b, u, p_check); }

double BoundInputs::c_b() const { return (b - 1.0) * std::sqrt(p_check); }

double BoundInputs::gamma_b() const { return rwt::gamma_b(b, u, p_check); }

Lemma1Bound lemma1_tail(std::uint64_t n, double p) {
  if (!(p > 0.5 && p <= 1.0)) throw std::invalid_argument("walk bias must lie in (1/2, 1]");
  if (n < 1) throw std::invalid_argument("walk tail bound needs n >= 1");
  const double k = 2.0 * p - 1.0;
  const double nn = static_cast<double>(n);
  return {std::pow(2.0, -nn * k / 2.0), std::exp(-nn * k * k / 2.0)};
}

double lemma2_sample_bound(double g_abs, double sigma_sq, double p_check) {
  require_positive_gradient(g_abs);
  const double g2 = g_abs * g_abs;
  const double sp = std::sqrt(p_check);
  return 40.0 * sigma_sq / g2 * std::log(12.0 / sp * std::log(240.0 * sigma_sq / (sp * g2))) + 2.0;
}

double gamma_b(double b, double u, double p_check) {
  if (!(b > 1.0)) throw std::invalid_argument("gamma_b needs b > 1");
  const double b0 = compute_b0(b, u, p_check);
  return std::tgamma((2.0 * b - 1.0) / (b - 1.0)) * std::pow((u / 3.0 + 0.125) / b0, b / (b - 1.0)) + 1.0;
}

double lemma3_sample_bound(double g_abs, double b, double u, double p_check) {
  require_positive_gradient(g_abs);
  if (!(b > 1.0)) throw std::invalid_argument("heavy-tailed sample bound needs b > 1");
  const double b0 = compute_b0(b, u, p_check);
  const double cb = (b - 1.0) * std::sqrt(p_check);
  const double g2 = g_abs * g_abs;
  const double inner = 8.0 * b0 * b0 / g2 * std::log(18.0 / cb * std::log(144.0 * b0 * b0 / (g2 * cb)));
  return gamma_b(b, u, p_check) * (std::pow(inner, b / (2.0 * (b - 1.0))) + 8.0);
}

double theorem1_regret_bound(const FunctionClass& fclass, const BoundInputs& in, double horizon) {
  require_horizon(horizon);
  const double k = 2.0 * in.bias() - 1.0;
  const double log_t = std::log(horizon);
  const double tail = tail_term(in.g_max, horizon);
  if (std::holds_alternative<Convex>(fclass)) {
    return 6.0 / k * std::sqrt(10.0 * in.sigma_sq * horizon * log_t * subg_log_term(in, horizon)) +
           3.0 * in.g_max / k * std::sqrt(2.0 * horizon * log_t) + tail;
  }
  if (const auto* sc = std::get_if<StronglyConvex>(&fclass)) {
    // denominator 2α(2p-1)², the 2 attached to α
    const double denom = 2.0 * sc->alpha * k * k;
    return 360.0 * in.sigma_sq * log_t / denom * subg_log_term(in, horizon) +
           18.0 * in.g_max * in.g_max * log_t / denom + tail;
  }
  const double delta = std::get<NonDiffAtOpt>(fclass).delta;
  return 9.0 * in.g_max * log_t / (k * k) * lemma2_sample_bound(delta, in.sigma_sq, in.p_check) + tail;
}

double theorem2_regret_bound(const FunctionClass& fclass, const BoundInputs& in, double horizon) {
  require_horizon(horizon);
  const double b = in.b;
  if (!(b > 1.0)) throw std::invalid_argument("heavy-tailed bounds need b > 1");
  const double k = 2.0 * in.bias() - 1.0;
  const double log_t = std::log(horizon);
  const double tail = tail_term(in.g_max, horizon);
  const double gb = in.gamma_b();
  const double b0 = in.b0();
  const double base = 9.0 * gb / (k * k);
  if (std::holds_alternative<Convex>(fclass)) {
    const double lead = std::pow(base, (b - 1.0) / b);
    const double scale = std::pow(horizon, 1.0 / b) * std::pow(log_t, (b - 1.0) / b);
    return 2.0 * std::sqrt(2.0) * b0 * lead * scale * std::sqrt(ht_log_term(in, horizon, gb)) +
           8.0 * lead * in.g_max * scale + tail;
  }
  if (const auto* sc = std::get_if<StronglyConvex>(&fclass)) {
    const double lead = std::pow(base, 2.0 * (b - 1.0) / b);
    const double scale = std::pow(horizon, (2.0 - b) / b) * std::pow(log_t, 2.0 * (b - 1.0) / b);
    return 4.0 * b0 * b0 / sc->alpha * lead * scale * ht_log_term(in, horizon, gb) +
           4.0 / sc->alpha * lead * in.g_max * in.g_max * scale + tail;
  }
  const double delta = std::get<NonDiffAtOpt>(fclass).delta;
  const double cb = in.c_b();
  const double d2 = delta * delta;
  const double inner = 2.0 * b0 * b0 / d2 * std::log(18.0 / cb * std::log(36.0 * b0 * b0 / (d2 * cb)));
  return 9.0 * in.g_max * gb * log_t / (k * k) * (std::pow(inner, b / (2.0 * (b - 1.0))) + 8.0) + tail;
}

}  // namespace rwt
