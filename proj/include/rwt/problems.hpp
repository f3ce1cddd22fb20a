#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace rwt {

/// One summand a·|x - x*|^b of a separable objective.
struct PowerTerm {
  double coefficient;
  double exponent;

  friend bool operator==(const PowerTerm&, const PowerTerm&) = default;
};

struct Convex {
  friend bool operator==(const Convex&, const Convex&) = default;
};
struct StronglyConvex {
  double alpha;
  friend bool operator==(const StronglyConvex&, const StronglyConvex&) = default;
};
/// |g(x)| >= delta for every x != x*.
struct NonDiffAtOpt {
  double delta;
  friend bool operator==(const NonDiffAtOpt&, const NonDiffAtOpt&) = default;
};

using FunctionClass = std::variant<Convex, StronglyConvex, NonDiffAtOpt>;

std::string class_name(const FunctionClass& fclass);

/// f(x) = Σ a_i |x - x*|^{b_i} on [0, 1] with its subgradient oracle.
///
/// Construction grid-checks what the class promises: f is midpoint convex,
/// minimized at x*, and for NonDiffAtOpt the gradient magnitude stays above
/// delta. Violations throw std::invalid_argument.
class ObjectiveSpec {
 public:
  ObjectiveSpec(std::vector<PowerTerm> terms, double xstar, FunctionClass fclass);

  /// a|x - x*|^b with its natural class: NonDiffAtOpt(a) for b = 1,
  /// StronglyConvex with the closed-form alpha for 1 < b <= 2, Convex above.
  static ObjectiveSpec power(double a, double b, double xstar);

  const std::vector<PowerTerm>& terms() const { return terms_; }
  double xstar() const { return xstar_; }
  const FunctionClass& fclass() const { return fclass_; }
  /// max(|g(0)|, |g(1)|)
  double g_max() const { return g_max_; }

  friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;

 private:
  std::vector<PowerTerm> terms_;
  double xstar_;
  FunctionClass fclass_;
  double g_max_;
};

/// Throws std::out_of_range for x outside [0, 1].
double f_value(const ObjectiveSpec& obj, double x);
/// Subgradient; 0 at x = x*.
double g_value(const ObjectiveSpec& obj, double x);
/// f(x) - f(x*)
double excess_value(const ObjectiveSpec& obj, double x);

/// ab(b-1)(max{x*, 1-x*})^{b-2}; throws for b <= 1.
double strong_convexity_alpha(double a, double b, double xstar);

struct GaussianNoise {
  double sigma_sq;
  friend bool operator==(const GaussianNoise&, const GaussianNoise&) = default;
};

/// Symmetric noise with a uniform core on [-scale, scale] and Pareto tails,
/// density ∝ |ξ|^{-(tail_index+1)} beyond the scale, continuous at ±scale.
/// E|ξ|^b is finite iff b < tail_index; `moment_order` is the b certified
/// for the heavy-tailed test and must be below the tail index.
struct ParetoTailNoise {
  double tail_index;
  double scale;
  double moment_order;
  friend bool operator==(const ParetoTailNoise&, const ParetoTailNoise&) = default;
};

using NoiseModel = std::variant<GaussianNoise, ParetoTailNoise>;

void validate(const NoiseModel& noise);

/// Closed-form E|ξ|^b for the Pareto-tail model.
double pareto_abs_moment(const ParetoTailNoise& noise, double b);

/// u with sup_x E|g(x) + ξ|^b <= u, from E|g + ξ|^b <= 2^{b-1}(g_max^b + E|ξ|^b).
double moment_certificate(double g_max, const ParetoTailNoise& noise, double b);
double moment_certificate(const ObjectiveSpec& obj, const NoiseModel& noise, double b);

/// Draws G(x, ξ) = g(x) + ξ from a seeded generator. Single owner.
class GradientOracle {
 public:
  GradientOracle(ObjectiveSpec objective, NoiseModel noise, std::uint64_t seed);

  double sample(double x);
  double draw_noise();
  double uniform01();

  const ObjectiveSpec& objective() const { return objective_; }
  const NoiseModel& noise() const { return noise_; }

 private:
  ObjectiveSpec objective_;
  NoiseModel noise_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline double sample_gradient(GradientOracle& oracle, double x) { return oracle.sample(x); }

}  // namespace rwt
