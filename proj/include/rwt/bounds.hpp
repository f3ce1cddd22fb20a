#pragma once

#include "rwt/problems.hpp"

#include <cstdint>
#include <optional>

namespace rwt {

/// Inputs shared by the regret bounds. `p` is the walk bias; when left empty
/// it defaults to the guaranteed (1 - p̌)³.
struct BoundInputs {
  double p_check = 0.2;
  std::optional<double> p;
  double sigma_sq = 1.0;
  // heavy-tailed noise: moment order and bound
  double b = 2.0;
  double u = 1.0;
  double g_max = 1.0;

  double bias() const;
  double b0() const;
  double c_b() const;
  double gamma_b() const;
};

struct Lemma1Bound {
  double delta_bound;
  double prob_bound;
};

/// (2^{-n(2p-1)/2}, exp(-n(2p-1)²/2)); throws unless 1/2 < p <= 1.
Lemma1Bound lemma1_tail(std::uint64_t n, double p);

/// E[τ] bound of the sub-Gaussian test; throws std::domain_error for g_abs = 0.
double lemma2_sample_bound(double g_abs, double sigma_sq, double p_check);

/// γ_b = Γ((2b-1)/(b-1)) ((u/3 + 1/8)/B₀)^{b/(b-1)} + 1
double gamma_b(double b, double u, double p_check);

/// E[τ] bound of the heavy-tailed test; throws std::domain_error for g_abs = 0.
double lemma3_sample_bound(double g_abs, double b, double u, double p_check);

/// Sub-Gaussian regret bound for the given function class. Requires T >= 3.
double theorem1_regret_bound(const FunctionClass& fclass, const BoundInputs& in, double horizon);

/// Heavy-tailed regret bound for the given function class. Requires T >= 3.
double theorem2_regret_bound(const FunctionClass& fclass, const BoundInputs& in, double horizon);

}  // namespace rwt
