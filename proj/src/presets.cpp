#include "rwt/presets.hpp"

#include <stdexcept>

namespace rwt {

ObjectiveSpec f1_objective() { return ObjectiveSpec({{3.0, 1.6}, {-1.5744, 2.0}}, 0.2, Convex{}); }

std::vector<std::pair<std::string, ExperimentConfig>> make_preset(const std::string& name,
                                                                  const PresetOptions& options) {
  ExperimentConfig base;
  base.horizon = options.horizon;
  base.num_runs = options.runs;
  base.base_seed = options.seed;
  base.noise = GaussianNoise{1.0};
  base.log_axes = true;

  if (name == "fig3") {
    base.title = "fig3";
    base.output = "fig3.csv";
    base.objective = ObjectiveSpec::power(4.0, 1.2, 0.2);
    const double alpha = strong_convexity_alpha(4.0, 1.2, 0.2);
    base.policies = {
        {"rwt", RwtPolicy{0.2}},
        {"sgd_0.1_over_t", SgdPolicy{{ConstantOverT{0.1}, std::nullopt}}},
        {"sgd_inv_alpha_t", SgdPolicy{{InverseAlphaT{alpha}, std::nullopt}}},
        {"sgd_inv_alpha_hat_t", SgdPolicy{{InverseAlphaT{alpha / 4.0}, std::nullopt}}},
        {"sgd_inv_sqrt_t", SgdPolicy{{InverseSqrtT{}, std::nullopt}}},
    };
    return {{"fig3", base}};
  }
  if (name == "fig4") {
    base.policies = {
        {"rwt", RwtPolicy{0.2}},
        {"sgd_inv_sqrt_t", SgdPolicy{{InverseSqrtT{}, std::nullopt}}},
    };
    ExperimentConfig f1 = base;
    f1.title = "fig4_f1";
    f1.output = "fig4_f1.csv";
    f1.objective = f1_objective();
    ExperimentConfig f2 = base;
    f2.title = "fig4_f2";
    f2.output = "fig4_f2.csv";
    f2.objective = ObjectiveSpec::power(3.0, 1.6, 0.2);
    return {{"f1", f1}, {"f2", f2}};
  }
  if (name == "fig5") {
    base.title = "fig5";
    base.output = "fig5.csv";
    base.objective = ObjectiveSpec::power(1.0, 1.4, 0.05);
    base.policies = {
        {"rwt_cache1", CachedRwtPolicy{0.2, 1}},
        {"rwt_cache3", CachedRwtPolicy{0.2, 3}},
        {"rwt_cache6", CachedRwtPolicy{0.2, 6}},
    };
    return {{"fig5", base}};
  }
  throw std::invalid_argument("unknown preset '" + name + "' (expected fig3, fig4 or fig5)");
}

}  // namespace rwt
