#pragma once

#include "rwt/config.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rwt {

struct PresetOptions {
  std::uint64_t runs = 1000;
  std::uint64_t horizon = 100000;
  std::uint64_t seed = 1;
};

/// Named sub-experiments of a figure preset ("fig3", "fig4", "fig5").
/// fig4 has two parts (f1 and f2); the others have one.
std::vector<std::pair<std::string, ExperimentConfig>> make_preset(const std::string& name,
                                                                  const PresetOptions& options);

/// 3|x - 0.2|^1.6 - 1.5744|x - 0.2|^2, convex but not strongly convex.
ObjectiveSpec f1_objective();

}  // namespace rwt
