#pragma once

// Central finite-difference checks for tape gradients.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hierloc/autodiff.hpp"

namespace hierloc {
namespace training {
class Trainer;
}

namespace ad {

// |a - n| / max(|a|, |n|, floor). The floor keeps gradients that are zero up
// to rounding from dominating the maximum.
inline constexpr double kGradErrorFloor = 1e-4;
double relative_error(double analytic, double numeric, double floor = kGradErrorFloor);

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst;       // "<input>[r,c]"
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;

  nlohmann::json to_json() const;
};

using ScalarFn = std::function<Var(Tape&, const std::vector<Var>&)>;

// Builds f on a fresh tape with one leaf per input, then compares every
// input entry (or a seeded sample of at most max_per_input entries) with a
// central difference of width 2 * step.
GradCheckReport check_gradients(const ScalarFn& f, const std::vector<Matrix>& inputs, double step = 1e-5,
                                std::size_t max_per_input = 0, std::uint64_t seed = 0,
                                const std::vector<std::string>& names = {});

}  // namespace ad

namespace training {

// Same check for the full loss of a batch, perturbing the trainer's
// parameters in place (restored afterwards). Dropout is off.
ad::GradCheckReport check_pipeline_gradients(Trainer& trainer, const std::vector<int>& rows, double step = 1e-5,
                                             std::size_t max_per_tensor = 0, std::uint64_t seed = 0);

}  // namespace training
}  // namespace hierloc
