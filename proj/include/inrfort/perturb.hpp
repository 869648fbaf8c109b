#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "inrfort/dataset.hpp"
#include "inrfort/rng.hpp"
#include "inrfort/siren.hpp"

namespace inrfort {

enum class NoiseFamily { gaussian_mult, gaussian_add, binary_mask };
enum class NoiseScope { all_params, weights_only };

std::string noise_family_name(NoiseFamily f);
NoiseFamily parse_noise_family(const std::string& name);

std::string noise_scope_name(NoiseScope s);
NoiseScope parse_noise_scope(const std::string& name);

// Weight-perturbation description: family, strength (sigma for the gaussian
// families, mask probability p for binary_mask), scope and seed. Monte-Carlo
// trial t perturbs with seed + t.
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::gaussian_mult;
  double strength = 0.0;
  NoiseScope scope = NoiseScope::all_params;
  std::uint64_t seed = 0;

  void validate() const;
};

// Returns a perturbed copy; the input is never mutated.
//   gaussian_mult: theta_i * (1 + strength * z_i)
//   gaussian_add:  theta_i + strength * z_i
//   binary_mask:   theta_i * m_i with m_i ~ Bernoulli(1 - strength)
// The noise stream always covers all d positions (scope only gates which
// entries change), so mask positions are independent of scope and of the
// parameter values.
MlpParams perturb(const MlpParams& params, const NoiseSpec& spec);

// Same, drawing from a caller-owned stream (noise-aware training uses this
// to take one fresh draw per optimization step).
MlpParams perturb_with_rng(const MlpParams& params, NoiseFamily family,
                           double strength, NoiseScope scope, Rng& rng);

// One Monte-Carlo probe of the first-order bound: delta_l = |L(theta+dtheta)
// - L(theta)| against bound = ||grad L(theta)|| * ||dtheta||.
struct TaylorTrial {
  double delta_l = 0.0;
  double bound = 0.0;
  double dtheta_norm = 0.0;
};

// Evaluates the MSE loss on the dataset. Trial t uses seed spec.seed + t.
std::vector<TaylorTrial> taylor_gap(const MlpParams& params,
                                    const NoiseSpec& spec,
                                    const CoordinateDataset& dataset,
                                    int trials);

// Generic variant for test hooks (e.g. a quadratic toy loss): eval returns
// (loss value, flattened gradient) for the given parameters.
using LossWithGradFn =
    std::function<std::pair<double, Vector>(const MlpParams&)>;
std::vector<TaylorTrial> taylor_gap(const MlpParams& params,
                                    const NoiseSpec& spec, int trials,
                                    const LossWithGradFn& eval);

}  // namespace inrfort
