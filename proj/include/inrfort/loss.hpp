#pragma once

#include <cstdint>
#include <string>

#include "inrfort/dataset.hpp"
#include "inrfort/perturb.hpp"
#include "inrfort/siren.hpp"

namespace inrfort {

enum class LossFamily { mse, robust, l1, lipschitz, noise_aware };

std::string loss_family_name(LossFamily f);
LossFamily parse_loss_family(const std::string& name);

// Below this gradient norm the robust penalty gradient is defined as zero
// (a valid subgradient at the ||grad|| = 0 singularity).
inline constexpr double kGradNormEps = 1e-12;

struct LossSpec {
  LossFamily family = LossFamily::mse;
  double lambda = 0.0;

  // lipschitz: power-iteration count and the seed for its start vectors
  int power_iters = 50;
  std::uint64_t power_seed = 0x5eedULL;

  // noise_aware: the training-noise distribution (seed field unused; the
  // training loop owns the stream)
  NoiseSpec noise;

  // robust: replace the closed-form penalty gradient with central finite
  // differences of ||grad L(theta)||. Exact but O(d) backward passes; meant
  // for small comparison studies, not training runs.
  bool exact_penalty_grad = false;
  double exact_penalty_grad_step = 1e-6;

  void validate() const;
};

struct LossEval {
  double total = 0.0;
  double data_term = 0.0;     // mean squared reconstruction error
  double penalty_term = 0.0;  // family-specific regularizer, 0 for mse
  Vector grad;                // flattened, length d
};

// data_term = (1/N) sum_i ||f(x_i) - y_i||^2, no penalty.
LossEval eval_mse(const MlpParams& params, const CoordinateDataset& dataset);

// L(theta + dtheta) for one noise draw; params are unchanged.
double eval_perturbed_mse(const MlpParams& params, const NoiseSpec& noise,
                          const CoordinateDataset& dataset);

// total = L + lambda * ||grad L||_2; grad follows the first-order rule
// grad L + lambda * grad L / ||grad L|| (zero penalty contribution below
// kGradNormEps). spec controls the optional exact_penalty_grad mode.
LossEval eval_robust(const MlpParams& params, const CoordinateDataset& dataset,
                     double lambda);
LossEval eval_robust(const MlpParams& params, const CoordinateDataset& dataset,
                     const LossSpec& spec);

// total = L + lambda * ||theta||_1; grad adds lambda * sign(theta), sign(0)=0.
LossEval eval_l1(const MlpParams& params, const CoordinateDataset& dataset,
                 double lambda);

// total = L + lambda * sum_l sigma_max(W_l)^2 over weight matrices, with
// sigma_max from seeded power iteration; the penalty gradient per layer is
// 2 sigma_max * u v^T (biases unaffected).
LossEval eval_lipschitz(const MlpParams& params,
                        const CoordinateDataset& dataset, double lambda,
                        int power_iters, std::uint64_t power_seed);

// Loss and gradient at theta + dtheta for a fresh draw from rng, reported as
// the training gradient for theta (straight-through). params unchanged.
LossEval noise_aware_grad(const MlpParams& params, const NoiseSpec& noise,
                          const CoordinateDataset& dataset, Rng& rng);

// Family dispatch used by the training loop. rng is only consumed by the
// noise_aware family.
LossEval eval_loss(const MlpParams& params, const CoordinateDataset& dataset,
                   const LossSpec& spec, Rng* rng = nullptr);

// Largest singular value of w estimated by power iteration from a seeded
// start vector; outputs the attaining unit vectors when u/v are non-null.
double spectral_norm(const Matrix& w, int iters, std::uint64_t seed,
                     Vector* u_out = nullptr, Vector* v_out = nullptr);

}  // namespace inrfort
