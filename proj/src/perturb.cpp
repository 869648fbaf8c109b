#include "inrfort/perturb.hpp"

#include <cmath>
#include <stdexcept>

#include "inrfort/errors.hpp"

namespace inrfort {

std::string noise_family_name(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::gaussian_mult: return "gaussian_mult";
    case NoiseFamily::gaussian_add: return "gaussian_add";
    case NoiseFamily::binary_mask: return "binary_mask";
  }
  return "unknown";
}

NoiseFamily parse_noise_family(const std::string& name) {
  if (name == "gaussian_mult") return NoiseFamily::gaussian_mult;
  if (name == "gaussian_add") return NoiseFamily::gaussian_add;
  if (name == "binary_mask") return NoiseFamily::binary_mask;
  throw ConfigError("unknown noise family: " + name);
}

std::string noise_scope_name(NoiseScope s) {
  return s == NoiseScope::weights_only ? "weights_only" : "all_params";
}

NoiseScope parse_noise_scope(const std::string& name) {
  if (name == "all_params") return NoiseScope::all_params;
  if (name == "weights_only") return NoiseScope::weights_only;
  throw ConfigError("unknown noise scope: " + name);
}

void NoiseSpec::validate() const {
  if (!(strength >= 0.0)) {
    throw std::invalid_argument("NoiseSpec: strength must be >= 0");
  }
  if (family == NoiseFamily::binary_mask && strength > 1.0) {
    throw std::invalid_argument("NoiseSpec: binary_mask strength must be <= 1");
  }
}

namespace {

// Marks flatten positions holding weight entries (as opposed to biases).
std::vector<char> weight_position_mask(const MlpParams& params) {
  std::vector<char> mask;
  mask.reserve(params.param_count());
  for (const auto& layer : params.layers) {
    mask.insert(mask.end(), layer.weight.data.size(), 1);
    mask.insert(mask.end(), layer.bias.size(), 0);
  }
  return mask;
}

double mse_loss_value(const MlpParams& params, const CoordinateDataset& ds) {
  const Matrix out = forward(params, ds.coords);
  double loss = 0.0;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const double r = out.data[i] - ds.targets.data[i];
    loss += r * r;
  }
  // Same scaling as backward_mse; keeps zero-strength trials at delta_l == 0.
  const double inv_n = 1.0 / static_cast<double>(ds.size());
  return loss * inv_n;
}

}  // namespace

MlpParams perturb_with_rng(const MlpParams& params, NoiseFamily family,
                           double strength, NoiseScope scope, Rng& rng) {
  Vector theta = flatten(params);
  const std::size_t d = theta.size();

  Vector noise;
  if (family == NoiseFamily::binary_mask) {
    noise = rng.bernoulli_mask(d, strength);
  } else {
    noise = rng.normal(d);
  }

  const std::vector<char> is_weight =
      (scope == NoiseScope::weights_only) ? weight_position_mask(params)
                                          : std::vector<char>();
  for (std::size_t i = 0; i < d; ++i) {
    if (scope == NoiseScope::weights_only && !is_weight[i]) continue;
    switch (family) {
      case NoiseFamily::gaussian_mult:
        theta[i] *= 1.0 + strength * noise[i];
        break;
      case NoiseFamily::gaussian_add:
        theta[i] += strength * noise[i];
        break;
      case NoiseFamily::binary_mask:
        theta[i] *= noise[i];
        break;
    }
  }
  return unflatten(params.config, theta);
}

MlpParams perturb(const MlpParams& params, const NoiseSpec& spec) {
  spec.validate();
  if (spec.strength == 0.0 && spec.family != NoiseFamily::binary_mask) {
    return params;  // identity; binary_mask at p=0 is also identity but keep
  }                 // its stream consumption uniform with p>0
  Rng rng(spec.seed);
  return perturb_with_rng(params, spec.family, spec.strength, spec.scope, rng);
}

std::vector<TaylorTrial> taylor_gap(const MlpParams& params,
                                    const NoiseSpec& spec, int trials,
                                    const LossWithGradFn& eval) {
  spec.validate();
  if (trials < 1) {
    throw std::invalid_argument("taylor_gap: trials must be >= 1");
  }
  const auto [loss0, grad0] = eval(params);
  const double grad_norm = l2_norm(grad0);
  const Vector theta0 = flatten(params);

  std::vector<TaylorTrial> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    NoiseSpec trial_spec = spec;
    trial_spec.seed = spec.seed + static_cast<std::uint64_t>(t);
    const MlpParams perturbed = perturb(params, trial_spec);

    Vector delta_theta = flatten(perturbed);
    for (std::size_t i = 0; i < delta_theta.size(); ++i) {
      delta_theta[i] -= theta0[i];
    }
    const double loss1 = eval(perturbed).first;

    TaylorTrial trial;
    trial.delta_l = std::abs(loss1 - loss0);
    trial.dtheta_norm = l2_norm(delta_theta);
    trial.bound = grad_norm * trial.dtheta_norm;
    out.push_back(trial);
  }
  return out;
}

std::vector<TaylorTrial> taylor_gap(const MlpParams& params,
                                    const NoiseSpec& spec,
                                    const CoordinateDataset& dataset,
                                    int trials) {
  spec.validate();
  if (trials < 1) {
    throw std::invalid_argument("taylor_gap: trials must be >= 1");
  }
  ForwardCache cache;
  forward(params, dataset.coords, &cache);
  const MseBackward bwd =
      backward_mse(params, cache, dataset.coords, dataset.targets);
  // Evaluate loss0 through the same path as the perturbed losses below.
  const double loss0 = mse_loss_value(params, dataset);
  const double grad_norm = l2_norm(flatten(bwd.grad));
  const Vector theta0 = flatten(params);

  std::vector<TaylorTrial> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    NoiseSpec trial_spec = spec;
    trial_spec.seed = spec.seed + static_cast<std::uint64_t>(t);
    const MlpParams perturbed = perturb(params, trial_spec);

    Vector delta_theta = flatten(perturbed);
    for (std::size_t i = 0; i < delta_theta.size(); ++i) {
      delta_theta[i] -= theta0[i];
    }

    TaylorTrial trial;
    trial.delta_l = std::abs(mse_loss_value(perturbed, dataset) - loss0);
    trial.dtheta_norm = l2_norm(delta_theta);
    trial.bound = grad_norm * trial.dtheta_norm;
    out.push_back(trial);
  }
  return out;
}

}  // namespace inrfort
