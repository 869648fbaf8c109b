#include "inrfort/loss.hpp"

#include <cmath>
#include <stdexcept>

#include "inrfort/errors.hpp"
#include "inrfort/finite_diff.hpp"

namespace inrfort {

std::string loss_family_name(LossFamily f) {
  switch (f) {
    case LossFamily::mse: return "mse";
    case LossFamily::robust: return "robust";
    case LossFamily::l1: return "l1";
    case LossFamily::lipschitz: return "lipschitz";
    case LossFamily::noise_aware: return "noise_aware";
  }
  return "unknown";
}

LossFamily parse_loss_family(const std::string& name) {
  if (name == "mse") return LossFamily::mse;
  if (name == "robust") return LossFamily::robust;
  if (name == "l1") return LossFamily::l1;
  if (name == "lipschitz") return LossFamily::lipschitz;
  if (name == "noise_aware") return LossFamily::noise_aware;
  throw ConfigError("unknown loss family: " + name);
}

void LossSpec::validate() const {
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("LossSpec: lambda must be >= 0");
  }
  if (family == LossFamily::lipschitz && power_iters < 1) {
    throw std::invalid_argument("LossSpec: power_iters must be >= 1");
  }
  if (family == LossFamily::noise_aware) {
    noise.validate();
  }
}

namespace {

void check_dataset(const MlpParams& params, const CoordinateDataset& ds) {
  if (ds.size() == 0) {
    throw std::invalid_argument("loss: empty dataset");
  }
  if (ds.coords.cols != params.config.in_dim ||
      ds.targets.cols != params.config.out_dim) {
    throw std::invalid_argument("loss: dataset dims do not match model config");
  }
}

}  // namespace

LossEval eval_mse(const MlpParams& params, const CoordinateDataset& dataset) {
  check_dataset(params, dataset);
  ForwardCache cache;
  forward(params, dataset.coords, &cache);
  MseBackward bwd = backward_mse(params, cache, dataset.coords, dataset.targets);
  LossEval eval;
  eval.data_term = bwd.loss;
  eval.penalty_term = 0.0;
  eval.total = bwd.loss;
  eval.grad = flatten(bwd.grad);
  return eval;
}

double eval_perturbed_mse(const MlpParams& params, const NoiseSpec& noise,
                          const CoordinateDataset& dataset) {
  check_dataset(params, dataset);
  noise.validate();
  const MlpParams perturbed = perturb(params, noise);
  const Matrix out = forward(perturbed, dataset.coords);
  double loss = 0.0;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const double r = out.data[i] - dataset.targets.data[i];
    loss += r * r;
  }
  // Scale exactly as backward_mse does so a zero-strength perturbation
  // reproduces eval_mse bit for bit.
  const double inv_n = 1.0 / static_cast<double>(dataset.size());
  return loss * inv_n;
}

LossEval eval_robust(const MlpParams& params, const CoordinateDataset& dataset,
                     const LossSpec& spec) {
  LossEval eval = eval_mse(params, dataset);
  const double grad_norm = l2_norm(eval.grad);
  eval.penalty_term = grad_norm;
  eval.total = eval.data_term + spec.lambda * grad_norm;

  if (spec.lambda == 0.0) {
    return eval;  // grad stays bit-identical to the mse gradient
  }
  if (spec.exact_penalty_grad) {
    // True gradient of ||grad L(theta)|| by central differences; O(d)
    // backward passes, comparison-study scale only.
    const SirenConfig cfg = params.config;
    const Vector theta = flatten(params);
    const auto penalty_at = [&](const Vector& v) {
      const MlpParams p = unflatten(cfg, v);
      return l2_norm(eval_mse(p, dataset).grad);
    };
    const Vector pgrad = finite_difference_gradient(
        penalty_at, theta, spec.exact_penalty_grad_step);
    axpy(spec.lambda, pgrad, eval.grad);
    return eval;
  }
  if (grad_norm >= kGradNormEps) {
    const double scale = spec.lambda / grad_norm;
    for (auto& g : eval.grad) g += scale * g;
  }
  return eval;
}

LossEval eval_robust(const MlpParams& params, const CoordinateDataset& dataset,
                     double lambda) {
  LossSpec spec;
  spec.family = LossFamily::robust;
  spec.lambda = lambda;
  spec.validate();
  return eval_robust(params, dataset, spec);
}

LossEval eval_l1(const MlpParams& params, const CoordinateDataset& dataset,
                 double lambda) {
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("eval_l1: lambda must be >= 0");
  }
  LossEval eval = eval_mse(params, dataset);
  const Vector theta = flatten(params);
  eval.penalty_term = l1_norm(theta);
  eval.total = eval.data_term + lambda * eval.penalty_term;
  if (lambda > 0.0) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double s = (theta[i] > 0.0) ? 1.0 : (theta[i] < 0.0 ? -1.0 : 0.0);
      eval.grad[i] += lambda * s;
    }
  }
  return eval;
}

double spectral_norm(const Matrix& w, int iters, std::uint64_t seed,
                     Vector* u_out, Vector* v_out) {
  if (iters < 1) {
    throw std::invalid_argument("spectral_norm: iters must be >= 1");
  }
  Rng rng(seed);
  Vector v = rng.normal(w.cols);
  {
    const double n = l2_norm(v);
    if (n > 0.0) {
      for (auto& x : v) x /= n;
    } else {
      v.assign(w.cols, 0.0);
      v[0] = 1.0;
    }
  }

  Vector u(w.rows, 0.0);
  double sigma = 0.0;
  for (int it = 0; it < iters; ++it) {
    // u = W v, normalized
    for (std::size_t r = 0; r < w.rows; ++r) {
      const double* row = w.row(r);
      double s = 0.0;
      for (std::size_t c = 0; c < w.cols; ++c) s += row[c] * v[c];
      u[r] = s;
    }
    sigma = l2_norm(u);
    if (sigma < 1e-300) {
      // numerically zero matrix (or v in its null space)
      if (u_out) u_out->assign(w.rows, 0.0);
      if (v_out) v_out->assign(w.cols, 0.0);
      return 0.0;
    }
    for (auto& x : u) x /= sigma;

    // v = W^T u, normalized
    Vector vt(w.cols, 0.0);
    for (std::size_t r = 0; r < w.rows; ++r) {
      const double* row = w.row(r);
      const double ur = u[r];
      for (std::size_t c = 0; c < w.cols; ++c) vt[c] += row[c] * ur;
    }
    const double vn = l2_norm(vt);
    if (vn < 1e-300) break;
    for (auto& x : vt) x /= vn;
    v = std::move(vt);
  }
  // Rayleigh estimate u^T W v with the final unit vectors.
  sigma = 0.0;
  for (std::size_t r = 0; r < w.rows; ++r) {
    const double* row = w.row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < w.cols; ++c) s += row[c] * v[c];
    sigma += u[r] * s;
  }
  sigma = std::abs(sigma);
  if (u_out) *u_out = u;
  if (v_out) *v_out = v;
  return sigma;
}

LossEval eval_lipschitz(const MlpParams& params,
                        const CoordinateDataset& dataset, double lambda,
                        int power_iters, std::uint64_t power_seed) {
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("eval_lipschitz: lambda must be >= 0");
  }
  LossEval eval = eval_mse(params, dataset);

  double penalty = 0.0;
  MlpParams pgrad;  // penalty gradient in params layout, biases stay zero
  pgrad.config = params.config;
  pgrad.layers.resize(params.layers.size());
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const Matrix& w = params.layers[l].weight;
    Vector u, v;
    const double sigma =
        spectral_norm(w, power_iters, power_seed + l, &u, &v);
    penalty += sigma * sigma;

    Matrix g(w.rows, w.cols, 0.0);
    if (sigma > 0.0 && lambda > 0.0) {
      // d(sigma^2)/dW = 2 sigma * u v^T
      for (std::size_t r = 0; r < w.rows; ++r) {
        double* row = g.row(r);
        const double ur2s = 2.0 * sigma * u[r];
        for (std::size_t c = 0; c < w.cols; ++c) row[c] = ur2s * v[c];
      }
    }
    pgrad.layers[l].weight = std::move(g);
    pgrad.layers[l].bias.assign(params.layers[l].bias.size(), 0.0);
  }
  eval.penalty_term = penalty;
  eval.total = eval.data_term + lambda * penalty;
  if (lambda > 0.0) {
    axpy(lambda, flatten(pgrad), eval.grad);
  }
  return eval;
}

LossEval noise_aware_grad(const MlpParams& params, const NoiseSpec& noise,
                          const CoordinateDataset& dataset, Rng& rng) {
  check_dataset(params, dataset);
  noise.validate();
  const MlpParams perturbed =
      perturb_with_rng(params, noise.family, noise.strength, noise.scope, rng);
  return eval_mse(perturbed, dataset);
}

LossEval eval_loss(const MlpParams& params, const CoordinateDataset& dataset,
                   const LossSpec& spec, Rng* rng) {
  spec.validate();
  switch (spec.family) {
    case LossFamily::mse:
      return eval_mse(params, dataset);
    case LossFamily::robust:
      return eval_robust(params, dataset, spec);
    case LossFamily::l1:
      return eval_l1(params, dataset, spec.lambda);
    case LossFamily::lipschitz:
      return eval_lipschitz(params, dataset, spec.lambda, spec.power_iters,
                            spec.power_seed);
    case LossFamily::noise_aware: {
      if (!rng) {
        throw std::invalid_argument("eval_loss: noise_aware needs an rng");
      }
      return noise_aware_grad(params, spec.noise, dataset, *rng);
    }
  }
  throw std::invalid_argument("eval_loss: unknown family");
}

}  // namespace inrfort
