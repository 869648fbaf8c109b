#pragma once

#include <cstdint>
#include <vector>

#include "inrfort/linalg.hpp"

namespace inrfort {

struct SirenConfig {
  std::size_t in_dim = 2;
  std::size_t out_dim = 1;
  std::size_t hidden_width = 256;
  std::size_t hidden_layers = 3;
  double omega_first = 30.0;
  double omega_hidden = 30.0;

  // Throws std::invalid_argument when a count is zero or an omega is not > 0.
  void validate() const;

  // Total number of parameters (weights + biases) across all layers.
  std::size_t param_count() const;
};

// Layered parameter container. Layer 0 maps in_dim -> hidden_width, interior
// layers hidden_width -> hidden_width, the final layer hidden_width -> out_dim
// (linear, no sine). Weight shape is [fan_out x fan_in], bias length fan_out.
struct MlpParams {
  struct Layer {
    Matrix weight;
    Vector bias;
  };

  SirenConfig config;
  std::vector<Layer> layers;

  std::size_t param_count() const { return config.param_count(); }
};

// Per-layer linear outputs a_l = W_l h + b_l for every layer, plus the
// post-sine activations feeding the next layer. Needed by backward_mse.
struct ForwardCache {
  std::vector<Matrix> pre;   // hidden_layers + 1 entries
  std::vector<Matrix> post;  // hidden_layers entries (sine outputs)

  std::size_t depth() const { return pre.size(); }
};

// Gradient of the MSE data term, laid out exactly like MlpParams, plus the
// loss value it was computed at.
struct MseBackward {
  MlpParams grad;
  double loss = 0.0;
};

// SIREN init: first layer uniform in [-1/in_dim, 1/in_dim], deeper layers
// uniform in [-sqrt(6/fan_in)/omega_hidden, +sqrt(6/fan_in)/omega_hidden],
// all biases zero. Deterministic in the seed.
MlpParams init_siren(const SirenConfig& config, std::uint64_t seed);

// Batched forward pass. coords is [batch x in_dim]; the result is
// [batch x out_dim]. Layer rule: h0 = sin(omega_first * (W0 x + b0)),
// interior h = sin(omega_hidden * (W h + b)), final layer linear.
// When cache is non-null the pre/post activations are retained for backward.
Matrix forward(const MlpParams& params, const Matrix& coords,
               ForwardCache* cache = nullptr);

// Analytic gradient of L = (1/N) sum_i ||f(x_i) - y_i||^2 with respect to
// every weight and bias. cache must come from forward() on the same params
// and coords; a shape mismatch throws std::invalid_argument.
MseBackward backward_mse(const MlpParams& params, const ForwardCache& cache,
                         const Matrix& coords, const Matrix& targets);

// Flatten order: layer-major, weights before bias, row-major within a weight.
Vector flatten(const MlpParams& params);
MlpParams unflatten(const SirenConfig& config, const Vector& v);

}  // namespace inrfort
