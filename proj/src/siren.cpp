#include "inrfort/siren.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "inrfort/rng.hpp"

namespace inrfort {

void SirenConfig::validate() const {
  if (in_dim < 1 || out_dim < 1 || hidden_width < 1 || hidden_layers < 1) {
    throw std::invalid_argument("SirenConfig: all dimensions must be >= 1");
  }
  if (!(omega_first > 0.0) || !(omega_hidden > 0.0)) {
    throw std::invalid_argument("SirenConfig: omega values must be > 0");
  }
}

std::size_t SirenConfig::param_count() const {
  std::size_t d = hidden_width * in_dim + hidden_width;
  for (std::size_t l = 1; l < hidden_layers; ++l) {
    d += hidden_width * hidden_width + hidden_width;
  }
  d += out_dim * hidden_width + out_dim;
  return d;
}

namespace {

// fan_out x fan_in shape of layer l; layer hidden_layers is the output layer.
void layer_shape(const SirenConfig& c, std::size_t l, std::size_t& fan_out,
                 std::size_t& fan_in) {
  fan_in = (l == 0) ? c.in_dim : c.hidden_width;
  fan_out = (l == c.hidden_layers) ? c.out_dim : c.hidden_width;
}

void check_cache_shapes(const MlpParams& params, const ForwardCache& cache,
                        const Matrix& coords) {
  const std::size_t n_layers = params.config.hidden_layers + 1;
  if (params.layers.size() != n_layers) {
    throw std::invalid_argument("backward_mse: params layer count does not match config");
  }
  if (cache.pre.size() != n_layers ||
      cache.post.size() != params.config.hidden_layers) {
    throw std::invalid_argument("backward_mse: cache depth does not match params");
  }
  for (std::size_t l = 0; l < n_layers; ++l) {
    if (cache.pre[l].rows != coords.rows ||
        cache.pre[l].cols != params.layers[l].bias.size()) {
      throw std::invalid_argument("backward_mse: cache shape does not match params/coords");
    }
  }
}

}  // namespace

MlpParams init_siren(const SirenConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  MlpParams params;
  params.config = config;
  params.layers.resize(config.hidden_layers + 1);
  for (std::size_t l = 0; l <= config.hidden_layers; ++l) {
    std::size_t fan_out = 0, fan_in = 0;
    layer_shape(config, l, fan_out, fan_in);
    const double bound =
        (l == 0) ? 1.0 / static_cast<double>(fan_in)
                 : std::sqrt(6.0 / static_cast<double>(fan_in)) / config.omega_hidden;
    Matrix w(fan_out, fan_in);
    for (auto& x : w.data) x = rng.next_uniform(-bound, bound);
    params.layers[l].weight = std::move(w);
    params.layers[l].bias.assign(fan_out, 0.0);
  }
  return params;
}

Matrix forward(const MlpParams& params, const Matrix& coords,
               ForwardCache* cache) {
  const SirenConfig& cfg = params.config;
  if (coords.cols != cfg.in_dim) {
    std::ostringstream msg;
    msg << "forward: coords have " << coords.cols << " columns, expected "
        << cfg.in_dim;
    throw std::invalid_argument(msg.str());
  }
  if (cache) {
    cache->pre.clear();
    cache->post.clear();
  }

  Matrix h = coords;
  for (std::size_t l = 0; l <= cfg.hidden_layers; ++l) {
    const Matrix& w = params.layers[l].weight;
    const Vector& b = params.layers[l].bias;

    // a = h * w^T + b
    Matrix a = matmul(h, transpose(w));
    for (std::size_t r = 0; r < a.rows; ++r) {
      double* row = a.row(r);
      for (std::size_t c = 0; c < a.cols; ++c) row[c] += b[c];
    }
    if (cache) cache->pre.push_back(a);

    if (l == cfg.hidden_layers) {
      h = std::move(a);  // final layer is linear
    } else {
      const double omega = (l == 0) ? cfg.omega_first : cfg.omega_hidden;
      Matrix act(a.rows, a.cols);
      for (std::size_t i = 0; i < a.data.size(); ++i) {
        act.data[i] = std::sin(omega * a.data[i]);
      }
      if (cache) cache->post.push_back(act);
      h = std::move(act);
    }
  }
  return h;
}

MseBackward backward_mse(const MlpParams& params, const ForwardCache& cache,
                         const Matrix& coords, const Matrix& targets) {
  const SirenConfig& cfg = params.config;
  check_cache_shapes(params, cache, coords);
  if (targets.rows != coords.rows || targets.cols != cfg.out_dim) {
    throw std::invalid_argument("backward_mse: target shape does not match");
  }
  const std::size_t n_samples = coords.rows;
  const std::size_t n_layers = cfg.hidden_layers + 1;
  const double inv_n = 1.0 / static_cast<double>(n_samples);

  MseBackward result;
  result.grad.config = cfg;
  result.grad.layers.resize(n_layers);

  // Residual and loss; outputs are the final pre-activations (linear layer).
  const Matrix& outputs = cache.pre[n_layers - 1];
  Matrix delta(n_samples, cfg.out_dim);
  double loss = 0.0;
  for (std::size_t i = 0; i < delta.data.size(); ++i) {
    const double r = outputs.data[i] - targets.data[i];
    loss += r * r;
    delta.data[i] = 2.0 * inv_n * r;  // dL/d(pre) for the linear output layer
  }
  result.loss = loss * inv_n;

  // Walk layers backwards; delta is dL/d(pre_l) on entry to each iteration.
  for (std::size_t li = n_layers; li-- > 0;) {
    const Matrix& input = (li == 0) ? coords : cache.post[li - 1];

    // dW = delta^T * input, db = column sums of delta
    Matrix dw = matmul(transpose(delta), input);
    Vector db(delta.cols, 0.0);
    for (std::size_t r = 0; r < delta.rows; ++r) {
      const double* row = delta.row(r);
      for (std::size_t c = 0; c < delta.cols; ++c) db[c] += row[c];
    }
    result.grad.layers[li].weight = std::move(dw);
    result.grad.layers[li].bias = std::move(db);

    if (li == 0) break;

    // Propagate to the previous layer through its sine activation:
    // dL/d(pre_{l-1}) = (delta * W_l) .* omega * cos(omega * pre_{l-1})
    Matrix dh = matmul(delta, params.layers[li].weight);
    const double omega = (li - 1 == 0) ? cfg.omega_first : cfg.omega_hidden;
    const Matrix& pre_prev = cache.pre[li - 1];
    for (std::size_t i = 0; i < dh.data.size(); ++i) {
      dh.data[i] *= omega * std::cos(omega * pre_prev.data[i]);
    }
    delta = std::move(dh);
  }
  return result;
}

Vector flatten(const MlpParams& params) {
  Vector v;
  v.reserve(params.param_count());
  for (const auto& layer : params.layers) {
    v.insert(v.end(), layer.weight.data.begin(), layer.weight.data.end());
    v.insert(v.end(), layer.bias.begin(), layer.bias.end());
  }
  return v;
}

MlpParams unflatten(const SirenConfig& config, const Vector& v) {
  config.validate();
  if (v.size() != config.param_count()) {
    std::ostringstream msg;
    msg << "unflatten: vector length " << v.size() << " does not match parameter count "
        << config.param_count();
    throw std::invalid_argument(msg.str());
  }
  MlpParams params;
  params.config = config;
  params.layers.resize(config.hidden_layers + 1);
  std::size_t pos = 0;
  for (std::size_t l = 0; l <= config.hidden_layers; ++l) {
    std::size_t fan_out = 0, fan_in = 0;
    layer_shape(config, l, fan_out, fan_in);
    Matrix w(fan_out, fan_in);
    std::copy(v.begin() + pos, v.begin() + pos + fan_out * fan_in, w.data.begin());
    pos += fan_out * fan_in;
    params.layers[l].weight = std::move(w);
    params.layers[l].bias.assign(v.begin() + pos, v.begin() + pos + fan_out);
    pos += fan_out;
  }
  return params;
}

}  // namespace inrfort
