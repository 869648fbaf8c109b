#include "inrfort/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "inrfort/errors.hpp"

namespace inrfort {

void adam_step(AdamState& state, Vector& theta, const Vector& grad,
               const AdamConfig& config) {
  const std::size_t d = theta.size();
  if (state.m.size() != d || state.v.size() != d || grad.size() != d) {
    throw std::invalid_argument("adam_step: state/grad dims do not match theta");
  }
  state.step += 1;
  const double b1 = config.beta1;
  const double b2 = config.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < d; ++i) {
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * grad[i];
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * grad[i] * grad[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    theta[i] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.eps);
  }
}

void TrainConfig::validate() const {
  if (epochs < 1) {
    throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  }
  if (!(adam.learning_rate > 0.0)) {
    throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
  }
  if (!(adam.beta1 > 0.0 && adam.beta1 < 1.0 && adam.beta2 > 0.0 &&
        adam.beta2 < 1.0)) {
    throw std::invalid_argument("TrainConfig: betas must be in (0, 1)");
  }
  if (log_every < 1) {
    throw std::invalid_argument("TrainConfig: log_every must be >= 1");
  }
  if (batch_mode == BatchMode::minibatch && batch_size < 1) {
    throw std::invalid_argument("TrainConfig: minibatch size must be >= 1");
  }
  loss.validate();
}

namespace {

CoordinateDataset slice_dataset(const CoordinateDataset& ds,
                                const std::vector<std::size_t>& idx,
                                std::size_t begin, std::size_t end) {
  CoordinateDataset out;
  out.modality = ds.modality;
  out.shape = {end - begin};
  out.coords = Matrix(end - begin, ds.coords.cols);
  out.targets = Matrix(end - begin, ds.targets.cols);
  for (std::size_t r = begin; r < end; ++r) {
    const std::size_t src = idx[r];
    std::copy(ds.coords.row(src), ds.coords.row(src) + ds.coords.cols,
              out.coords.row(r - begin));
    std::copy(ds.targets.row(src), ds.targets.row(src) + ds.targets.cols,
              out.targets.row(r - begin));
  }
  return out;
}

}  // namespace

std::pair<MlpParams, TrainReport> train(const CoordinateDataset& dataset,
                                        const SirenConfig& model_config,
                                        const TrainConfig& train_config) {
  model_config.validate();
  train_config.validate();
  if (dataset.size() == 0) {
    throw std::invalid_argument("train: empty dataset");
  }
  if (dataset.coords.cols != model_config.in_dim ||
      dataset.targets.cols != model_config.out_dim) {
    throw std::invalid_argument("train: dataset dims do not match model config");
  }

  const auto t0 = std::chrono::steady_clock::now();
  MlpParams params =
      init_siren(model_config, train_config.seed + kInitSeedOffset);
  Vector theta = flatten(params);
  AdamState adam(theta.size());
  Rng stream(train_config.seed + kTrainStreamSeedOffset);

  TrainReport report;
  long step = 0;
  const std::size_t n = dataset.size();

  for (long epoch = 0; epoch < train_config.epochs; ++epoch) {
    if (train_config.batch_mode == BatchMode::full) {
      const LossEval eval =
          eval_loss(params, dataset, train_config.loss, &stream);
      if (!std::isfinite(eval.total)) {
        throw NumericError("train: non-finite loss at step " +
                           std::to_string(step + 1));
      }
      adam_step(adam, theta, eval.grad, train_config.adam);
      params = unflatten(model_config, theta);
      ++step;
      if (step == 1 || step % train_config.log_every == 0 ||
          epoch + 1 == train_config.epochs) {
        report.records.push_back(
            {step, eval.data_term, eval.penalty_term, eval.total});
      }
    } else {
      // deterministic Fisher-Yates shuffle from the training stream
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j =
            static_cast<std::size_t>(stream.next_u64() % (i + 1));
        std::swap(idx[i], idx[j]);
      }
      for (std::size_t begin = 0; begin < n;
           begin += train_config.batch_size) {
        const std::size_t end = std::min(n, begin + train_config.batch_size);
        const CoordinateDataset batch = slice_dataset(dataset, idx, begin, end);
        const LossEval eval =
            eval_loss(params, batch, train_config.loss, &stream);
        if (!std::isfinite(eval.total)) {
          throw NumericError("train: non-finite loss at step " +
                             std::to_string(step + 1));
        }
        adam_step(adam, theta, eval.grad, train_config.adam);
        params = unflatten(model_config, theta);
        ++step;
        if (step == 1 || step % train_config.log_every == 0 ||
            (epoch + 1 == train_config.epochs && end == n)) {
          report.records.push_back(
              {step, eval.data_term, eval.penalty_term, eval.total});
        }
      }
    }
  }

  const Matrix recon = forward(params, dataset.coords);
  report.final_clean_psnr_db = reconstruction_psnr(recon, dataset.targets);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {std::move(params), std::move(report)};
}

double psnr(const Matrix& pred, const Matrix& target, double peak) {
  if (!pred.same_shape(target)) {
    throw std::invalid_argument("psnr: shape mismatch");
  }
  if (!(peak > 0.0)) {
    throw std::invalid_argument("psnr: peak must be > 0");
  }
  double mse = 0.0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    const double r = pred.data[i] - target.data[i];
    mse += r * r;
  }
  mse /= static_cast<double>(pred.data.size());
  if (mse == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(peak * peak / mse);
}

double reconstruction_psnr(const Matrix& pred, const Matrix& target) {
  if (!pred.same_shape(target)) {
    throw std::invalid_argument("reconstruction_psnr: shape mismatch");
  }
  Matrix p01(pred.rows, pred.cols);
  Matrix t01(pred.rows, pred.cols);
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    p01.data[i] = (pred.data[i] + 1.0) / 2.0;
    t01.data[i] = (target.data[i] + 1.0) / 2.0;
  }
  return psnr(p01, t01, 1.0);
}

NoisyPsnrStats noisy_psnr_stats(const MlpParams& params,
                                const CoordinateDataset& dataset,
                                const NoiseSpec& noise, int trials) {
  if (trials < 1) {
    throw std::invalid_argument("noisy_psnr_stats: trials must be >= 1");
  }
  noise.validate();
  NoisyPsnrStats stats;
  stats.per_trial_db.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    NoiseSpec trial_spec = noise;
    trial_spec.seed = noise.seed + static_cast<std::uint64_t>(t);
    const MlpParams perturbed = perturb(params, trial_spec);
    const Matrix recon = forward(perturbed, dataset.coords);
    stats.per_trial_db.push_back(reconstruction_psnr(recon, dataset.targets));
  }
  const bool all_equal =
      std::all_of(stats.per_trial_db.begin(), stats.per_trial_db.end(),
                  [&](double x) { return x == stats.per_trial_db.front(); });
  if (all_equal) {
    // also covers the +inf sentinel without producing inf - inf
    stats.mean_db = stats.per_trial_db.front();
    stats.std_db = 0.0;
    return stats;
  }
  double mean = 0.0;
  for (double x : stats.per_trial_db) mean += x;
  mean /= static_cast<double>(trials);
  double var = 0.0;
  for (double x : stats.per_trial_db) var += (x - mean) * (x - mean);
  var /= static_cast<double>(trials);
  stats.mean_db = mean;
  stats.std_db = std::sqrt(var);
  return stats;
}

}  // namespace inrfort
