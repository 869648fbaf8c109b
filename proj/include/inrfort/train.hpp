#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "inrfort/dataset.hpp"
#include "inrfort/loss.hpp"
#include "inrfort/siren.hpp"

namespace inrfort {

// All subsystem randomness derives from one master seed by fixed offsets.
inline constexpr std::uint64_t kInitSeedOffset = 0;        // weight init
inline constexpr std::uint64_t kTrainStreamSeedOffset = 1; // per-step noise, shuffles
inline constexpr std::uint64_t kNoiseEvalSeedOffset = 2;   // perturbation eval base

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Vector m;
  Vector v;
  long step = 0;

  explicit AdamState(std::size_t d = 0) : m(d, 0.0), v(d, 0.0) {}
};

// Standard Adam update with bias correction, in place on theta.
// Throws std::invalid_argument when state/grad/theta lengths disagree.
void adam_step(AdamState& state, Vector& theta, const Vector& grad,
               const AdamConfig& config);

enum class BatchMode { full, minibatch };

struct TrainConfig {
  long epochs = 2000;
  AdamConfig adam;
  std::uint64_t seed = 42;
  LossSpec loss;
  long log_every = 100;
  BatchMode batch_mode = BatchMode::full;
  std::size_t batch_size = 0;  // minibatch only

  void validate() const;
};

struct TrainRecord {
  long step = 0;
  double data_term = 0.0;
  double penalty_term = 0.0;
  double total = 0.0;
};

struct TrainReport {
  std::vector<TrainRecord> records;
  double final_clean_psnr_db = 0.0;
  double wall_seconds = 0.0;  // never serialized; reruns stay byte-identical
};

// Initializes a SIREN from seed + kInitSeedOffset and runs `epochs` Adam
// steps (full batch: one step per epoch). Deterministic given the configs.
// A non-finite loss raises NumericError.
std::pair<MlpParams, TrainReport> train(const CoordinateDataset& dataset,
                                        const SirenConfig& model_config,
                                        const TrainConfig& train_config);

// 10 log10(peak^2 / MSE) in dB; +inf when MSE is 0. Shapes must match.
double psnr(const Matrix& pred, const Matrix& target, double peak);

// PSNR convention for reconstructions: both signals remapped from [-1,1] to
// [0,1] and compared with peak 1.
double reconstruction_psnr(const Matrix& pred, const Matrix& target);

struct NoisyPsnrStats {
  double mean_db = 0.0;
  double std_db = 0.0;  // population std; 0 for a single trial
  std::vector<double> per_trial_db;
};

// Monte-Carlo perturbed PSNR: trial t perturbs with noise.seed + t, runs the
// forward pass and scores against the dataset targets. params unchanged.
NoisyPsnrStats noisy_psnr_stats(const MlpParams& params,
                                const CoordinateDataset& dataset,
                                const NoiseSpec& noise, int trials);

}  // namespace inrfort
