#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inrfort/train.hpp"

namespace inrfort {

struct SweepLossPoint {
  LossFamily family = LossFamily::mse;
  double lambda = 0.0;
};

struct SweepNoisePoint {
  NoiseFamily family = NoiseFamily::gaussian_mult;
  double strength = 0.0;
};

// Cross product of loss points x noise points x trials, one trained model
// per loss point. All cells share the master seed, so every model starts
// from the same init and noise trial t always uses seed
// master_seed + kNoiseEvalSeedOffset + t.
struct SweepJob {
  SirenConfig model;
  TrainConfig train_base;  // loss field overridden per loss point
  std::vector<SweepLossPoint> loss_points;
  std::vector<SweepNoisePoint> noise_points;
  int trials = 20;
  NoiseScope scope = NoiseScope::all_params;
  // When set, trained models are written here and reloaded on repeat runs.
  std::string cache_dir;
};

// One row per (cell, trial); clean rows use noise_family "none", strength 0,
// trial 0. psnr_db is NaN for cells whose training or evaluation failed.
struct SweepRecord {
  std::string loss_family;
  double lambda = 0.0;
  std::string noise_family;
  double strength = 0.0;
  int trial = 0;
  double psnr_db = 0.0;
};

std::vector<SweepRecord> sweep(const CoordinateDataset& dataset,
                               const SweepJob& job);

// Row-level CSV: header loss_family,lambda,noise_family,strength,trial,psnr_db
// with floats at 6 decimal places and LF line endings.
void write_sweep_csv(const std::vector<SweepRecord>& records,
                     const std::string& path);

// Per-cell mean/std aggregated over trials.
void write_sweep_summary_csv(const std::vector<SweepRecord>& records,
                             const std::string& path);

// Parses a row-level sweep CSV back. A missing header, wrong column count or
// unparseable numeric field raises IoError naming the line.
std::vector<SweepRecord> read_sweep_csv(const std::string& path);

}  // namespace inrfort
