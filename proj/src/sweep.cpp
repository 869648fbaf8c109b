#include "inrfort/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "inrfort/errors.hpp"
#include "inrfort/weight_file.hpp"

namespace inrfort {

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string cache_file_name(const SweepLossPoint& pt) {
  std::ostringstream name;
  name << "model_" << loss_family_name(pt.family) << "_lambda";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", pt.lambda);
  name << buf << ".inrw";
  return name.str();
}

MlpParams train_or_load(const CoordinateDataset& dataset, const SweepJob& job,
                        const SweepLossPoint& pt) {
  namespace fs = std::filesystem;
  std::string cache_path;
  if (!job.cache_dir.empty()) {
    fs::create_directories(job.cache_dir);
    cache_path = (fs::path(job.cache_dir) / cache_file_name(pt)).string();
    if (fs::exists(cache_path)) {
      return load_weights(cache_path);
    }
  }
  TrainConfig cfg = job.train_base;
  cfg.loss.family = pt.family;
  cfg.loss.lambda = pt.lambda;
  auto [params, report] = train(dataset, job.model, cfg);
  (void)report;
  if (!cache_path.empty()) {
    save_weights(params, cache_path, WeightDtype::f64);
  }
  return params;
}

}  // namespace

std::vector<SweepRecord> sweep(const CoordinateDataset& dataset,
                               const SweepJob& job) {
  if (job.loss_points.empty()) {
    throw std::invalid_argument("sweep: no loss points");
  }
  if (job.trials < 1) {
    throw std::invalid_argument("sweep: trials must be >= 1");
  }
  std::vector<SweepRecord> records;

  for (const SweepLossPoint& pt : job.loss_points) {
    const std::string family = loss_family_name(pt.family);
    MlpParams params;
    bool trained = false;
    try {
      params = train_or_load(dataset, job, pt);
      trained = true;
    } catch (const std::exception& e) {
      std::cerr << "sweep: cell (" << family << ", lambda=" << pt.lambda
                << ") failed to train: " << e.what() << "\n";
    }

    // With no noise cells the sweep still reports clean PSNR, one row per
    // trained model; with noise cells every row is a (cell, trial) pair.
    if (job.noise_points.empty()) {
      SweepRecord clean{family, pt.lambda, "none", 0.0, 0,
                        std::numeric_limits<double>::quiet_NaN()};
      if (trained) {
        const Matrix recon = forward(params, dataset.coords);
        clean.psnr_db = reconstruction_psnr(recon, dataset.targets);
      }
      records.push_back(clean);
    }

    for (const SweepNoisePoint& np : job.noise_points) {
      const std::string noise_name = noise_family_name(np.family);
      if (!trained) {
        for (int t = 0; t < job.trials; ++t) {
          records.push_back({family, pt.lambda, noise_name, np.strength, t,
                             std::numeric_limits<double>::quiet_NaN()});
        }
        continue;
      }
      try {
        NoiseSpec spec;
        spec.family = np.family;
        spec.strength = np.strength;
        spec.scope = job.scope;
        spec.seed = job.train_base.seed + kNoiseEvalSeedOffset;
        const NoisyPsnrStats stats =
            noisy_psnr_stats(params, dataset, spec, job.trials);
        for (int t = 0; t < job.trials; ++t) {
          records.push_back({family, pt.lambda, noise_name, np.strength, t,
                             stats.per_trial_db[static_cast<std::size_t>(t)]});
        }
      } catch (const std::exception& e) {
        std::cerr << "sweep: cell (" << family << ", lambda=" << pt.lambda
                  << ", " << noise_name << ", strength=" << np.strength
                  << ") failed: " << e.what() << "\n";
        for (int t = 0; t < job.trials; ++t) {
          records.push_back({family, pt.lambda, noise_name, np.strength, t,
                             std::numeric_limits<double>::quiet_NaN()});
        }
      }
    }
  }

  // Sort so emission order never depends on evaluation order.
  std::stable_sort(records.begin(), records.end(),
                   [](const SweepRecord& a, const SweepRecord& b) {
                     if (a.loss_family != b.loss_family)
                       return a.loss_family < b.loss_family;
                     if (a.lambda != b.lambda) return a.lambda < b.lambda;
                     if (a.noise_family != b.noise_family)
                       return a.noise_family < b.noise_family;
                     if (a.strength != b.strength) return a.strength < b.strength;
                     return a.trial < b.trial;
                   });
  return records;
}

void write_sweep_csv(const std::vector<SweepRecord>& records,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF on all hosts
  if (!out) {
    throw IoError(path + ": cannot open file for writing");
  }
  out << "loss_family,lambda,noise_family,strength,trial,psnr_db\n";
  for (const SweepRecord& r : records) {
    out << r.loss_family << "," << fmt6(r.lambda) << "," << r.noise_family
        << "," << fmt6(r.strength) << "," << r.trial << "," << fmt6(r.psnr_db)
        << "\n";
  }
  if (!out) {
    throw IoError(path + ": write failed");
  }
}

std::vector<SweepRecord> read_sweep_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path + ": cannot open file");
  }
  std::string line;
  if (!std::getline(in, line) ||
      line != "loss_family,lambda,noise_family,strength,trial,psnr_db") {
    throw IoError(path + ": missing or malformed sweep CSV header");
  }

  const auto parse_double = [&](const std::string& field, long line_no) {
    if (field == "nan" || field == "-nan") {
      return std::numeric_limits<double>::quiet_NaN();
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(field, &used);
      if (used != field.size()) throw std::invalid_argument(field);
      return v;
    } catch (const std::exception&) {
      throw IoError(path + ": line " + std::to_string(line_no) +
                    ": bad numeric field '" + field + "'");
    }
  };

  std::vector<SweepRecord> records;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream row(line);
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 6) {
      throw IoError(path + ": line " + std::to_string(line_no) +
                    ": expected 6 fields, got " +
                    std::to_string(fields.size()));
    }
    SweepRecord r;
    r.loss_family = fields[0];
    r.lambda = parse_double(fields[1], line_no);
    r.noise_family = fields[2];
    r.strength = parse_double(fields[3], line_no);
    r.trial = static_cast<int>(parse_double(fields[4], line_no));
    r.psnr_db = parse_double(fields[5], line_no);
    records.push_back(r);
  }
  return records;
}

void write_sweep_summary_csv(const std::vector<SweepRecord>& records,
                             const std::string& path) {
  struct CellKey {
    std::string loss_family;
    double lambda;
    std::string noise_family;
    double strength;
    bool operator<(const CellKey& o) const {
      if (loss_family != o.loss_family) return loss_family < o.loss_family;
      if (lambda != o.lambda) return lambda < o.lambda;
      if (noise_family != o.noise_family) return noise_family < o.noise_family;
      return strength < o.strength;
    }
  };
  std::map<CellKey, std::vector<double>> cells;
  for (const SweepRecord& r : records) {
    cells[{r.loss_family, r.lambda, r.noise_family, r.strength}].push_back(
        r.psnr_db);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(path + ": cannot open file for writing");
  }
  out << "loss_family,lambda,noise_family,strength,trials,mean_psnr_db,"
         "std_psnr_db\n";
  for (const auto& [key, values] : cells) {
    double mean, stddev;
    const bool all_equal = std::all_of(
        values.begin(), values.end(),
        [&](double v) { return v == values.front(); });
    if (all_equal) {
      mean = values.front();
      stddev = 0.0;
    } else {
      mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(values.size());
      stddev = std::sqrt(var);
    }
    out << key.loss_family << "," << fmt6(key.lambda) << ","
        << key.noise_family << "," << fmt6(key.strength) << ","
        << values.size() << "," << fmt6(mean) << "," << fmt6(stddev) << "\n";
  }
  if (!out) {
    throw IoError(path + ": write failed");
  }
}

}  // namespace inrfort
