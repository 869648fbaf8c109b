#pragma once

#include <map>
#include <string>
#include <vector>

#include "inrfort/dataset.hpp"
#include "inrfort/sweep.hpp"
#include "inrfort/train.hpp"
#include "inrfort/weight_file.hpp"

namespace inrfort {

// Flat `key = value` run configuration with dotted section prefixes.
// '#' starts a comment; blank lines are ignored. Unknown keys are rejected
// naming the offending key. Every key has a documented default; the fully
// resolved set can be echoed to a sidecar file so a run is reproducible.
class RunConfig {
 public:
  RunConfig();  // all defaults

  static RunConfig from_file(const std::string& path);

  // Parses "key = value" text (used for CLI overrides too).
  void set(const std::string& key, const std::string& value);

  const std::string& raw(const std::string& key) const;
  std::string str(const std::string& key) const;
  long integer(const std::string& key) const;
  std::uint64_t uinteger(const std::string& key) const;
  double real(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;
  std::vector<double> real_list(const std::string& key) const;

  // Writes every key as `key = value`, one per line, in table order.
  void echo_resolved(const std::string& path) const;

  // Typed views over the relevant sections. The model in/out dims come from
  // the dataset modality, not from keys.
  SirenConfig siren_config(const CoordinateDataset& dataset) const;
  TrainConfig train_config() const;
  NoiseSpec noise_spec() const;  // the [noise] section, seed already derived
  SweepJob sweep_job(const CoordinateDataset& dataset) const;
  WeightDtype weights_dtype() const;

 private:
  std::map<std::string, std::string> values_;
};

// in/out dims implied by a modality: image_gray 2->1, image_rgb 2->3,
// audio 1->1, video 3->3.
void modality_dims(Modality m, std::size_t& in_dim, std::size_t& out_dim);

// Loads a signal by extension: .pgm/.ppm image, .wav audio, directory video.
CoordinateDataset load_signal(const std::string& path);

}  // namespace inrfort
