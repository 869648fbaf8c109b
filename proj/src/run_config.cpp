#include "inrfort/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "inrfort/errors.hpp"
#include "inrfort/netpbm.hpp"
#include "inrfort/wav.hpp"

namespace inrfort {

namespace {

struct KeyDefault {
  const char* key;
  const char* value;
};

// Every recognized key with its default. Order here is the echo order.
const std::vector<KeyDefault>& key_table() {
  static const std::vector<KeyDefault> table = {
      {"seed", "42"},
      {"io.input", ""},
      {"io.weights_dtype", "f64"},
      {"model.hidden_width", "256"},
      {"model.hidden_layers", "3"},
      {"model.omega_first", "30"},
      {"model.omega_hidden", "30"},
      {"train.epochs", "2000"},
      {"train.learning_rate", "1e-4"},
      {"train.beta1", "0.9"},
      {"train.beta2", "0.999"},
      {"train.adam_eps", "1e-8"},
      {"train.log_every", "100"},
      {"train.batch", "full"},
      {"loss.family", "mse"},
      {"loss.lambda", "0.1"},
      {"loss.power_iters", "50"},
      {"loss.power_seed", "24301"},
      {"loss.noise_family", "gaussian_mult"},
      {"loss.noise_strength", "0.001"},
      {"loss.noise_scope", "all_params"},
      {"loss.exact_penalty_grad", "false"},
      {"loss.exact_penalty_grad_step", "1e-6"},
      {"noise.family", "gaussian_mult"},
      {"noise.strength", "0.001"},
      {"noise.scope", "all_params"},
      {"noise.trials", "20"},
      {"sweep.loss_points", "mse,robust:0.1"},
      {"sweep.noise_families", "gaussian_mult,gaussian_add,binary_mask"},
      {"sweep.strengths", "0.0001,0.001,0.01"},
      {"sweep.trials", "20"},
      {"sweep.cache_models", "true"},
  };
  return table;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  if (!s.empty() && s.back() == sep) parts.push_back("");
  return parts;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& want) {
  throw ConfigError("config key '" + key + "': expected " + want + ", got '" +
                    value + "'");
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto& kv : key_table()) values_[kv.key] = kv.value;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig config;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    config.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return config;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key: " + key);
  it->second = value;
}

const std::string& RunConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key: " + key);
  return it->second;
}

std::string RunConfig::str(const std::string& key) const { return raw(key); }

long RunConfig::integer(const std::string& key) const {
  const std::string& v = raw(key);
  try {
    std::size_t used = 0;
    const long parsed = std::stol(v, &used);
    if (used != v.size()) bad_value(key, v, "an integer");
    return parsed;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, v, "an integer");
  }
}

std::uint64_t RunConfig::uinteger(const std::string& key) const {
  const std::string& v = raw(key);
  try {
    std::size_t used = 0;
    const unsigned long long parsed = std::stoull(v, &used);
    if (used != v.size() || (!v.empty() && v[0] == '-')) {
      bad_value(key, v, "a non-negative integer");
    }
    return parsed;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, v, "a non-negative integer");
  }
}

double RunConfig::real(const std::string& key) const {
  const std::string& v = raw(key);
  try {
    std::size_t used = 0;
    const double parsed = std::stod(v, &used);
    if (used != v.size()) bad_value(key, v, "a number");
    return parsed;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, v, "a number");
  }
}

std::vector<std::string> RunConfig::list(const std::string& key) const {
  std::vector<std::string> items;
  for (const auto& item : split(raw(key), ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<double> RunConfig::real_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : list(key)) {
    try {
      std::size_t used = 0;
      const double parsed = std::stod(item, &used);
      if (used != item.size()) bad_value(key, item, "a number list");
      out.push_back(parsed);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      bad_value(key, item, "a number list");
    }
  }
  return out;
}

void RunConfig::echo_resolved(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write resolved config: " + path);
  for (const auto& kv : key_table()) {
    out << kv.key << " = " << values_.at(kv.key) << "\n";
  }
  if (!out) throw IoError("failed writing resolved config: " + path);
}

void modality_dims(Modality m, std::size_t& in_dim, std::size_t& out_dim) {
  switch (m) {
    case Modality::image_gray: in_dim = 2; out_dim = 1; return;
    case Modality::image_rgb: in_dim = 2; out_dim = 3; return;
    case Modality::audio: in_dim = 1; out_dim = 1; return;
    case Modality::video: in_dim = 3; out_dim = 3; return;
  }
  throw std::invalid_argument("modality_dims: unknown modality");
}

SirenConfig RunConfig::siren_config(const CoordinateDataset& dataset) const {
  SirenConfig model;
  modality_dims(dataset.modality, model.in_dim, model.out_dim);
  const long width = integer("model.hidden_width");
  const long layers = integer("model.hidden_layers");
  if (width <= 0) bad_value("model.hidden_width", raw("model.hidden_width"),
                            "a positive integer");
  if (layers <= 0) bad_value("model.hidden_layers", raw("model.hidden_layers"),
                             "a positive integer");
  model.hidden_width = static_cast<std::size_t>(width);
  model.hidden_layers = static_cast<std::size_t>(layers);
  model.omega_first = real("model.omega_first");
  model.omega_hidden = real("model.omega_hidden");
  try {
    model.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("model config invalid: ") + e.what());
  }
  return model;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig tc;
  tc.epochs = integer("train.epochs");
  tc.adam.learning_rate = real("train.learning_rate");
  tc.adam.beta1 = real("train.beta1");
  tc.adam.beta2 = real("train.beta2");
  tc.adam.eps = real("train.adam_eps");
  tc.seed = uinteger("seed");
  tc.log_every = integer("train.log_every");

  const std::string batch = raw("train.batch");
  if (batch == "full") {
    tc.batch_mode = BatchMode::full;
  } else {
    tc.batch_mode = BatchMode::minibatch;
    long n = 0;
    try {
      std::size_t used = 0;
      n = std::stol(batch, &used);
      if (used != batch.size()) throw std::invalid_argument(batch);
    } catch (const std::exception&) {
      bad_value("train.batch", batch, "'full' or a positive integer");
    }
    if (n <= 0) bad_value("train.batch", batch, "'full' or a positive integer");
    tc.batch_size = static_cast<std::size_t>(n);
  }

  LossSpec& loss = tc.loss;
  loss.family = parse_loss_family(raw("loss.family"));
  loss.lambda = real("loss.lambda");
  loss.power_iters = static_cast<int>(integer("loss.power_iters"));
  loss.power_seed = uinteger("loss.power_seed");
  loss.noise.family = parse_noise_family(raw("loss.noise_family"));
  loss.noise.strength = real("loss.noise_strength");
  loss.noise.scope = parse_noise_scope(raw("loss.noise_scope"));
  const std::string exact = raw("loss.exact_penalty_grad");
  if (exact == "true") loss.exact_penalty_grad = true;
  else if (exact == "false") loss.exact_penalty_grad = false;
  else bad_value("loss.exact_penalty_grad", exact, "true or false");
  loss.exact_penalty_grad_step = real("loss.exact_penalty_grad_step");

  try {
    tc.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("train config invalid: ") + e.what());
  }
  return tc;
}

NoiseSpec RunConfig::noise_spec() const {
  NoiseSpec spec;
  spec.family = parse_noise_family(raw("noise.family"));
  spec.strength = real("noise.strength");
  spec.scope = parse_noise_scope(raw("noise.scope"));
  spec.seed = uinteger("seed") + kNoiseEvalSeedOffset;
  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("noise config invalid: ") + e.what());
  }
  return spec;
}

SweepJob RunConfig::sweep_job(const CoordinateDataset& dataset) const {
  SweepJob job;
  job.model = siren_config(dataset);
  job.train_base = train_config();

  // Entries are `family` or `family:lambda`; a bare family means lambda 0.
  for (const auto& entry : list("sweep.loss_points")) {
    SweepLossPoint point;
    const std::size_t colon = entry.find(':');
    const std::string family = trim(entry.substr(0, colon));
    point.family = parse_loss_family(family);
    if (colon != std::string::npos) {
      const std::string lam = trim(entry.substr(colon + 1));
      try {
        std::size_t used = 0;
        point.lambda = std::stod(lam, &used);
        if (used != lam.size()) throw std::invalid_argument(lam);
      } catch (const std::exception&) {
        bad_value("sweep.loss_points", entry, "family or family:lambda");
      }
    }
    job.loss_points.push_back(point);
  }
  if (job.loss_points.empty()) {
    throw ConfigError("config key 'sweep.loss_points': needs at least one entry");
  }

  // An empty strength (or family) list is allowed: the sweep then reports
  // clean PSNR only.
  const std::vector<double> strengths = real_list("sweep.strengths");
  for (const auto& name : list("sweep.noise_families")) {
    const NoiseFamily family = parse_noise_family(name);
    for (double s : strengths) {
      job.noise_points.push_back({family, s});
    }
  }

  job.trials = static_cast<int>(integer("sweep.trials"));
  if (job.trials <= 0) {
    bad_value("sweep.trials", raw("sweep.trials"), "a positive integer");
  }
  job.scope = parse_noise_scope(raw("noise.scope"));
  return job;
}

WeightDtype RunConfig::weights_dtype() const {
  const std::string& v = raw("io.weights_dtype");
  if (v == "f32") return WeightDtype::f32;
  if (v == "f64") return WeightDtype::f64;
  bad_value("io.weights_dtype", v, "f32 or f64");
}

CoordinateDataset load_signal(const std::string& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_directory(path, ec)) return load_video_frames(path);

  std::string ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pgm" || ext == ".ppm") return load_image(path);
  if (ext == ".wav") return load_audio_wav(path);
  throw IoError("unrecognized input '" + path +
                "': expected .pgm, .ppm, .wav or a frame directory");
}

}  // namespace inrfort
