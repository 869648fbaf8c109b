#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "inrfort/errors.hpp"
#include "inrfort/netpbm.hpp"
#include "inrfort/run_config.hpp"
#include "inrfort/wav.hpp"
#include "test_util.hpp"

using namespace inrfort;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("defaults cover every documented key") {
  const RunConfig cfg;
  CHECK(cfg.uinteger("seed") == 42);
  CHECK(cfg.str("io.input") == "");
  CHECK(cfg.str("io.weights_dtype") == "f64");
  CHECK(cfg.integer("model.hidden_width") == 256);
  CHECK(cfg.integer("model.hidden_layers") == 3);
  CHECK(cfg.real("model.omega_first") == 30.0);
  CHECK(cfg.real("model.omega_hidden") == 30.0);
  CHECK(cfg.integer("train.epochs") == 2000);
  CHECK(cfg.real("train.learning_rate") == 1e-4);
  CHECK(cfg.str("train.batch") == "full");
  CHECK(cfg.str("loss.family") == "mse");
  CHECK(cfg.real("loss.lambda") == 0.1);
  CHECK(cfg.integer("loss.power_iters") == 50);
  CHECK(cfg.str("noise.family") == "gaussian_mult");
  CHECK(cfg.real("noise.strength") == 0.001);
  CHECK(cfg.integer("noise.trials") == 20);
  CHECK(cfg.integer("sweep.trials") == 20);
  CHECK(cfg.str("sweep.cache_models") == "true");
}

TEST_CASE("from_file parses comments, blanks and CRLF") {
  testutil::TempDir tmp("config_parse");
  write_text(tmp.file("run.cfg"),
             "# full line comment\n"
             "seed = 7\r\n"
             "\n"
             "train.epochs = 50   # trailing comment\n"
             "  model.hidden_width=32\n");
  const RunConfig cfg = RunConfig::from_file(tmp.file("run.cfg"));
  CHECK(cfg.uinteger("seed") == 7);
  CHECK(cfg.integer("train.epochs") == 50);
  CHECK(cfg.integer("model.hidden_width") == 32);
  // untouched keys keep their defaults
  CHECK(cfg.integer("model.hidden_layers") == 3);
}

TEST_CASE("config file errors name the line or the key") {
  testutil::TempDir tmp("config_errors");
  CHECK_THROWS_AS(RunConfig::from_file(tmp.file("absent.cfg")), ConfigError);

  write_text(tmp.file("noeq.cfg"), "seed = 1\njust some words\n");
  CHECK_THROWS_WITH_AS(RunConfig::from_file(tmp.file("noeq.cfg")),
                       doctest::Contains("line 2"), ConfigError);

  write_text(tmp.file("unknown.cfg"), "train.epoch = 10\n");
  CHECK_THROWS_WITH_AS(RunConfig::from_file(tmp.file("unknown.cfg")),
                       doctest::Contains("unknown config key: train.epoch"),
                       ConfigError);
}

TEST_CASE("typed getters reject malformed values naming the key") {
  RunConfig cfg;
  cfg.set("train.epochs", "soon");
  CHECK_THROWS_WITH_AS(cfg.integer("train.epochs"),
                       doctest::Contains("train.epochs"), ConfigError);
  cfg.set("loss.lambda", "0.1x");
  CHECK_THROWS_AS(cfg.real("loss.lambda"), ConfigError);
  cfg.set("seed", "-3");
  CHECK_THROWS_AS(cfg.uinteger("seed"), ConfigError);
  CHECK_THROWS_AS(cfg.set("not.a.key", "1"), ConfigError);
  CHECK_THROWS_AS(cfg.raw("not.a.key"), ConfigError);
}

TEST_CASE("list getters split on commas and drop empties") {
  RunConfig cfg;
  cfg.set("sweep.strengths", "0.1, 0.2 ,0.3");
  CHECK(cfg.real_list("sweep.strengths") ==
        std::vector<double>{0.1, 0.2, 0.3});
  cfg.set("sweep.strengths", "");
  CHECK(cfg.real_list("sweep.strengths").empty());
  cfg.set("sweep.noise_families", "gaussian_add");
  CHECK(cfg.list("sweep.noise_families") ==
        std::vector<std::string>{"gaussian_add"});
  cfg.set("sweep.strengths", "0.1,huh");
  CHECK_THROWS_AS(cfg.real_list("sweep.strengths"), ConfigError);
}

TEST_CASE("echo_resolved writes every key once in table order") {
  testutil::TempDir tmp("config_echo");
  RunConfig cfg;
  cfg.set("seed", "123");
  cfg.echo_resolved(tmp.file("resolved.txt"));
  const std::string text = slurp(tmp.file("resolved.txt"));
  CHECK(text.find("seed = 123\n") == 0);  // first key in the table
  CHECK(text.find("io.input = \n") != std::string::npos);
  CHECK(text.find("sweep.cache_models = true\n") != std::string::npos);
  CHECK(text.find("\r") == std::string::npos);
  // one line per key
  const std::size_t lines =
      static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  CHECK(lines == 32);
}

TEST_CASE("modality fixes the model in/out dims") {
  std::size_t in = 0, out = 0;
  modality_dims(Modality::image_gray, in, out);
  CHECK(in == 2);
  CHECK(out == 1);
  modality_dims(Modality::image_rgb, in, out);
  CHECK(in == 2);
  CHECK(out == 3);
  modality_dims(Modality::audio, in, out);
  CHECK(in == 1);
  CHECK(out == 1);
  modality_dims(Modality::video, in, out);
  CHECK(in == 3);
  CHECK(out == 3);

  RunConfig cfg;
  cfg.set("model.hidden_width", "16");
  CoordinateDataset audio;
  audio.modality = Modality::audio;
  const SirenConfig model = cfg.siren_config(audio);
  CHECK(model.in_dim == 1);
  CHECK(model.out_dim == 1);
  CHECK(model.hidden_width == 16);
  CHECK(model.omega_first == 30.0);

  cfg.set("model.hidden_width", "-4");
  CHECK_THROWS_AS(cfg.siren_config(audio), ConfigError);
}

TEST_CASE("train_config view maps keys onto the trainer") {
  RunConfig cfg;
  cfg.set("train.epochs", "12");
  cfg.set("train.learning_rate", "0.005");
  cfg.set("loss.family", "robust");
  cfg.set("loss.lambda", "0.25");
  const TrainConfig tc = cfg.train_config();
  CHECK(tc.epochs == 12);
  CHECK(tc.adam.learning_rate == 0.005);
  CHECK(tc.seed == 42);
  CHECK(tc.loss.family == LossFamily::robust);
  CHECK(tc.loss.lambda == 0.25);
  CHECK(tc.batch_mode == BatchMode::full);

  cfg.set("train.batch", "64");
  CHECK(cfg.train_config().batch_mode == BatchMode::minibatch);
  CHECK(cfg.train_config().batch_size == 64);
  cfg.set("train.batch", "zero");
  CHECK_THROWS_WITH_AS(cfg.train_config(),
                       doctest::Contains("'full' or a positive integer"),
                       ConfigError);
  cfg.set("train.batch", "full");

  cfg.set("loss.exact_penalty_grad", "yes");
  CHECK_THROWS_AS(cfg.train_config(), ConfigError);
  cfg.set("loss.exact_penalty_grad", "true");
  CHECK(cfg.train_config().loss.exact_penalty_grad);

  cfg.set("train.epochs", "0");
  CHECK_THROWS_AS(cfg.train_config(), ConfigError);
}

TEST_CASE("noise_spec derives its seed from the master seed") {
  RunConfig cfg;
  cfg.set("seed", "100");
  cfg.set("noise.family", "binary_mask");
  cfg.set("noise.strength", "0.02");
  cfg.set("noise.scope", "weights_only");
  const NoiseSpec spec = cfg.noise_spec();
  CHECK(spec.family == NoiseFamily::binary_mask);
  CHECK(spec.strength == 0.02);
  CHECK(spec.scope == NoiseScope::weights_only);
  CHECK(spec.seed == 100 + kNoiseEvalSeedOffset);

  cfg.set("noise.strength", "-0.5");
  CHECK_THROWS_AS(cfg.noise_spec(), ConfigError);
}

TEST_CASE("sweep_job builds the loss x noise cross product") {
  const CoordinateDataset ds = testutil::gradient_image(4, 4);
  RunConfig cfg;
  cfg.set("model.hidden_width", "8");
  cfg.set("sweep.loss_points", "mse, robust:0.1, robust:0.5");
  cfg.set("sweep.noise_families", "gaussian_add,binary_mask");
  cfg.set("sweep.strengths", "0.001,0.01");
  cfg.set("sweep.trials", "7");
  const SweepJob job = cfg.sweep_job(ds);
  REQUIRE(job.loss_points.size() == 3);
  CHECK(job.loss_points[0].family == LossFamily::mse);
  CHECK(job.loss_points[0].lambda == 0.0);  // bare family
  CHECK(job.loss_points[1].family == LossFamily::robust);
  CHECK(job.loss_points[1].lambda == 0.1);
  CHECK(job.loss_points[2].lambda == 0.5);
  REQUIRE(job.noise_points.size() == 4);
  CHECK(job.noise_points[0].family == NoiseFamily::gaussian_add);
  CHECK(job.noise_points[0].strength == 0.001);
  CHECK(job.noise_points[3].family == NoiseFamily::binary_mask);
  CHECK(job.noise_points[3].strength == 0.01);
  CHECK(job.trials == 7);
  CHECK(job.model.in_dim == 2);

  cfg.set("sweep.strengths", "");
  CHECK(cfg.sweep_job(ds).noise_points.empty());

  cfg.set("sweep.loss_points", "");
  CHECK_THROWS_AS(cfg.sweep_job(ds), ConfigError);
  cfg.set("sweep.loss_points", "robust:abc");
  CHECK_THROWS_AS(cfg.sweep_job(ds), ConfigError);
  cfg.set("sweep.loss_points", "huber");
  CHECK_THROWS_AS(cfg.sweep_job(ds), std::exception);
}

TEST_CASE("weights_dtype accepts only f32 and f64") {
  RunConfig cfg;
  CHECK(cfg.weights_dtype() == WeightDtype::f64);
  cfg.set("io.weights_dtype", "f32");
  CHECK(cfg.weights_dtype() == WeightDtype::f32);
  cfg.set("io.weights_dtype", "f16");
  CHECK_THROWS_AS(cfg.weights_dtype(), ConfigError);
}

TEST_CASE("load_signal dispatches on path shape") {
  testutil::TempDir tmp("config_signal");

  Matrix gray(4, 1, 0.5);
  save_image(gray, {2, 2}, tmp.file("img.pgm"), ImageFormat::pgm);
  CHECK(load_signal(tmp.file("img.pgm")).modality == Modality::image_gray);

  Matrix rgb(4, 3, 0.5);
  save_image(rgb, {2, 2}, tmp.file("img.ppm"), ImageFormat::ppm);
  CHECK(load_signal(tmp.file("img.ppm")).modality == Modality::image_rgb);

  Matrix samples(8, 1, 0.0);
  save_audio_wav(samples, tmp.file("tone.wav"), 8000);
  CHECK(load_signal(tmp.file("tone.wav")).modality == Modality::audio);

  std::filesystem::create_directories(tmp.file("frames"));
  save_image(rgb, {2, 2}, tmp.file("frames/f0.ppm"), ImageFormat::ppm);
  CHECK(load_signal(tmp.file("frames")).modality == Modality::video);

  write_text(tmp.file("notes.txt"), "hello");
  CHECK_THROWS_AS(load_signal(tmp.file("notes.txt")), IoError);
}
