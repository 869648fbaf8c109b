#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "inrfort/errors.hpp"
#include "inrfort/train.hpp"
#include "test_util.hpp"

using namespace inrfort;

TEST_CASE("adam first step from zero state is the closed-form update") {
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  AdamState state(3);
  Vector theta = {1.0, -2.0, 0.5};
  const Vector grad = {0.5, -0.25, 3.0};
  const Vector before = theta;
  adam_step(state, theta, grad, cfg);
  // step 1: mhat = g, vhat = g^2, so the update is lr * g / (|g| + eps)
  for (std::size_t i = 0; i < 3; ++i) {
    const double want =
        before[i] - cfg.learning_rate * grad[i] /
                        (std::abs(grad[i]) + cfg.eps);
    CHECK(theta[i] == doctest::Approx(want).epsilon(1e-14));
  }
  CHECK(state.step == 1);
}

TEST_CASE("adam with a zero gradient leaves parameters untouched") {
  AdamConfig cfg;
  AdamState state(4);
  Vector theta = {0.1, -0.7, 2.5, 0.0};
  const Vector before = theta;
  const Vector grad(4, 0.0);
  for (int i = 0; i < 10; ++i) adam_step(state, theta, grad, cfg);
  CHECK(theta == before);
  CHECK(state.step == 10);
}

TEST_CASE("adam minimizes a separable quadratic") {
  AdamConfig cfg;
  cfg.learning_rate = 0.1;
  AdamState state(3);
  const Vector target = {1.5, -0.25, 4.0};
  Vector theta = {0.0, 0.0, 0.0};
  for (int step = 0; step < 200; ++step) {
    Vector grad(3);
    for (std::size_t i = 0; i < 3; ++i) grad[i] = theta[i] - target[i];
    adam_step(state, theta, grad, cfg);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(theta[i] - target[i]) < 1e-3);
  }
}

TEST_CASE("adam rejects mismatched dimensions") {
  AdamConfig cfg;
  AdamState state(3);
  Vector theta = {1.0, 2.0};
  const Vector grad = {0.1, 0.2};
  CHECK_THROWS_AS(adam_step(state, theta, grad, cfg), std::invalid_argument);
}

TEST_CASE("train config validation") {
  const CoordinateDataset ds = testutil::random_dataset(8, 2, 1, 11);
  const SirenConfig model = testutil::small_config(2, 1, 8, 1);

  TrainConfig bad_epochs;
  bad_epochs.epochs = 0;
  CHECK_THROWS_AS(train(ds, model, bad_epochs), std::invalid_argument);

  TrainConfig bad_batch;
  bad_batch.batch_mode = BatchMode::minibatch;
  bad_batch.batch_size = 0;
  CHECK_THROWS_AS(train(ds, model, bad_batch), std::invalid_argument);

  TrainConfig bad_log;
  bad_log.log_every = 0;
  CHECK_THROWS_AS(train(ds, model, bad_log), std::invalid_argument);

  TrainConfig ok;
  ok.epochs = 1;
  const SirenConfig wrong_in = testutil::small_config(3, 1, 8, 1);
  CHECK_THROWS_AS(train(ds, wrong_in, ok), std::invalid_argument);
}

TEST_CASE("one epoch full batch performs exactly one logged step") {
  const CoordinateDataset ds = testutil::random_dataset(16, 2, 1, 12);
  const SirenConfig model = testutil::small_config(2, 1, 8, 1);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.seed = 5;
  const auto [params, report] = train(ds, model, cfg);
  REQUIRE(report.records.size() == 1);
  CHECK(report.records[0].step == 1);
  // the single Adam step moved the parameters away from the init
  const MlpParams init = init_siren(model, cfg.seed + kInitSeedOffset);
  CHECK(flatten(params) != flatten(init));
}

TEST_CASE("train log hits step 1, every log_every, and the final epoch") {
  const CoordinateDataset ds = testutil::random_dataset(16, 2, 1, 13);
  const SirenConfig model = testutil::small_config(2, 1, 8, 1);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.log_every = 3;
  const auto [params, report] = train(ds, model, cfg);
  std::vector<long> steps;
  for (const auto& r : report.records) steps.push_back(r.step);
  CHECK(steps == std::vector<long>{1, 3, 6, 9, 10});
  for (const auto& r : report.records) {
    CHECK(r.total == doctest::Approx(r.data_term).epsilon(1e-15));
    CHECK(r.penalty_term == 0.0);  // mse family
  }
}

TEST_CASE("training is deterministic for a fixed seed") {
  const CoordinateDataset ds = testutil::random_dataset(32, 2, 1, 14);
  const SirenConfig model = testutil::small_config(2, 1, 12, 2);
  TrainConfig cfg;
  cfg.epochs = 25;
  cfg.seed = 99;
  const auto [p1, r1] = train(ds, model, cfg);
  const auto [p2, r2] = train(ds, model, cfg);
  CHECK(flatten(p1) == flatten(p2));
  REQUIRE(r1.records.size() == r2.records.size());
  for (std::size_t i = 0; i < r1.records.size(); ++i) {
    CHECK(r1.records[i].total == r2.records[i].total);
  }
  CHECK(r1.final_clean_psnr_db == r2.final_clean_psnr_db);
}

TEST_CASE("robust with lambda 0 follows the mse trajectory bitwise") {
  const CoordinateDataset ds = testutil::random_dataset(32, 2, 1, 15);
  const SirenConfig model = testutil::small_config(2, 1, 12, 2);
  TrainConfig mse_cfg;
  mse_cfg.epochs = 40;
  mse_cfg.seed = 3;
  TrainConfig robust_cfg = mse_cfg;
  robust_cfg.loss.family = LossFamily::robust;
  robust_cfg.loss.lambda = 0.0;
  const auto [p_mse, r_mse] = train(ds, model, mse_cfg);
  const auto [p_rob, r_rob] = train(ds, model, robust_cfg);
  CHECK(flatten(p_mse) == flatten(p_rob));
  CHECK(r_mse.final_clean_psnr_db == r_rob.final_clean_psnr_db);
}

TEST_CASE("minibatch training is deterministic and visits every sample") {
  const CoordinateDataset ds = testutil::random_dataset(20, 2, 1, 16);
  const SirenConfig model = testutil::small_config(2, 1, 8, 1);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_mode = BatchMode::minibatch;
  cfg.batch_size = 6;
  cfg.log_every = 4;
  const auto [p1, r1] = train(ds, model, cfg);
  const auto [p2, r2] = train(ds, model, cfg);
  CHECK(flatten(p1) == flatten(p2));
  // 20 samples / batch 6 -> 4 steps per epoch, 12 total; logged at 1,4,8,12
  std::vector<long> steps;
  for (const auto& r : r1.records) steps.push_back(r.step);
  CHECK(steps == std::vector<long>{1, 4, 8, 12});

  // batch_size >= n degenerates to one full-batch step per epoch
  TrainConfig big = cfg;
  big.batch_size = 64;
  const auto [p3, r3] = train(ds, model, big);
  CHECK(r3.records.back().step == 3);
}

TEST_CASE("siren fit reaches 35 dB on a 16x16 gradient image") {
  const CoordinateDataset ds = testutil::gradient_image(16, 16);
  SirenConfig model = testutil::small_config(2, 1, 64, 3);
  TrainConfig cfg;
  cfg.epochs = 1500;
  cfg.seed = 42;
  cfg.adam.learning_rate = 1e-4;
  const auto [params, report] = train(ds, model, cfg);
  CHECK(report.final_clean_psnr_db >= 35.0);
  CHECK(report.wall_seconds > 0.0);
  // the logged loss decreased by orders of magnitude
  CHECK(report.records.back().total < report.records.front().total * 1e-2);
}

TEST_CASE("a NaN target surfaces as NumericError at step 1") {
  CoordinateDataset ds = testutil::random_dataset(8, 2, 1, 17);
  ds.targets.data[3] = std::numeric_limits<double>::quiet_NaN();
  const SirenConfig model = testutil::small_config(2, 1, 8, 1);
  TrainConfig cfg;
  cfg.epochs = 5;
  CHECK_THROWS_WITH_AS(train(ds, model, cfg), doctest::Contains("step 1"),
                       NumericError);
}

TEST_CASE("psnr closed-form cases") {
  Matrix a(4, 1);
  a.data = {0.1, 0.2, 0.3, 0.4};
  Matrix b = a;
  CHECK(psnr(a, b, 1.0) == std::numeric_limits<double>::infinity());

  for (auto& v : b.data) v += 0.1;  // uniform offset: MSE = 0.01
  CHECK(psnr(a, b, 1.0) == doctest::Approx(20.0).epsilon(1e-12));

  // against the direct formula on random data
  Rng rng(18);
  Matrix p(10, 3), q(10, 3);
  for (auto& v : p.data) v = rng.next_uniform(-1.0, 1.0);
  for (auto& v : q.data) v = rng.next_uniform(-1.0, 1.0);
  double mse = 0.0;
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    const double r = p.data[i] - q.data[i];
    mse += r * r;
  }
  mse /= static_cast<double>(p.data.size());
  CHECK(psnr(p, q, 2.0) ==
        doctest::Approx(10.0 * std::log10(4.0 / mse)).epsilon(1e-12));

  Matrix wrong(3, 1);
  CHECK_THROWS_AS(psnr(a, wrong, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(psnr(a, b, 0.0), std::invalid_argument);
}

TEST_CASE("reconstruction psnr halves the offset via the [0,1] remap") {
  Matrix a(5, 1);
  a.data = {-0.5, -0.1, 0.0, 0.3, 0.6};
  Matrix b = a;
  for (auto& v : b.data) v += 0.2;  // becomes 0.1 after the /2 remap
  CHECK(reconstruction_psnr(a, b) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(reconstruction_psnr(a, a) == std::numeric_limits<double>::infinity());
}

TEST_CASE("noisy psnr at strength 0 collapses to the clean value") {
  const CoordinateDataset ds = testutil::random_dataset(16, 2, 1, 19);
  const MlpParams params = init_siren(testutil::small_config(2, 1, 8, 1), 19);
  const Matrix clean = forward(params, ds.coords);
  const double clean_db = reconstruction_psnr(clean, ds.targets);

  NoiseSpec spec;
  spec.family = NoiseFamily::gaussian_add;
  spec.strength = 0.0;
  spec.seed = 500;
  const NoisyPsnrStats stats = noisy_psnr_stats(params, ds, spec, 5);
  REQUIRE(stats.per_trial_db.size() == 5);
  for (double x : stats.per_trial_db) CHECK(x == clean_db);
  CHECK(stats.mean_db == clean_db);
  CHECK(stats.std_db == 0.0);
}

TEST_CASE("single-trial stats have zero std and use the base seed") {
  const CoordinateDataset ds = testutil::random_dataset(16, 2, 1, 20);
  const MlpParams params = init_siren(testutil::small_config(2, 1, 8, 1), 20);
  NoiseSpec spec;
  spec.family = NoiseFamily::gaussian_mult;
  spec.strength = 0.05;
  spec.seed = 700;
  const NoisyPsnrStats one = noisy_psnr_stats(params, ds, spec, 1);
  CHECK(one.std_db == 0.0);
  CHECK(one.mean_db == one.per_trial_db[0]);

  // trial t of a longer run perturbs with seed + t
  const NoisyPsnrStats three = noisy_psnr_stats(params, ds, spec, 3);
  CHECK(three.per_trial_db[0] == one.per_trial_db[0]);
  NoiseSpec shifted = spec;
  shifted.seed = spec.seed + 2;
  const NoisyPsnrStats last = noisy_psnr_stats(params, ds, shifted, 1);
  CHECK(three.per_trial_db[2] == last.per_trial_db[0]);

  CHECK_THROWS_AS(noisy_psnr_stats(params, ds, spec, 0),
                  std::invalid_argument);
}

TEST_CASE("mean noisy psnr decreases along a strength grid") {
  const CoordinateDataset ds = testutil::gradient_image(8, 8);
  SirenConfig model = testutil::small_config(2, 1, 16, 2);
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.seed = 21;
  const auto [params, report] = train(ds, model, cfg);

  for (NoiseFamily family :
       {NoiseFamily::gaussian_mult, NoiseFamily::gaussian_add,
        NoiseFamily::binary_mask}) {
    NoiseSpec spec;
    spec.family = family;
    spec.seed = 900;
    std::vector<double> means;
    for (double s : {1e-4, 1e-3, 1e-2}) {
      spec.strength = s;
      means.push_back(noisy_psnr_stats(params, ds, spec, 20).mean_db);
    }
    CAPTURE(noise_family_name(family));
    CHECK(means[0] > means[1]);
    CHECK(means[1] > means[2]);
  }
}

TEST_CASE("noisy psnr evaluation leaves the model unchanged") {
  const CoordinateDataset ds = testutil::random_dataset(16, 2, 1, 22);
  const MlpParams params = init_siren(testutil::small_config(2, 1, 8, 1), 22);
  const Vector before = flatten(params);
  NoiseSpec spec;
  spec.family = NoiseFamily::binary_mask;
  spec.strength = 0.2;
  spec.seed = 123;
  noisy_psnr_stats(params, ds, spec, 4);
  CHECK(flatten(params) == before);
}
