#include "inrfort/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "inrfort/finite_diff.hpp"
#include "inrfort/loss.hpp"
#include "inrfort/perturb.hpp"
#include "inrfort/rng.hpp"
#include "inrfort/train.hpp"

namespace inrfort {

namespace {

CoordinateDataset random_dataset(std::size_t n, std::size_t in_dim,
                                 std::size_t out_dim, std::uint64_t seed) {
  CoordinateDataset ds;
  ds.coords = Matrix(n, in_dim);
  ds.targets = Matrix(n, out_dim);
  ds.shape = {n};
  Rng rng(seed);
  for (auto& v : ds.coords.data) v = 2.0 * rng.next_unit() - 1.0;
  for (auto& v : ds.targets.data) v = 2.0 * rng.next_unit() - 1.0;
  return ds;
}

double mse_value(const MlpParams& params, const CoordinateDataset& ds) {
  const Matrix out = forward(params, ds.coords);
  double acc = 0.0;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const double r = out.data[i] - ds.targets.data[i];
    acc += r * r;
  }
  return acc / static_cast<double>(ds.size());
}

// Smooth low-frequency 16x16 grayscale target used by the taylor-gap check.
CoordinateDataset synthetic_image16() {
  CoordinateDataset ds;
  ds.shape = {16, 16};
  ds.modality = Modality::image_gray;
  ds.coords = make_coord_grid(ds.shape);
  ds.targets = Matrix(ds.coords.rows, 1);
  for (std::size_t i = 0; i < ds.coords.rows; ++i) {
    const double y = ds.coords(i, 0);
    const double x = ds.coords(i, 1);
    ds.targets(i, 0) = 0.7 * std::sin(3.1 * x + 1.3 * y) *
                       std::cos(2.2 * y - 0.4 * x);
  }
  return ds;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

CheckResult check_grad_fd(bool corrupt_backward) {
  struct Case {
    std::size_t in, out, width, layers;
    double omega_first, omega_hidden;
  };
  const Case cases[] = {
      {2, 1, 8, 2, 30.0, 30.0}, {1, 1, 10, 3, 30.0, 30.0},
      {3, 3, 8, 2, 12.0, 12.0}, {2, 3, 12, 3, 1.5, 1.5},
      {2, 1, 8, 3, 30.0, 6.0},  {1, 1, 6, 2, 5.0, 30.0},
  };

  double max_rel = 0.0;
  std::uint64_t seed = 900;
  for (const auto& c : cases) {
    SirenConfig cfg;
    cfg.in_dim = c.in;
    cfg.out_dim = c.out;
    cfg.hidden_width = c.width;
    cfg.hidden_layers = c.layers;
    cfg.omega_first = c.omega_first;
    cfg.omega_hidden = c.omega_hidden;
    MlpParams params = init_siren(cfg, seed);
    const CoordinateDataset ds = random_dataset(16, c.in, c.out, seed + 1);
    seed += 2;

    LossEval eval = eval_mse(params, ds);
    if (corrupt_backward) eval.grad[0] = eval.grad[0] * 1.001 + 1e-3;

    const Vector fd = finite_difference_gradient(
        [&](const Vector& theta) {
          return mse_value(unflatten(cfg, theta), ds);
        },
        flatten(params), 1e-6);

    for (std::size_t i = 0; i < fd.size(); ++i) {
      const double denom =
          std::max({1.0, std::abs(eval.grad[i]), std::abs(fd[i])});
      max_rel = std::max(max_rel, std::abs(eval.grad[i] - fd[i]) / denom);
    }
  }

  CheckResult r;
  r.name = "grad-fd";
  r.passed = max_rel <= 1e-6;
  r.detail = "max_rel_err=" + fmt(max_rel) + " tol=1e-06";
  return r;
}

CheckResult check_penalty_unit_norm() {
  const double lambdas[] = {0.05, 0.1, 0.5};
  double max_dev = 0.0;
  std::uint64_t seed = 2000;
  for (int rep = 0; rep < 7; ++rep) {
    SirenConfig cfg;
    cfg.in_dim = 1 + rep % 3;
    cfg.out_dim = 1 + 2 * (rep % 2);
    cfg.hidden_width = 6 + rep;
    cfg.hidden_layers = 2 + rep % 2;
    cfg.omega_first = 1.0 + 4.0 * rep;
    cfg.omega_hidden = 30.0 - 3.0 * rep;
    const MlpParams params = init_siren(cfg, seed);
    const CoordinateDataset ds =
        random_dataset(12, cfg.in_dim, cfg.out_dim, seed + 1);
    seed += 2;

    const LossEval base = eval_mse(params, ds);
    for (double lambda : lambdas) {
      const LossEval robust = eval_robust(params, ds, lambda);
      Vector dir(base.grad.size());
      for (std::size_t i = 0; i < dir.size(); ++i) {
        dir[i] = (robust.grad[i] - base.grad[i]) / lambda;
      }
      max_dev = std::max(max_dev, std::abs(l2_norm(dir) - 1.0));
    }
  }

  CheckResult r;
  r.name = "penalty-unit-norm";
  r.passed = max_dev <= 1e-9;
  r.detail = "max_norm_dev=" + fmt(max_dev) + " tol=1e-09";
  return r;
}

CheckResult check_taylor_gap() {
  const CoordinateDataset ds = synthetic_image16();
  SirenConfig model;
  model.in_dim = 2;
  model.out_dim = 1;
  model.hidden_width = 32;
  model.hidden_layers = 3;

  TrainConfig tc;
  tc.epochs = 300;
  tc.seed = 7;
  tc.log_every = 1000;
  const MlpParams params = train(ds, model, tc).first;

  NoiseSpec spec;
  spec.family = NoiseFamily::gaussian_mult;
  spec.strength = 1e-3;
  spec.seed = tc.seed + kNoiseEvalSeedOffset;
  const int trials = 20;
  const auto big = taylor_gap(params, spec, ds, trials);
  spec.strength = 5e-4;
  const auto small = taylor_gap(params, spec, ds, trials);

  // Same seeds mean the same noise directions, so the quadratic coefficient
  // fit at the larger strength transfers to the smaller one.
  double c_fit = 0.0;
  for (const auto& t : big) {
    const double excess = std::max(0.0, t.delta_l - t.bound);
    c_fit = std::max(c_fit, excess / (t.dtheta_norm * t.dtheta_norm));
  }

  bool bound_holds = true;
  double worst_excess = 0.0;
  std::vector<double> ratio_big, ratio_small;
  for (const auto& t : big) ratio_big.push_back(t.delta_l / t.bound);
  for (const auto& t : small) {
    ratio_small.push_back(t.delta_l / t.bound);
    const double allowed =
        t.bound + 1.25 * c_fit * t.dtheta_norm * t.dtheta_norm + 1e-15;
    worst_excess = std::max(worst_excess, t.delta_l - allowed);
    if (t.delta_l > allowed) bound_holds = false;
  }

  const double med_big = median(ratio_big);
  const double med_small = median(ratio_small);
  const bool shrinks = med_small <= med_big * 1.05 + 1e-12;

  CheckResult r;
  r.name = "taylor-gap";
  r.passed = bound_holds && shrinks;
  r.detail = "C=" + fmt(c_fit) + " worst_excess=" + fmt(worst_excess) +
             " med_ratio " + fmt(med_big) + "->" + fmt(med_small);
  return r;
}

CheckResult check_psnr_analytic() {
  const std::size_t n = 64;
  Matrix target(n, 1), pred(n, 1);
  Rng rng(31);
  for (std::size_t i = 0; i < n; ++i) {
    target(i, 0) = rng.next_unit();
    pred(i, 0) = target(i, 0) + 0.1;
  }
  const double twenty = psnr(pred, target, 1.0);
  const bool case_a = std::abs(twenty - 20.0) <= 1e-12;

  const bool case_b =
      psnr(target, target, 1.0) == std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < n; ++i) pred(i, 0) = rng.next_unit();
  double mse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pred(i, 0) - target(i, 0);
    mse += d * d;
  }
  mse /= static_cast<double>(n);
  const double expect = 10.0 * std::log10(1.0 / mse);
  const bool case_c = std::abs(psnr(pred, target, 1.0) - expect) <= 1e-12;

  CheckResult r;
  r.name = "psnr-analytic";
  r.passed = case_a && case_b && case_c;
  r.detail = std::string("uniform_offset=") + (case_a ? "ok" : "BAD") +
             " zero_mse=" + (case_b ? "ok" : "BAD") +
             " random=" + (case_c ? "ok" : "BAD");
  return r;
}

}  // namespace

std::vector<CheckResult> run_selfcheck(bool corrupt_backward) {
  std::vector<CheckResult> results;
  results.push_back(check_grad_fd(corrupt_backward));
  results.push_back(check_penalty_unit_norm());
  results.push_back(check_taylor_gap());
  results.push_back(check_psnr_analytic());
  return results;
}

bool report_selfcheck(const std::vector<CheckResult>& results) {
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    all = all && r.passed;
  }
  return all;
}

}  // namespace inrfort
