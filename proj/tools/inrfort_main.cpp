// inrfort command line: train / render / perturb-eval / sweep / selfcheck.
// Exit codes: 0 ok, 1 config error, 2 I/O error, 3 numeric failure,
// 4 selfcheck failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "inrfort/errors.hpp"
#include "inrfort/netpbm.hpp"
#include "inrfort/run_config.hpp"
#include "inrfort/selfcheck.hpp"
#include "inrfort/sweep.hpp"
#include "inrfort/wav.hpp"

namespace fs = std::filesystem;
using namespace inrfort;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string weights_path;
  std::string out_dir = "out";
  // Raw override strings; empty means "keep the config value". Routing them
  // through RunConfig keeps one validation path for flags and files.
  std::string seed, noise, strength, trials;
  bool negative_control = false;
};

RunConfig load_config(const CommonArgs& args) {
  RunConfig cfg = args.config_path.empty()
                      ? RunConfig()
                      : RunConfig::from_file(args.config_path);
  if (!args.seed.empty()) cfg.set("seed", args.seed);
  if (!args.noise.empty()) cfg.set("noise.family", args.noise);
  if (!args.strength.empty()) cfg.set("noise.strength", args.strength);
  if (!args.trials.empty()) {
    cfg.set("noise.trials", args.trials);
    cfg.set("sweep.trials", args.trials);
  }
  return cfg;
}

CoordinateDataset load_input(const RunConfig& cfg) {
  const std::string input = cfg.str("io.input");
  if (input.empty()) {
    throw ConfigError("io.input must name the signal to fit (.pgm, .ppm, "
                      ".wav or a frame directory)");
  }
  return load_signal(input);
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path)) {
    throw IoError("cannot create output directory: " + path);
  }
}

void write_train_log(const TrainReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write train log: " + path);
  out << "step,data_term,penalty_term,total\n";
  char buf[128];
  for (const auto& rec : report.records) {
    std::snprintf(buf, sizeof(buf), "%ld,%.6f,%.6f,%.6f\n", rec.step,
                  rec.data_term, rec.penalty_term, rec.total);
    out << buf;
  }
  if (!out) throw IoError("failed writing train log: " + path);
}

// Renders the model over the dataset grid and writes the modality's native
// format. Returns the primary artifact path.
std::string write_reconstruction(const MlpParams& params,
                                 const CoordinateDataset& ds,
                                 const std::string& out_dir) {
  const Matrix pred = forward(params, ds.coords);
  switch (ds.modality) {
    case Modality::image_gray: {
      const std::string path = out_dir + "/recon.pgm";
      save_image(pred, ds.shape, path, ImageFormat::pgm);
      return path;
    }
    case Modality::image_rgb: {
      const std::string path = out_dir + "/recon.ppm";
      save_image(pred, ds.shape, path, ImageFormat::ppm);
      return path;
    }
    case Modality::audio: {
      const std::string path = out_dir + "/recon.wav";
      save_audio_wav(pred, path, ds.sample_rate != 0 ? ds.sample_rate : 8000);
      return path;
    }
    case Modality::video: {
      const std::string dir = out_dir + "/recon_frames";
      ensure_dir(dir);
      const std::size_t frames = ds.shape[0];
      const std::size_t hw = ds.shape[1] * ds.shape[2];
      for (std::size_t t = 0; t < frames; ++t) {
        Matrix frame(hw, pred.cols);
        std::copy(pred.data.begin() + static_cast<std::ptrdiff_t>(t * hw * pred.cols),
                  pred.data.begin() + static_cast<std::ptrdiff_t>((t + 1) * hw * pred.cols),
                  frame.data.begin());
        char name[64];
        std::snprintf(name, sizeof(name), "/frame_%04zu.ppm", t);
        save_image(frame, {ds.shape[1], ds.shape[2]}, dir + name,
                   ImageFormat::ppm);
      }
      return dir;
    }
  }
  throw ConfigError("unknown modality");
}

void check_weights_match(const MlpParams& params, const CoordinateDataset& ds) {
  std::size_t in = 0, out = 0;
  modality_dims(ds.modality, in, out);
  if (params.config.in_dim != in || params.config.out_dim != out) {
    throw ConfigError(
        "weight file expects " + std::to_string(params.config.in_dim) + "->" +
        std::to_string(params.config.out_dim) + " signals but the input is " +
        modality_name(ds.modality) + " (" + std::to_string(in) + "->" +
        std::to_string(out) + ")");
  }
}

int cmd_train(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const CoordinateDataset ds = load_input(cfg);
  const SirenConfig model = cfg.siren_config(ds);
  const TrainConfig tc = cfg.train_config();
  ensure_dir(args.out_dir);

  const auto [params, report] = train(ds, model, tc);

  const std::string weights_path = args.out_dir + "/weights.inrw";
  save_weights(params, weights_path, cfg.weights_dtype());
  write_train_log(report, args.out_dir + "/train_log.csv");
  cfg.echo_resolved(args.out_dir + "/resolved_config.txt");
  const std::string recon = write_reconstruction(params, ds, args.out_dir);

  std::printf("trained %s on %s (%zu samples, %zu params)\n",
              loss_family_name(tc.loss.family).c_str(),
              modality_name(ds.modality).c_str(), ds.size(),
              model.param_count());
  std::printf("clean_psnr_db=%.6f\n", report.final_clean_psnr_db);
  std::printf("wall_seconds=%.3f\n", report.wall_seconds);
  std::printf("weights=%s\nreconstruction=%s\n", weights_path.c_str(),
              recon.c_str());
  return 0;
}

int cmd_render(const CommonArgs& args) {
  if (args.weights_path.empty()) {
    throw ConfigError("render requires --weights");
  }
  const RunConfig cfg = load_config(args);
  const CoordinateDataset ds = load_input(cfg);
  const MlpParams params = load_weights(args.weights_path);
  check_weights_match(params, ds);
  ensure_dir(args.out_dir);

  const std::string recon = write_reconstruction(params, ds, args.out_dir);
  const double db = reconstruction_psnr(forward(params, ds.coords), ds.targets);
  std::printf("clean_psnr_db=%.6f\nreconstruction=%s\n", db, recon.c_str());
  return 0;
}

int cmd_perturb_eval(const CommonArgs& args, bool save_recons) {
  if (args.weights_path.empty()) {
    throw ConfigError("perturb-eval requires --weights");
  }
  const RunConfig cfg = load_config(args);
  const CoordinateDataset ds = load_input(cfg);
  const MlpParams params = load_weights(args.weights_path);
  check_weights_match(params, ds);

  const NoiseSpec spec = cfg.noise_spec();
  const int trials = static_cast<int>(cfg.integer("noise.trials"));
  if (trials < 1) {
    throw ConfigError("config key 'noise.trials': expected a positive "
                      "integer, got '" + cfg.str("noise.trials") + "'");
  }

  const double clean =
      reconstruction_psnr(forward(params, ds.coords), ds.targets);
  const NoisyPsnrStats stats = noisy_psnr_stats(params, ds, spec, trials);

  std::printf("noise_family=%s strength=%g scope=%s trials=%d\n",
              noise_family_name(spec.family).c_str(), spec.strength,
              noise_scope_name(spec.scope).c_str(), trials);
  std::printf("clean_psnr_db=%.6f\n", clean);
  std::printf("mean_psnr_db=%.6f\nstd_psnr_db=%.6f\n", stats.mean_db,
              stats.std_db);

  if (save_recons) {
    ensure_dir(args.out_dir);
    std::ofstream out(args.out_dir + "/perturb_trials.csv", std::ios::binary);
    if (!out) {
      throw IoError("cannot write trial CSV: " + args.out_dir +
                    "/perturb_trials.csv");
    }
    out << "trial,psnr_db\n";
    char buf[64];
    for (std::size_t t = 0; t < stats.per_trial_db.size(); ++t) {
      std::snprintf(buf, sizeof(buf), "%zu,%.6f\n", t, stats.per_trial_db[t]);
      out << buf;
    }
    const MlpParams noisy = perturb(params, spec);  // trial 0's draw
    write_reconstruction(noisy, ds, args.out_dir);
    std::printf("trial_csv=%s\n",
                (args.out_dir + "/perturb_trials.csv").c_str());
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const CoordinateDataset ds = load_input(cfg);
  SweepJob job = cfg.sweep_job(ds);
  ensure_dir(args.out_dir);
  if (cfg.str("sweep.cache_models") == "true") {
    job.cache_dir = args.out_dir + "/models";
    ensure_dir(job.cache_dir);
  }

  const auto records = sweep(ds, job);
  const std::string csv = args.out_dir + "/sweep.csv";
  write_sweep_csv(records, csv);
  write_sweep_summary_csv(records, args.out_dir + "/sweep_summary.csv");
  cfg.echo_resolved(args.out_dir + "/resolved_config.txt");

  std::printf("sweep_rows=%zu\ncsv=%s\n", records.size(), csv.c_str());
  return 0;
}

int cmd_selfcheck(const CommonArgs& args) {
  const bool ok = report_selfcheck(run_selfcheck(args.negative_control));
  return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inrfort: fit coordinate networks and measure their "
               "robustness to weight perturbations"};
  app.require_subcommand(1);
  CommonArgs args;
  bool save_recons = false;

  const auto add_common = [&](CLI::App* cmd, bool wants_weights) {
    cmd->add_option("--config", args.config_path,
                    "key = value run configuration file");
    cmd->add_option("--out", args.out_dir, "output directory (default: out)");
    cmd->add_option("--seed", args.seed, "override the master seed");
    if (wants_weights) {
      cmd->add_option("--weights", args.weights_path, "weight file to load");
    }
  };

  CLI::App* train_cmd =
      app.add_subcommand("train", "fit a network to the configured signal");
  add_common(train_cmd, false);

  CLI::App* render_cmd =
      app.add_subcommand("render", "reconstruct the signal from saved weights");
  add_common(render_cmd, true);

  CLI::App* perturb_cmd = app.add_subcommand(
      "perturb-eval", "Monte-Carlo PSNR under weight perturbations");
  add_common(perturb_cmd, true);
  perturb_cmd->add_option("--noise", args.noise,
                          "gaussian_mult | gaussian_add | binary_mask");
  perturb_cmd->add_option("--strength", args.strength,
                          "sigma (gaussian) or drop probability (mask)");
  perturb_cmd->add_option("--trials", args.trials, "Monte-Carlo trials");
  perturb_cmd->add_flag("--save-recons", save_recons,
                        "write per-trial CSV and a perturbed reconstruction");

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "train per loss point and score every noise cell");
  add_common(sweep_cmd, false);
  sweep_cmd->add_option("--trials", args.trials, "Monte-Carlo trials per cell");

  CLI::App* selfcheck_cmd =
      app.add_subcommand("selfcheck", "run the embedded verification battery");
  selfcheck_cmd->add_flag(
      "--negative-control", args.negative_control,
      "corrupt the analytic gradient to prove the battery can fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(args);
    if (render_cmd->parsed()) return cmd_render(args);
    if (perturb_cmd->parsed()) return cmd_perturb_eval(args, save_recons);
    if (sweep_cmd->parsed()) return cmd_sweep(args);
    if (selfcheck_cmd->parsed()) return cmd_selfcheck(args);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
