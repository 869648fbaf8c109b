// Python bindings for the core operations: model init/forward, losses,
// perturbations, PSNR evaluation, training and the file formats.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "inrfort/errors.hpp"
#include "inrfort/loss.hpp"
#include "inrfort/netpbm.hpp"
#include "inrfort/perturb.hpp"
#include "inrfort/run_config.hpp"
#include "inrfort/selfcheck.hpp"
#include "inrfort/train.hpp"
#include "inrfort/wav.hpp"
#include "inrfort/weight_file.hpp"

namespace py = pybind11;
using namespace inrfort;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const DoubleArray& arr, const char* what) {
  if (arr.ndim() != 2) {
    throw std::invalid_argument(std::string(what) + ": expected a 2-D array");
  }
  Matrix m(static_cast<std::size_t>(arr.shape(0)),
           static_cast<std::size_t>(arr.shape(1)));
  const double* src = arr.data();
  std::copy(src, src + m.data.size(), m.data.begin());
  return m;
}

py::array_t<double> to_numpy(const Matrix& m) {
  py::array_t<double> arr({m.rows, m.cols});
  std::copy(m.data.begin(), m.data.end(), arr.mutable_data());
  return arr;
}

py::array_t<double> to_numpy(const Vector& v) {
  py::array_t<double> arr(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), arr.mutable_data());
  return arr;
}

Modality parse_modality(const std::string& name) {
  if (name == "image_gray") return Modality::image_gray;
  if (name == "image_rgb") return Modality::image_rgb;
  if (name == "audio") return Modality::audio;
  if (name == "video") return Modality::video;
  throw ConfigError("unknown modality: " + name);
}

LossSpec make_loss_spec(const std::string& family, double lambda,
                        const std::string& noise_family, double noise_strength,
                        const std::string& noise_scope) {
  LossSpec spec;
  spec.family = parse_loss_family(family);
  spec.lambda = lambda;
  spec.noise.family = parse_noise_family(noise_family);
  spec.noise.strength = noise_strength;
  spec.noise.scope = parse_noise_scope(noise_scope);
  spec.validate();
  return spec;
}

py::dict eval_to_dict(const LossEval& eval) {
  py::dict d;
  d["total"] = eval.total;
  d["data_term"] = eval.data_term;
  d["penalty_term"] = eval.penalty_term;
  d["grad"] = to_numpy(eval.grad);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "coordinate-network robustness toolkit (core bindings)";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

  py::class_<SirenConfig>(m, "SirenConfig")
      .def(py::init([](std::size_t in_dim, std::size_t out_dim,
                       std::size_t hidden_width, std::size_t hidden_layers,
                       double omega_first, double omega_hidden) {
             SirenConfig cfg{in_dim, out_dim, hidden_width, hidden_layers,
                             omega_first, omega_hidden};
             cfg.validate();
             return cfg;
           }),
           py::arg("in_dim") = 2, py::arg("out_dim") = 1,
           py::arg("hidden_width") = 256, py::arg("hidden_layers") = 3,
           py::arg("omega_first") = 30.0, py::arg("omega_hidden") = 30.0)
      .def_readwrite("in_dim", &SirenConfig::in_dim)
      .def_readwrite("out_dim", &SirenConfig::out_dim)
      .def_readwrite("hidden_width", &SirenConfig::hidden_width)
      .def_readwrite("hidden_layers", &SirenConfig::hidden_layers)
      .def_readwrite("omega_first", &SirenConfig::omega_first)
      .def_readwrite("omega_hidden", &SirenConfig::omega_hidden)
      .def("param_count", &SirenConfig::param_count)
      .def("__repr__", [](const SirenConfig& c) {
        return "SirenConfig(" + std::to_string(c.in_dim) + "->" +
               std::to_string(c.out_dim) + ", width " +
               std::to_string(c.hidden_width) + ", layers " +
               std::to_string(c.hidden_layers) + ")";
      });

  py::class_<MlpParams>(m, "Model")
      .def_readonly("config", &MlpParams::config)
      .def("param_count", &MlpParams::param_count)
      .def("flatten", [](const MlpParams& p) { return to_numpy(flatten(p)); })
      .def(
          "set_flat",
          [](MlpParams& p, const DoubleArray& theta) {
            if (theta.ndim() != 1) {
              throw std::invalid_argument("set_flat: expected a 1-D array");
            }
            Vector v(theta.data(), theta.data() + theta.shape(0));
            p = unflatten(p.config, v);
          },
          py::arg("theta"))
      .def(
          "forward",
          [](const MlpParams& p, const DoubleArray& coords) {
            return to_numpy(forward(p, to_matrix(coords, "forward")));
          },
          py::arg("coords"))
      .def(
          "save",
          [](const MlpParams& p, const std::string& path,
             const std::string& dtype) {
            if (dtype != "f32" && dtype != "f64") {
              throw ConfigError("dtype must be f32 or f64, got " + dtype);
            }
            save_weights(p, path,
                         dtype == "f32" ? WeightDtype::f32 : WeightDtype::f64);
          },
          py::arg("path"), py::arg("dtype") = "f64")
      .def_static("load", &load_weights, py::arg("path"));

  py::class_<CoordinateDataset>(m, "Dataset")
      .def(py::init([](const DoubleArray& coords, const DoubleArray& targets,
                       const std::vector<std::size_t>& shape,
                       const std::string& modality, std::uint32_t sample_rate) {
             CoordinateDataset ds;
             ds.coords = to_matrix(coords, "coords");
             ds.targets = to_matrix(targets, "targets");
             ds.shape = shape;
             ds.modality = parse_modality(modality);
             ds.sample_rate = sample_rate;
             std::size_t n = 1;
             for (std::size_t dim : shape) n *= dim;
             if (ds.coords.rows != ds.targets.rows || ds.coords.rows != n) {
               throw std::invalid_argument(
                   "Dataset: coords/targets rows must equal prod(shape)");
             }
             return ds;
           }),
           py::arg("coords"), py::arg("targets"), py::arg("shape"),
           py::arg("modality") = "image_gray", py::arg("sample_rate") = 0)
      .def_property_readonly(
          "coords", [](const CoordinateDataset& d) { return to_numpy(d.coords); })
      .def_property_readonly(
          "targets",
          [](const CoordinateDataset& d) { return to_numpy(d.targets); })
      .def_property_readonly(
          "shape",
          [](const CoordinateDataset& d) {
            py::tuple t(d.shape.size());
            for (std::size_t i = 0; i < d.shape.size(); ++i) t[i] = d.shape[i];
            return t;
          })
      .def_property_readonly(
          "modality",
          [](const CoordinateDataset& d) { return modality_name(d.modality); })
      .def_readonly("sample_rate", &CoordinateDataset::sample_rate)
      .def("__len__", &CoordinateDataset::size);

  m.def("load_signal", &load_signal, py::arg("path"),
        "Load .pgm/.ppm image, .wav audio or a .ppm frame directory");
  m.def(
      "save_image",
      [](const DoubleArray& outputs, const std::vector<std::size_t>& shape,
         const std::string& path, const std::string& format) {
        if (format != "pgm" && format != "ppm") {
          throw ConfigError("format must be pgm or ppm, got " + format);
        }
        save_image(to_matrix(outputs, "outputs"), shape, path,
                   format == "pgm" ? ImageFormat::pgm : ImageFormat::ppm);
      },
      py::arg("outputs"), py::arg("shape"), py::arg("path"), py::arg("format"));
  m.def(
      "save_audio",
      [](const DoubleArray& samples, const std::string& path,
         std::uint32_t sample_rate) {
        save_audio_wav(to_matrix(samples, "samples"), path, sample_rate);
      },
      py::arg("samples"), py::arg("path"), py::arg("sample_rate") = 8000);
  m.def(
      "make_coord_grid",
      [](const std::vector<std::size_t>& shape) {
        return to_numpy(make_coord_grid(shape));
      },
      py::arg("shape"));

  m.def("init_siren", &init_siren, py::arg("config"), py::arg("seed"),
        "Initialize SIREN parameters deterministically from a seed");

  m.def(
      "eval_loss",
      [](const MlpParams& params, const CoordinateDataset& ds,
         const std::string& family, double lambda,
         const std::string& noise_family, double noise_strength,
         const std::string& noise_scope, std::uint64_t noise_seed) {
        const LossSpec spec = make_loss_spec(family, lambda, noise_family,
                                             noise_strength, noise_scope);
        if (spec.family == LossFamily::noise_aware) {
          Rng rng(noise_seed);
          return eval_to_dict(eval_loss(params, ds, spec, &rng));
        }
        return eval_to_dict(eval_loss(params, ds, spec));
      },
      py::arg("params"), py::arg("dataset"), py::arg("family") = "mse",
      py::arg("lambda_") = 0.0, py::arg("noise_family") = "gaussian_mult",
      py::arg("noise_strength") = 0.0, py::arg("noise_scope") = "all_params",
      py::arg("noise_seed") = 0,
      "Loss value and flattened gradient for the given family");

  m.def(
      "perturb",
      [](const MlpParams& params, const std::string& family, double strength,
         const std::string& scope, std::uint64_t seed) {
        NoiseSpec spec;
        spec.family = parse_noise_family(family);
        spec.strength = strength;
        spec.scope = parse_noise_scope(scope);
        spec.seed = seed;
        return perturb(params, spec);
      },
      py::arg("params"), py::arg("family"), py::arg("strength"),
      py::arg("scope") = "all_params", py::arg("seed") = 0,
      "Perturbed copy of the parameters; the input is unchanged");

  m.def(
      "noisy_psnr",
      [](const MlpParams& params, const CoordinateDataset& ds,
         const std::string& family, double strength, const std::string& scope,
         std::uint64_t seed, int trials) {
        NoiseSpec spec;
        spec.family = parse_noise_family(family);
        spec.strength = strength;
        spec.scope = parse_noise_scope(scope);
        spec.seed = seed;
        const NoisyPsnrStats stats = noisy_psnr_stats(params, ds, spec, trials);
        return py::make_tuple(stats.mean_db, stats.std_db,
                              stats.per_trial_db);
      },
      py::arg("params"), py::arg("dataset"), py::arg("family"),
      py::arg("strength"), py::arg("scope") = "all_params",
      py::arg("seed") = 0, py::arg("trials") = 20,
      "Monte-Carlo perturbed PSNR: (mean_db, std_db, per_trial_db)");

  m.def(
      "taylor_gap",
      [](const MlpParams& params, const CoordinateDataset& ds,
         const std::string& family, double strength, std::uint64_t seed,
         int trials) {
        NoiseSpec spec;
        spec.family = parse_noise_family(family);
        spec.strength = strength;
        spec.seed = seed;
        py::list out;
        for (const auto& t : taylor_gap(params, spec, ds, trials)) {
          py::dict d;
          d["delta_l"] = t.delta_l;
          d["bound"] = t.bound;
          d["dtheta_norm"] = t.dtheta_norm;
          out.append(d);
        }
        return out;
      },
      py::arg("params"), py::arg("dataset"), py::arg("family"),
      py::arg("strength"), py::arg("seed") = 0, py::arg("trials") = 20);

  m.def(
      "train",
      [](const CoordinateDataset& ds, const SirenConfig& model, long epochs,
         std::uint64_t seed, const std::string& family, double lambda,
         double learning_rate, long log_every) {
        TrainConfig tc;
        tc.epochs = epochs;
        tc.seed = seed;
        tc.adam.learning_rate = learning_rate;
        tc.log_every = log_every;
        tc.loss = make_loss_spec(family, lambda, "gaussian_mult", 0.0,
                                 "all_params");
        auto [params, report] = train(ds, model, tc);
        py::list records;
        for (const auto& rec : report.records) {
          py::dict d;
          d["step"] = rec.step;
          d["data_term"] = rec.data_term;
          d["penalty_term"] = rec.penalty_term;
          d["total"] = rec.total;
          records.append(d);
        }
        return py::make_tuple(params, report.final_clean_psnr_db, records);
      },
      py::arg("dataset"), py::arg("model"), py::arg("epochs") = 500,
      py::arg("seed") = 42, py::arg("family") = "mse",
      py::arg("lambda_") = 0.0, py::arg("learning_rate") = 1e-4,
      py::arg("log_every") = 100,
      "Fit a SIREN; returns (model, clean_psnr_db, records)");

  m.def(
      "psnr",
      [](const DoubleArray& pred, const DoubleArray& target, double peak) {
        return psnr(to_matrix(pred, "pred"), to_matrix(target, "target"),
                    peak);
      },
      py::arg("pred"), py::arg("target"), py::arg("peak") = 1.0);
  m.def(
      "reconstruction_psnr",
      [](const DoubleArray& pred, const DoubleArray& target) {
        return reconstruction_psnr(to_matrix(pred, "pred"),
                                   to_matrix(target, "target"));
      },
      py::arg("pred"), py::arg("target"),
      "PSNR after remapping both signals from [-1,1] to [0,1], peak 1");

  m.def(
      "run_selfcheck",
      [](bool negative_control) {
        py::list out;
        for (const auto& r : run_selfcheck(negative_control)) {
          out.append(py::make_tuple(r.name, r.passed, r.detail));
        }
        return out;
      },
      py::arg("negative_control") = false,
      "Run the embedded verification battery; (name, passed, detail) per "
      "check");
}
