// Python bindings for the core operations. Matrices cross the boundary as
// numpy arrays (codes: uint8, sensing matrices: float64); the fine-grid step
// dt travels separately where a function needs it.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "codedtof/analysis.hpp"
#include "codedtof/codegen.hpp"
#include "codedtof/errors.hpp"
#include "codedtof/model.hpp"
#include "codedtof/recovery.hpp"
#include "codedtof/shifts.hpp"
#include "codedtof/synthesis.hpp"
#include "codedtof/version.hpp"

namespace py = pybind11;
using namespace codedtof;

namespace {

BinaryCodeMatrix codes_from_numpy(
    const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>&
        arr) {
  if (arr.ndim() != 2) throw ConfigError("codes must be a 2-d array");
  BinaryCodeMatrix c;
  c.rows = static_cast<int>(arr.shape(0));
  c.cols = static_cast<int>(arr.shape(1));
  c.data.assign(arr.data(), arr.data() + arr.size());
  for (auto v : c.data)
    if (v > 1) throw ConfigError("code entries must be 0 or 1");
  return c;
}

py::array_t<std::uint8_t> codes_to_numpy(const BinaryCodeMatrix& c) {
  py::array_t<std::uint8_t> arr({c.rows, c.cols});
  std::copy(c.data.begin(), c.data.end(), arr.mutable_data());
  return arr;
}

SensingMatrix matrix_from_numpy(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
    double dt_ns) {
  if (arr.ndim() != 2) throw ConfigError("matrix must be a 2-d array");
  SensingMatrix a;
  a.rows = static_cast<int>(arr.shape(0));
  a.cols = static_cast<int>(arr.shape(1));
  a.dt_ns = dt_ns;
  a.data.assign(arr.data(), arr.data() + arr.size());
  return a;
}

py::array_t<double> matrix_to_numpy(const SensingMatrix& a) {
  py::array_t<double> arr({a.rows, a.cols});
  std::copy(a.data.begin(), a.data.end(), arr.mutable_data());
  return arr;
}

SceneResponse scene_from_targets(
    int n_samples, const std::vector<std::pair<int, double>>& targets) {
  SceneResponse scene;
  scene.n_samples = n_samples;
  scene.targets = targets;
  scene.validate();
  return scene;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Low-coherence sensing matrices for coded pulse-based "
              "time-of-flight sensing";
  mod.attr("__version__") = kVersion;
  mod.attr("SPEED_OF_LIGHT_M_PER_NS") = kSpeedOfLightMPerNs;

  py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
  py::register_exception<AlgorithmError>(mod, "AlgorithmError",
                                         PyExc_RuntimeError);

  py::class_<CameraConfig>(mod, "CameraConfig")
      .def(py::init([](double f_m_mhz, double f_r_mhz, int n_steps,
                       double fwhm_ns, int m, int n_deg) {
             CameraConfig c;
             c.f_m_mhz = f_m_mhz;
             c.f_r_mhz = f_r_mhz;
             c.n_steps = n_steps;
             c.fwhm_ns = fwhm_ns;
             c.m = m;
             c.n_deg = n_deg;
             return c;
           }),
           py::arg("f_m_mhz"), py::arg("f_r_mhz"), py::arg("n_steps"),
           py::arg("fwhm_ns"), py::arg("m"), py::arg("n_deg"))
      .def_readwrite("f_m_mhz", &CameraConfig::f_m_mhz)
      .def_readwrite("f_r_mhz", &CameraConfig::f_r_mhz)
      .def_readwrite("n_steps", &CameraConfig::n_steps)
      .def_readwrite("fwhm_ns", &CameraConfig::fwhm_ns)
      .def_readwrite("m", &CameraConfig::m)
      .def_readwrite("n_deg", &CameraConfig::n_deg);

  py::class_<DerivedGrid>(mod, "DerivedGrid")
      .def_readonly("n", &DerivedGrid::n)
      .def_readonly("n_samples", &DerivedGrid::n_samples)
      .def_readonly("chip_ns", &DerivedGrid::chip_ns)
      .def_readonly("dt_ns", &DerivedGrid::dt_ns)
      .def_readonly("period_ns", &DerivedGrid::period_ns)
      .def_readonly("gamma_sr", &DerivedGrid::gamma_sr)
      .def_readonly("sigma_ns", &DerivedGrid::sigma_ns);

  mod.def("validate_config", &validate_config, py::arg("config"));
  mod.def("derive_grid", &derive_grid, py::arg("config"));

  py::class_<Kernel>(mod, "Kernel")
      .def_property_readonly(
          "samples",
          [](const Kernel& k) {
            py::array_t<double> arr(py::ssize_t(k.samples.size()));
            std::copy(k.samples.begin(), k.samples.end(), arr.mutable_data());
            return arr;
          })
      .def_readonly("dt_ns", &Kernel::dt_ns)
      .def_readonly("sigma_ns", &Kernel::sigma_ns)
      .def("half_support", &Kernel::half_support);

  mod.def("build_kernel", &build_kernel, py::arg("grid"));

  mod.def(
      "gen_random",
      [](int m, int n, double p, std::uint64_t seed) {
        return codes_to_numpy(gen_random(m, n, p, seed));
      },
      py::arg("m"), py::arg("n"), py::arg("p"), py::arg("seed"));
  mod.def(
      "gen_she",
      [](int m, int n, std::uint64_t seed) {
        return codes_to_numpy(gen_she(m, n, seed));
      },
      py::arg("m"), py::arg("n"), py::arg("seed"));
  mod.def(
      "gen_peg",
      [](int m, int n, int n_deg) {
        return codes_to_numpy(gen_peg(m, n, n_deg));
      },
      py::arg("m"), py::arg("n"), py::arg("n_deg"));
  mod.def(
      "tanner_girth",
      [](const py::array_t<std::uint8_t,
                           py::array::c_style | py::array::forcecast>& codes) {
        return tanner_girth(codes_from_numpy(codes));
      },
      py::arg("codes"));
  mod.def(
      "gen_gcomb",
      [](int m, int n, int n_deg, const Kernel& kernel,
         const DerivedGrid& grid) {
        auto result = gen_gcomb(m, n, n_deg, kernel, grid);
        py::list trace;
        for (const auto& row : result.trace)
          trace.append(py::make_tuple(row.column_index, row.combination,
                                      row.rejected_count, row.objective));
        return py::make_tuple(codes_to_numpy(result.codes), trace,
                              result.row_weights);
      },
      py::arg("m"), py::arg("n"), py::arg("n_deg"), py::arg("kernel"),
      py::arg("grid"),
      "Returns (codes, trace rows, row weights); trace rows are tuples of "
      "(column index, combination, rejected count, objective).");

  mod.def(
      "synthesize",
      [](const py::array_t<std::uint8_t,
                           py::array::c_style | py::array::forcecast>& codes,
         const Kernel& kernel, const DerivedGrid& grid) {
        return matrix_to_numpy(synthesize(codes_from_numpy(codes), kernel,
                                          grid));
      },
      py::arg("codes"), py::arg("kernel"), py::arg("grid"));

  mod.def(
      "coherence",
      [](const py::array_t<double,
                           py::array::c_style | py::array::forcecast>& a) {
        return coherence(matrix_from_numpy(a, 0.0));
      },
      py::arg("a"));
  mod.def(
      "min_chordal_distance",
      [](const py::array_t<double,
                           py::array::c_style | py::array::forcecast>& a) {
        return min_chordal_distance(matrix_from_numpy(a, 0.0));
      },
      py::arg("a"));
  mod.def(
      "analyze",
      [](const py::array_t<double,
                           py::array::c_style | py::array::forcecast>& a,
         int n_bins, const std::vector<double>& thresholds) {
        const auto rep = analyze(matrix_from_numpy(a, 0.0), n_bins,
                                 thresholds);
        py::dict d;
        d["mu"] = rep.mu;
        d["min_chordal"] = rep.min_chordal;
        d["high_corr_pairs"] = rep.high_corr;
        py::array_t<long long> counts(py::ssize_t(rep.histogram.counts.size()));
        std::copy(rep.histogram.counts.begin(), rep.histogram.counts.end(),
                  counts.mutable_data());
        d["histogram_counts"] = counts;
        return d;
      },
      py::arg("a"), py::arg("n_bins") = 100,
      py::arg("thresholds") = std::vector<double>{0.9, 0.99, 0.999});

  mod.def(
      "apply_shifts",
      [](const py::array_t<double,
                           py::array::c_style | py::array::forcecast>& a,
         const ShiftVector& shifts) {
        return matrix_to_numpy(apply_shifts(matrix_from_numpy(a, 0.0),
                                            shifts));
      },
      py::arg("a"), py::arg("shifts"));
  mod.def("uniform_shifts", &uniform_shifts, py::arg("m"),
          py::arg("n_samples"));
  mod.def("random_shifts", &random_shifts, py::arg("m"), py::arg("n_samples"),
          py::arg("seed"));

  py::class_<ShiftResult>(mod, "ShiftResult")
      .def_readonly("shifts", &ShiftResult::shifts)
      .def_readonly("objective_before", &ShiftResult::objective_before)
      .def_readonly("objective_after", &ShiftResult::objective_after);

  mod.def(
      "greedy_shift_search",
      [](const py::array_t<double,
                           py::array::c_style | py::array::forcecast>& a,
         int passes, int threads) {
        return greedy_shift_search(matrix_from_numpy(a, 0.0), passes,
                                   threads);
      },
      py::arg("a"), py::arg("passes") = 1, py::arg("threads") = 1);

  py::class_<RecoveryResult>(mod, "RecoveryResult")
      .def_readonly("support", &RecoveryResult::support)
      .def_readonly("amplitudes", &RecoveryResult::amplitudes)
      .def_readonly("residual_norm", &RecoveryResult::residual_norm)
      .def_readonly("delays_ns", &RecoveryResult::delays_ns)
      .def_readonly("depths_m", &RecoveryResult::depths_m)
      .def_readonly("degenerate", &RecoveryResult::degenerate)
      .def_readonly("ill_conditioned", &RecoveryResult::ill_conditioned);

  mod.def(
      "measure",
      [](const py::array_t<double,
                           py::array::c_style | py::array::forcecast>& a,
         const std::vector<std::pair<int, double>>& targets,
         std::optional<double> snr_db, std::uint64_t seed, double dt_ns) {
        const auto mat = matrix_from_numpy(a, dt_ns);
        return measure(mat, scene_from_targets(mat.cols, targets), snr_db,
                       seed);
      },
      py::arg("a"), py::arg("targets"), py::arg("snr_db") = std::nullopt,
      py::arg("seed") = 0, py::arg("dt_ns") = 0.0);
  mod.def(
      "matched_filter",
      [](const py::array_t<double,
                           py::array::c_style | py::array::forcecast>& a,
         const std::vector<double>& y, double dt_ns) {
        return matched_filter(matrix_from_numpy(a, dt_ns), y);
      },
      py::arg("a"), py::arg("y"), py::arg("dt_ns") = 0.0);
  mod.def(
      "omp",
      [](const py::array_t<double,
                           py::array::c_style | py::array::forcecast>& a,
         const std::vector<double>& y, int k, double residual_tol,
         double dt_ns) {
        return omp(matrix_from_numpy(a, dt_ns), y, k, residual_tol);
      },
      py::arg("a"), py::arg("y"), py::arg("k"),
      py::arg("residual_tol") = 0.0, py::arg("dt_ns") = 0.0);
  mod.def("delay_to_depth", &delay_to_depth, py::arg("index"),
          py::arg("dt_ns"));
}
