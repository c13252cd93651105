#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "codedtof/errors.hpp"

namespace codedtof {

// Speed of light in metres per nanosecond.
inline constexpr double kSpeedOfLightMPerNs = 0.299792458;

// Operational camera parameters. Frequencies are configured in MHz; every
// derived time quantity in the toolkit is expressed in nanoseconds.
struct CameraConfig {
  double f_m_mhz = 0.0;  // modulation frequency (one code chip per cycle)
  double f_r_mhz = 0.0;  // repetition frequency (one code word per cycle)
  int n_steps = 1;       // fine-grid sub-steps per chip
  double fwhm_ns = 0.0;  // FWHM of the Gaussian cross-correlation kernel
  int m = 0;             // number of measurements (matrix rows)
  int n_deg = 0;         // ones per code column (column degree)
};

// Returns a list of human-readable violations; empty means valid. Each entry
// names the offending field and the rule it breaks.
std::vector<std::string> validate_config(const CameraConfig& config);

// Grid quantities derived from a valid CameraConfig.
struct DerivedGrid {
  int n = 0;               // code length in chips, f_m / f_r
  int n_samples = 0;       // fine-grid length, n * n_steps
  double chip_ns = 0.0;    // chip duration, 1000 / f_m_mhz
  double dt_ns = 0.0;      // fine-grid step, chip_ns / n_steps
  double period_ns = 0.0;  // repetition period, 1000 / f_r_mhz
  int gamma_sr = 0;        // super-resolution factor, n_samples / n
  double sigma_ns = 0.0;   // kernel std dev, fwhm / (2 sqrt(2 ln 2))
};

// Throws NonIntegerCodeLength when f_m / f_r is not an integer (relative
// tolerance 1e-9) and ConfigError when validate_config reports violations.
DerivedGrid derive_grid(const CameraConfig& config);

// Dense 0/1 code matrix, row-major. Rows are measurement codes, columns are
// chips of the code word.
struct BinaryCodeMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;  // rows * cols entries in {0, 1}

  std::uint8_t at(int r, int c) const { return data[size_t(r) * cols + c]; }
  std::uint8_t& at(int r, int c) { return data[size_t(r) * cols + c]; }

  std::vector<int> column_support(int c) const;
  std::vector<int> row_sums() const;
  std::vector<int> col_sums() const;
};

// Dense real matrix, row-major, with the fine-grid step attached so delay
// and depth conversions stay unambiguous.
struct SensingMatrix {
  int rows = 0;
  int cols = 0;
  double dt_ns = 0.0;
  std::vector<double> data;  // rows * cols, row-major

  double at(int r, int c) const { return data[size_t(r) * cols + c]; }
  double& at(int r, int c) { return data[size_t(r) * cols + c]; }
  const double* row(int r) const { return data.data() + size_t(r) * cols; }
  double* row(int r) { return data.data() + size_t(r) * cols; }
};

// Sparse scene: distinct fine-grid delay indices with positive amplitudes.
struct SceneResponse {
  int n_samples = 0;
  std::vector<std::pair<int, double>> targets;  // (index, amplitude)

  // Throws ConfigError on out-of-range or duplicate indices, or on
  // non-positive amplitudes.
  void validate() const;
};

// Per-row circular offsets, in fine-grid samples.
using ShiftVector = std::vector<int>;

}  // namespace codedtof
