#include "codedtof/synthesis.hpp"

#include <cmath>

namespace codedtof {

int Kernel::half_support() const {
  const int n = static_cast<int>(samples.size());
  int s = 0;
  while (s + 1 <= n / 2 && samples[s + 1] != 0.0) ++s;
  return s;
}

Kernel build_kernel(const DerivedGrid& grid) {
  if (!(4.0 * grid.sigma_ns < grid.period_ns / 2.0)) {
    throw KernelTooWide("kernel support 4*sigma = " +
                        std::to_string(4.0 * grid.sigma_ns) +
                        " ns must stay below half the period " +
                        std::to_string(grid.period_ns / 2.0) + " ns");
  }
  Kernel k;
  k.dt_ns = grid.dt_ns;
  k.sigma_ns = grid.sigma_ns;
  k.samples.assign(grid.n_samples, 0.0);
  const double cutoff = 4.0 * grid.sigma_ns;
  for (int i = 0; i < grid.n_samples; ++i) {
    const double t = std::min(i, grid.n_samples - i) * grid.dt_ns;
    if (t <= cutoff)
      k.samples[i] = std::exp(-(t * t) / (2.0 * grid.sigma_ns * grid.sigma_ns));
  }
  return k;
}

std::vector<double> upsample_code_row(const std::uint8_t* row, int n,
                                      int n_steps) {
  std::vector<double> up(size_t(n) * n_steps);
  for (int c = 0; c < n; ++c) {
    const double v = row[c] ? 1.0 : 0.0;
    for (int s = 0; s < n_steps; ++s) up[size_t(c) * n_steps + s] = v;
  }
  return up;
}

namespace {

// value at fine index j of (up (*) kernel), summing signed kernel lags
// -s..s in ascending order so evaluation order is identical everywhere.
double convolve_at(const std::vector<double>& up, const Kernel& kernel, int j,
                   int half) {
  const int N = static_cast<int>(up.size());
  double acc = 0.0;
  for (int d = -half; d <= half; ++d) {
    const int ki = d >= 0 ? d : d + N;
    int src = j - d;
    src %= N;
    if (src < 0) src += N;
    acc += kernel.samples[ki] * up[src];
  }
  return acc;
}

}  // namespace

SensingMatrix synthesize(const BinaryCodeMatrix& codes, const Kernel& kernel,
                         const DerivedGrid& grid) {
  if (codes.cols != grid.n)
    throw DimensionMismatch("code has " + std::to_string(codes.cols) +
                            " chips, grid expects " + std::to_string(grid.n));
  if (static_cast<int>(kernel.samples.size()) != grid.n_samples)
    throw DimensionMismatch("kernel length does not match n_samples");
  SensingMatrix a;
  a.rows = codes.rows;
  a.cols = grid.n_samples;
  a.dt_ns = grid.dt_ns;
  a.data.assign(size_t(a.rows) * a.cols, 0.0);
  const int half = kernel.half_support();
  for (int r = 0; r < codes.rows; ++r) {
    const auto up = upsample_code_row(codes.data.data() + size_t(r) * codes.cols,
                                      codes.cols, grid.gamma_sr);
    double* out = a.row(r);
    for (int j = 0; j < a.cols; ++j) out[j] = convolve_at(up, kernel, j, half);
  }
  return a;
}

std::vector<double> column_template(const BinaryCodeMatrix& partial,
                                    int placed_cols,
                                    const std::vector<int>& combination,
                                    const Kernel& kernel,
                                    const DerivedGrid& grid, int position) {
  if (partial.cols != grid.n)
    throw DimensionMismatch("partial code width does not match grid");
  if (placed_cols < 0 || placed_cols >= grid.n)
    throw DimensionMismatch("placement column outside the code word");
  if (position < 0 || position >= grid.n_samples)
    throw DimensionMismatch("template position outside the fine grid");
  const int half = kernel.half_support();
  std::vector<double> t(partial.rows, 0.0);
  std::vector<std::uint8_t> row(partial.cols);
  for (int r = 0; r < partial.rows; ++r) {
    for (int c = 0; c < partial.cols; ++c)
      row[c] = c < placed_cols ? partial.at(r, c) : 0;
    for (int idx : combination)
      if (idx == r) row[placed_cols] = 1;
    const auto up = upsample_code_row(row.data(), partial.cols, grid.gamma_sr);
    t[r] = convolve_at(up, kernel, position, half);
  }
  return t;
}

}  // namespace codedtof
