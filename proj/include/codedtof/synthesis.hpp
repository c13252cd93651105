#pragma once

#include <vector>

#include "codedtof/model.hpp"

namespace codedtof {

// Periodic Gaussian cross-correlation kernel on the fine grid. samples[k]
// holds exp(-t_k^2 / (2 sigma^2)) with t_k = min(k, n_samples - k) * dt and
// is exactly zero where t_k > 4 sigma; the peak at k = 0 is exactly 1.
struct Kernel {
  std::vector<double> samples;
  double dt_ns = 0.0;
  double sigma_ns = 0.0;

  // Largest k with k * dt <= 4 sigma: half-width of the truncated support.
  int half_support() const;
};

// Throws KernelTooWide unless 4 sigma < period / 2.
Kernel build_kernel(const DerivedGrid& grid);

// Zero-order hold: each chip value repeated n_steps times.
std::vector<double> upsample_code_row(const std::uint8_t* row, int n,
                                      int n_steps);

// Circular time-domain convolution of every upsampled code row with the
// kernel. Output is m x n_samples with dt attached.
SensingMatrix synthesize(const BinaryCodeMatrix& codes, const Kernel& kernel,
                         const DerivedGrid& grid);

// What column `position` (a fine-grid index) of the synthesized matrix would
// be if `combination` (row indices) were placed as chip column `placed_cols`
// of `partial`, whose columns at index >= placed_cols must be zero. Used by
// the combinatorial generator to score candidates before committing them.
std::vector<double> column_template(const BinaryCodeMatrix& partial,
                                    int placed_cols,
                                    const std::vector<int>& combination,
                                    const Kernel& kernel,
                                    const DerivedGrid& grid, int position);

}  // namespace codedtof
