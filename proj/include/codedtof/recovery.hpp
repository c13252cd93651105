#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "codedtof/model.hpp"

namespace codedtof {

// y = A x, optionally with additive white Gaussian noise calibrated so that
// 10 log10(|Ax|^2 / (m sigma_n^2)) equals snr_db. No snr means noiseless;
// a zero signal stays noiseless by convention. Noise comes from
// derive(seed, "awgn").
std::vector<double> measure(const SensingMatrix& a, const SceneResponse& scene,
                            std::optional<double> snr_db, std::uint64_t seed);

struct RecoveryResult {
  std::vector<int> support;        // ascending fine-grid indices
  std::vector<double> amplitudes;  // least-squares fit, aligned with support
  double residual_norm = 0.0;
  std::vector<double> delays_ns;   // index * dt per support entry
  std::vector<double> depths_m;    // c * delay / 2 per support entry
  bool degenerate = false;         // y was zero: support is the tie-break 0
  bool ill_conditioned = false;    // a least-squares subproblem lost rank
};

// Single-target matched filter: argmax_j |<a_j, y>| / |a_j| (smallest index
// on exact ties), amplitude refit by least squares on the winning column.
RecoveryResult matched_filter(const SensingMatrix& a,
                              const std::vector<double>& y);

// Orthogonal matching pursuit: selects up to k atoms, refitting all selected
// amplitudes by least squares each iteration; stops early once the residual
// norm drops to residual_tol. Rank loss beyond threshold 1e-10 in a refit is
// reported through ill_conditioned, not fatal.
RecoveryResult omp(const SensingMatrix& a, const std::vector<double>& y, int k,
                   double residual_tol = 0.0);

// Round-trip depth of a fine-grid delay index: c * (index * dt) / 2.
double delay_to_depth(int index, double dt_ns);

struct TrialRecord {
  double snr_db = 0.0;  // +inf encodes a noiseless trial
  int trial = 0;
  int k = 0;
  bool exact_support = false;
  double delay_err_ns = 0.0;
  double depth_err_m = 0.0;
};

struct TrialAggregate {
  double snr_db = 0.0;
  int trials = 0;
  double exact_rate = 0.0;
  double mean_delay_err_ns = 0.0;
  double mean_depth_err_m = 0.0;
};

struct TrialStats {
  std::vector<TrialRecord> records;
  std::vector<TrialAggregate> aggregates;
};

// Monte Carlo recovery batch: for each SNR level and trial, draws a k-sparse
// scene (distinct uniform indices, amplitudes uniform on [0.5, 1.5]),
// measures it and recovers with OMP. Streams are derived per (snr index,
// trial), so results are independent of evaluation order. The delay error of
// a trial pairs true and recovered supports in sorted order and averages the
// circular index distance times dt.
TrialStats recovery_trial_batch(const SensingMatrix& a, int k,
                                const std::vector<std::optional<double>>& snrs,
                                int n_trials, std::uint64_t seed);

}  // namespace codedtof
