#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "codedtof/model.hpp"

namespace codedtof {

// Mutual coherence: max over unordered column pairs of |<a_k, a_j>| /
// (|a_k| |a_j|), clamped to [0, 1]. 0 for matrices with fewer than two
// columns. Throws ZeroColumn when a column has zero norm.
double coherence(const SensingMatrix& a);

// Full signed normalized Gram matrix, cols x cols, row-major, unit diagonal.
std::vector<double> gram_normalized(const SensingMatrix& a);

// Histogram of |rho| over unordered column pairs. Bins partition [0, 1];
// the last bin is closed on the right so |rho| = 1 lands in it.
struct Histogram {
  int n_bins = 0;
  std::vector<long long> counts;
  double bin_lo(int b) const { return double(b) / n_bins; }
  double bin_hi(int b) const { return double(b + 1) / n_bins; }
};

Histogram corr_histogram(const SensingMatrix& a, int n_bins);

// Number of unordered column pairs with |rho| strictly above theta.
long long high_corr_pairs(const SensingMatrix& a, double theta);

struct AnalysisReport {
  double mu = 0.0;
  double min_chordal = 0.0;
  Histogram histogram;
  std::map<double, long long> high_corr;  // threshold -> pair count
};

AnalysisReport analyze(const SensingMatrix& a, int n_bins,
                       const std::vector<double>& thresholds);

enum class Generator { kRandom, kShe, kPeg, kGComb };

struct SweepPoint {
  double eta = 0.0;  // aspect ratio m / n
  int n = 0;
  int realization = 0;
  double mu = 0.0;
};

struct SweepAggregate {
  int n = 0;
  double eta = 0.0;
  int n_real = 0;
  double mean_mu = 0.0;
  double max_mu = 0.0;
  double fraction_at_one = 0.0;  // share of realizations with mu >= 1 - 1e-9
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<SweepAggregate> aggregates;
};

// Coherence versus aspect ratio. For each n in n_list a config is built from
// `base` with f_r = f_m / n, codes are generated, synthesized and measured.
// Stochastic generators (random, she) run n_real seeded realizations with
// streams derived per (generator, n, realization); deterministic generators
// (peg, gcomb) run once per n. A matrix containing an all-zero column counts
// as mu = 1: such a column makes its delay unrecoverable, which is exactly
// what the fraction_at_one statistic is meant to expose.
SweepResult sweep_coherence(Generator gen, double p, const CameraConfig& base,
                            const std::vector<int>& n_list, int n_real,
                            std::uint64_t seed);

}  // namespace codedtof
