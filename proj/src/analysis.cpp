#include "codedtof/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "codedtof/codegen.hpp"
#include "codedtof/prng.hpp"
#include "codedtof/synthesis.hpp"

namespace codedtof {

namespace {

std::vector<double> column_norms(const SensingMatrix& a) {
  std::vector<double> q(a.cols, 0.0);
  for (int r = 0; r < a.rows; ++r) {
    const double* row = a.row(r);
    for (int j = 0; j < a.cols; ++j) q[j] += row[j] * row[j];
  }
  for (int j = 0; j < a.cols; ++j) {
    if (!(q[j] > 0.0))
      throw ZeroColumn("column " + std::to_string(j) + " has zero norm");
    q[j] = std::sqrt(q[j]);
  }
  return q;
}

double pair_abs_rho(const SensingMatrix& a, const std::vector<double>& nrm,
                    int k, int j) {
  double ip = 0.0;
  for (int r = 0; r < a.rows; ++r) ip += a.at(r, k) * a.at(r, j);
  double rho = std::abs(ip) / (nrm[k] * nrm[j]);
  return rho > 1.0 ? 1.0 : rho;
}

}  // namespace

double coherence(const SensingMatrix& a) {
  const auto nrm = column_norms(a);
  double mu = 0.0;
  for (int k = 0; k + 1 < a.cols; ++k)
    for (int j = k + 1; j < a.cols; ++j)
      mu = std::max(mu, pair_abs_rho(a, nrm, k, j));
  return mu;
}

std::vector<double> gram_normalized(const SensingMatrix& a) {
  const auto nrm = column_norms(a);
  const int n = a.cols;
  std::vector<double> g(size_t(n) * n, 0.0);
  for (int k = 0; k < n; ++k) g[size_t(k) * n + k] = 1.0;
  for (int k = 0; k + 1 < n; ++k) {
    for (int j = k + 1; j < n; ++j) {
      double ip = 0.0;
      for (int r = 0; r < a.rows; ++r) ip += a.at(r, k) * a.at(r, j);
      double rho = ip / (nrm[k] * nrm[j]);
      rho = std::clamp(rho, -1.0, 1.0);
      g[size_t(k) * n + j] = rho;
      g[size_t(j) * n + k] = rho;
    }
  }
  return g;
}

Histogram corr_histogram(const SensingMatrix& a, int n_bins) {
  if (n_bins < 1) throw ConfigError("corr_histogram: n_bins must be >= 1");
  const auto nrm = column_norms(a);
  Histogram h;
  h.n_bins = n_bins;
  h.counts.assign(n_bins, 0);
  for (int k = 0; k + 1 < a.cols; ++k) {
    for (int j = k + 1; j < a.cols; ++j) {
      const double rho = pair_abs_rho(a, nrm, k, j);
      int bin = static_cast<int>(rho * n_bins);
      if (bin >= n_bins) bin = n_bins - 1;  // |rho| = 1 closes the last bin
      ++h.counts[bin];
    }
  }
  return h;
}

long long high_corr_pairs(const SensingMatrix& a, double theta) {
  const auto nrm = column_norms(a);
  long long count = 0;
  for (int k = 0; k + 1 < a.cols; ++k)
    for (int j = k + 1; j < a.cols; ++j)
      if (pair_abs_rho(a, nrm, k, j) > theta) ++count;
  return count;
}

AnalysisReport analyze(const SensingMatrix& a, int n_bins,
                       const std::vector<double>& thresholds) {
  if (n_bins < 1) throw ConfigError("analyze: n_bins must be >= 1");
  const auto nrm = column_norms(a);
  AnalysisReport rep;
  rep.histogram.n_bins = n_bins;
  rep.histogram.counts.assign(n_bins, 0);
  for (double t : thresholds) rep.high_corr[t] = 0;
  double mu = 0.0;
  for (int k = 0; k + 1 < a.cols; ++k) {
    for (int j = k + 1; j < a.cols; ++j) {
      const double rho = pair_abs_rho(a, nrm, k, j);
      mu = std::max(mu, rho);
      int bin = static_cast<int>(rho * n_bins);
      if (bin >= n_bins) bin = n_bins - 1;
      ++rep.histogram.counts[bin];
      for (auto& [t, c] : rep.high_corr)
        if (rho > t) ++c;
    }
  }
  rep.mu = mu;
  rep.min_chordal = std::sqrt(std::max(0.0, 1.0 - mu * mu));
  return rep;
}

SweepResult sweep_coherence(Generator gen, double p, const CameraConfig& base,
                            const std::vector<int>& n_list, int n_real,
                            std::uint64_t seed) {
  if (n_real < 1) throw ConfigError("sweep_coherence: n_real must be >= 1");
  const bool deterministic =
      gen == Generator::kPeg || gen == Generator::kGComb;
  SweepResult result;
  for (int n : n_list) {
    if (n < 1) throw ConfigError("sweep_coherence: n must be positive");
    CameraConfig cfg = base;
    cfg.f_r_mhz = cfg.f_m_mhz / n;
    const DerivedGrid grid = derive_grid(cfg);
    const Kernel kernel = build_kernel(grid);
    const int reals = deterministic ? 1 : n_real;
    SweepAggregate agg;
    agg.n = n;
    agg.eta = double(cfg.m) / double(n);
    agg.n_real = reals;
    for (int r = 0; r < reals; ++r) {
      BinaryCodeMatrix codes;
      switch (gen) {
        case Generator::kRandom: {
          const auto stream = Prng(seed).derive(
              "sweep-random-n" + std::to_string(n) + "-r" + std::to_string(r));
          codes = gen_random(cfg.m, n, p, stream.key());
          break;
        }
        case Generator::kShe: {
          const auto stream = Prng(seed).derive(
              "sweep-she-n" + std::to_string(n) + "-r" + std::to_string(r));
          codes = gen_she(cfg.m, n, stream.key());
          break;
        }
        case Generator::kPeg:
          codes = gen_peg(cfg.m, n, cfg.n_deg);
          break;
        case Generator::kGComb:
          codes = gen_gcomb(cfg.m, n, cfg.n_deg, kernel, grid).codes;
          break;
      }
      const SensingMatrix a = synthesize(codes, kernel, grid);
      double mu;
      try {
        mu = coherence(a);
      } catch (const ZeroColumn&) {
        mu = 1.0;  // an all-zero column makes that delay unrecoverable
      }
      result.points.push_back({agg.eta, n, r, mu});
      agg.mean_mu += mu;
      agg.max_mu = std::max(agg.max_mu, mu);
      if (mu >= 1.0 - 1e-9) agg.fraction_at_one += 1.0;
    }
    agg.mean_mu /= reals;
    agg.fraction_at_one /= reals;
    result.aggregates.push_back(agg);
  }
  return result;
}

}  // namespace codedtof
