#include "codedtof/recovery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "codedtof/prng.hpp"

namespace codedtof {

std::vector<double> measure(const SensingMatrix& a, const SceneResponse& scene,
                            std::optional<double> snr_db, std::uint64_t seed) {
  if (scene.n_samples != a.cols)
    throw DimensionMismatch("measure: scene grid differs from matrix columns");
  scene.validate();
  std::vector<double> y(a.rows, 0.0);
  for (const auto& [idx, amp] : scene.targets)
    for (int r = 0; r < a.rows; ++r) y[r] += amp * a.at(r, idx);
  if (snr_db && !(std::isinf(*snr_db) && *snr_db > 0.0)) {
    Prng noise = Prng(seed).derive("awgn");
    if (std::isinf(*snr_db)) {
      // -inf dB: the signal vanishes under the noise; emit unit noise.
      for (double& v : y) v = noise.next_gaussian();
    } else {
      double energy = 0.0;
      for (double v : y) energy += v * v;
      if (energy > 0.0) {
        const double sigma =
            std::sqrt(energy / (a.rows * std::pow(10.0, *snr_db / 10.0)));
        for (double& v : y) v += sigma * noise.next_gaussian();
      }
    }
  }
  return y;
}

namespace {

std::vector<double> column_norms(const SensingMatrix& a) {
  std::vector<double> nrm(a.cols, 0.0);
  for (int r = 0; r < a.rows; ++r)
    for (int j = 0; j < a.cols; ++j) nrm[j] += a.at(r, j) * a.at(r, j);
  for (int j = 0; j < a.cols; ++j) {
    if (!(nrm[j] > 0.0))
      throw ZeroColumn("column " + std::to_string(j) + " has zero norm");
    nrm[j] = std::sqrt(nrm[j]);
  }
  return nrm;
}

void finish(const SensingMatrix& a, RecoveryResult& res,
            std::vector<int> support, const Eigen::VectorXd& coef,
            const Eigen::VectorXd& residual) {
  // Report support ascending with amplitudes aligned.
  std::vector<int> order(support.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return support[x] < support[y]; });
  for (int i : order) {
    res.support.push_back(support[i]);
    res.amplitudes.push_back(coef[i]);
    res.delays_ns.push_back(support[i] * a.dt_ns);
    res.depths_m.push_back(delay_to_depth(support[i], a.dt_ns));
  }
  res.residual_norm = residual.norm();
}

}  // namespace

RecoveryResult matched_filter(const SensingMatrix& a,
                              const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != a.rows)
    throw DimensionMismatch("matched_filter: measurement length != rows");
  const auto nrm = column_norms(a);
  RecoveryResult res;
  double best = -1.0;
  int pick = 0;
  for (int j = 0; j < a.cols; ++j) {
    double ip = 0.0;
    for (int r = 0; r < a.rows; ++r) ip += a.at(r, j) * y[r];
    const double score = std::abs(ip) / nrm[j];
    if (score > best) {
      best = score;
      pick = j;
    }
  }
  double ynorm2 = 0.0;
  for (double v : y) ynorm2 += v * v;
  if (ynorm2 == 0.0) {
    res.degenerate = true;
    res.support.push_back(0);
    res.amplitudes.push_back(0.0);
    res.delays_ns.push_back(0.0);
    res.depths_m.push_back(0.0);
    res.residual_norm = 0.0;
    return res;
  }
  double ip = 0.0, cn2 = 0.0;
  for (int r = 0; r < a.rows; ++r) {
    ip += a.at(r, pick) * y[r];
    cn2 += a.at(r, pick) * a.at(r, pick);
  }
  const double amp = ip / cn2;
  double resid2 = 0.0;
  for (int r = 0; r < a.rows; ++r) {
    const double d = y[r] - amp * a.at(r, pick);
    resid2 += d * d;
  }
  res.support.push_back(pick);
  res.amplitudes.push_back(amp);
  res.delays_ns.push_back(pick * a.dt_ns);
  res.depths_m.push_back(delay_to_depth(pick, a.dt_ns));
  res.residual_norm = std::sqrt(resid2);
  return res;
}

RecoveryResult omp(const SensingMatrix& a, const std::vector<double>& y, int k,
                   double residual_tol) {
  if (static_cast<int>(y.size()) != a.rows)
    throw DimensionMismatch("omp: measurement length != rows");
  if (k < 1) throw ConfigError("omp: k must be >= 1");
  if (k > a.cols) throw ConfigError("omp: k exceeds the number of columns");
  const auto nrm = column_norms(a);

  RecoveryResult res;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      A(a.data.data(), a.rows, a.cols);
  Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());

  if (yv.norm() == 0.0) {
    res.degenerate = true;
    res.support.push_back(0);
    res.amplitudes.push_back(0.0);
    res.delays_ns.push_back(0.0);
    res.depths_m.push_back(0.0);
    return res;
  }

  std::vector<int> support;
  std::vector<char> selected(a.cols, 0);
  Eigen::VectorXd residual = yv;
  Eigen::VectorXd coef;
  while (static_cast<int>(support.size()) < k &&
         residual.norm() > residual_tol) {
    double best = -1.0;
    int pick = -1;
    for (int j = 0; j < a.cols; ++j) {
      if (selected[j]) continue;
      const double score = std::abs(A.col(j).dot(residual)) / nrm[j];
      if (score > best) {
        best = score;
        pick = j;
      }
    }
    if (pick < 0) break;
    selected[pick] = 1;
    support.push_back(pick);

    Eigen::MatrixXd sub(a.rows, support.size());
    for (size_t i = 0; i < support.size(); ++i) sub.col(i) = A.col(support[i]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(support.size()))
      res.ill_conditioned = true;
    coef = qr.solve(yv);
    residual = yv - sub * coef;
  }
  finish(a, res, std::move(support), coef, residual);
  return res;
}

double delay_to_depth(int index, double dt_ns) {
  return kSpeedOfLightMPerNs * (index * dt_ns) / 2.0;
}

namespace {

double circular_index_distance(int i, int j, int n) {
  int d = std::abs(i - j);
  return std::min(d, n - d);
}

}  // namespace

TrialStats recovery_trial_batch(const SensingMatrix& a, int k,
                                const std::vector<std::optional<double>>& snrs,
                                int n_trials, std::uint64_t seed) {
  if (k < 1 || k > a.cols)
    throw ConfigError("recovery_trial_batch: need 1 <= k <= n_samples");
  if (n_trials < 1)
    throw ConfigError("recovery_trial_batch: n_trials must be >= 1");
  TrialStats stats;
  const Prng root(seed);
  for (size_t si = 0; si < snrs.size(); ++si) {
    TrialAggregate agg;
    agg.snr_db = snrs[si] ? *snrs[si]
                          : std::numeric_limits<double>::infinity();
    agg.trials = n_trials;
    for (int t = 0; t < n_trials; ++t) {
      Prng stream = root.derive("snr" + std::to_string(si) + "-trial" +
                                std::to_string(t));
      SceneResponse scene;
      scene.n_samples = a.cols;
      std::vector<char> taken(a.cols, 0);
      for (int i = 0; i < k; ++i) {
        int idx;
        do {
          idx = static_cast<int>(stream.next_below(a.cols));
        } while (taken[idx]);
        taken[idx] = 1;
        scene.targets.emplace_back(idx, 0.5 + stream.next_double());
      }
      const auto y = measure(a, scene, snrs[si], stream.derive("noise").key());
      const auto rec = omp(a, y, k, 1e-12);

      std::vector<int> truth;
      for (const auto& [idx, amp] : scene.targets) truth.push_back(idx);
      std::sort(truth.begin(), truth.end());
      const bool exact = truth == rec.support;

      // Pair sorted supports entry by entry; measure circular distance.
      double delay_err = 0.0;
      const size_t pairs = std::min(truth.size(), rec.support.size());
      for (size_t i = 0; i < pairs; ++i)
        delay_err += circular_index_distance(truth[i], rec.support[i], a.cols) *
                     a.dt_ns;
      if (pairs > 0) delay_err /= double(pairs);
      const double depth_err = kSpeedOfLightMPerNs * delay_err / 2.0;

      stats.records.push_back({agg.snr_db, t, k, exact, delay_err, depth_err});
      agg.exact_rate += exact ? 1.0 : 0.0;
      agg.mean_delay_err_ns += delay_err;
      agg.mean_depth_err_m += depth_err;
    }
    agg.exact_rate /= n_trials;
    agg.mean_delay_err_ns /= n_trials;
    agg.mean_depth_err_m /= n_trials;
    stats.aggregates.push_back(agg);
  }
  return stats;
}

}  // namespace codedtof
