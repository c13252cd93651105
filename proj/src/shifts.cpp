#include "codedtof/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <thread>

#include "codedtof/prng.hpp"

namespace codedtof {

SensingMatrix apply_shifts(const SensingMatrix& a, const ShiftVector& shifts) {
  if (static_cast<int>(shifts.size()) != a.rows)
    throw DimensionMismatch("apply_shifts: one offset per row required");
  SensingMatrix out = a;
  const int n = a.cols;
  for (int r = 0; r < a.rows; ++r) {
    int s = shifts[r] % n;
    if (s < 0) s += n;
    const double* src = a.row(r);
    double* dst = out.row(r);
    // dst[j] = src[(j - s) mod n]: the tail of src lands at the front.
    std::rotate_copy(src, src + (n - s), src + n, dst);
  }
  return out;
}

namespace {

std::vector<double> column_norms2(const SensingMatrix& a) {
  std::vector<double> q(a.cols, 0.0);
  for (int r = 0; r < a.rows; ++r) {
    const double* row = a.row(r);
    for (int j = 0; j < a.cols; ++j) q[j] += row[j] * row[j];
  }
  for (int j = 0; j < a.cols; ++j)
    if (!(q[j] > 0.0))
      throw ZeroColumn("column " + std::to_string(j) + " has zero norm");
  return q;
}

}  // namespace

double min_chordal_distance(const SensingMatrix& a) {
  const auto q = column_norms2(a);
  const int n = a.cols;
  if (n < 2) return 1.0;
  double min_dist = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < n; ++k) {
    for (int j = k + 1; j < n; ++j) {
      double ip = 0.0;
      for (int r = 0; r < a.rows; ++r) ip += a.at(r, k) * a.at(r, j);
      double rho2 = (ip * ip) / (q[k] * q[j]);
      if (rho2 > 1.0) rho2 = 1.0;
      const double dist = std::sqrt(1.0 - rho2);
      if (dist < min_dist) min_dist = dist;
    }
  }
  return min_dist;
}

ShiftVector uniform_shifts(int m, int n_samples) {
  if (m < 1 || n_samples < 1)
    throw ConfigError("uniform_shifts: m and n_samples must be positive");
  ShiftVector s(m);
  for (int i = 0; i < m; ++i)
    s[i] = static_cast<int>((long long)i * n_samples / m);
  return s;
}

ShiftVector random_shifts(int m, int n_samples, std::uint64_t seed) {
  if (m < 1 || n_samples < 1)
    throw ConfigError("random_shifts: m and n_samples must be positive");
  Prng stream = Prng(seed).derive("random-shifts");
  ShiftVector s(m);
  for (int i = 0; i < m; ++i)
    s[i] = static_cast<int>(stream.next_below(n_samples));
  return s;
}

namespace {

// Selection key for one candidate offset: the largest squared correlation
// over all column pairs, plus how many pairs sit at that maximum (within
// 1e-12). Smaller max wins; on an exact tie, fewer pairs at the max wins.
struct OffsetKey {
  double max_rho2 = -1.0;
  long long ties = 0;
  bool feasible = true;  // false when some column norm collapses to zero

  bool better_than(const OffsetKey& o) const {
    if (feasible != o.feasible) return feasible;
    if (max_rho2 != o.max_rho2) return max_rho2 < o.max_rho2;
    return ties < o.ties;
  }
};

constexpr double kTieEps = 1e-12;

// Scans all column pairs for one candidate offset of the active row.
// gram_rest / q_rest hold the Gram matrix and squared norms of the matrix
// with the active row removed; w is the active row rotated by the offset.
// Returns false when the running key already proves the offset cannot beat
// `best` (prune is exact: only strictly worse candidates are abandoned).
bool scan_offset(const double* gram_rest, const double* q_rest,
                 const double* w, int n, const OffsetKey* best,
                 OffsetKey* out, double* nrm) {
  for (int j = 0; j < n; ++j) {
    nrm[j] = q_rest[j] + w[j] * w[j];
    if (!(nrm[j] > 0.0)) {
      out->feasible = false;
      return false;
    }
  }
  double cur_max = -1.0;
  long long ties = 0;
  for (int k = 0; k + 1 < n; ++k) {
    const double* grow = gram_rest + size_t(k) * n;
    const double wk = w[k];
    const double nk = nrm[k];
    const double bar = (cur_max - kTieEps) * nk;
    double local_bar = bar;
    for (int j = k + 1; j < n; ++j) {
      const double ip = grow[j] + wk * w[j];
      const double num = ip * ip;
      if (num > local_bar * nrm[j]) {
        const double den = nk * nrm[j];
        const double rho2 = num / den;
        if (rho2 > cur_max) {
          ties = (cur_max >= 0.0 && rho2 - cur_max <= kTieEps) ? ties + 1 : 1;
          cur_max = rho2;
          if (best) {
            if (cur_max > best->max_rho2) return false;
            if (cur_max == best->max_rho2 && ties > best->ties) return false;
          }
        } else if (rho2 >= cur_max - kTieEps) {
          ++ties;
          if (best && cur_max == best->max_rho2 && ties > best->ties)
            return false;
        }
        local_bar = (cur_max - kTieEps) * nk;
      }
    }
  }
  out->max_rho2 = cur_max;
  out->ties = ties;
  return true;
}

struct RowSearchResult {
  int offset = 0;
  OffsetKey key;
};

// Best offset for the active row given gram_rest/q_rest and the unshifted
// row contents. Offsets ascend, so ties keep the smallest one.
RowSearchResult search_row(const double* gram_rest, const double* q_rest,
                           const double* row0, int n, int threads) {
  const auto scan_range = [&](int lo, int hi, const OffsetKey* seed_best,
                              RowSearchResult* res) {
    std::vector<double> w(n), nrm(n);
    bool have = false;
    for (int off = lo; off < hi; ++off) {
      std::rotate_copy(row0, row0 + (n - off), row0 + n, w.data());
      OffsetKey key;
      const OffsetKey* best = have ? &res->key : seed_best;
      if (scan_offset(gram_rest, q_rest, w.data(), n, best, &key, nrm.data())) {
        if (!have || key.better_than(res->key)) {
          res->offset = off;
          res->key = key;
          have = true;
        }
      }
    }
    if (!have) res->offset = -1;
  };

  if (threads <= 1 || n < 4 * threads) {
    RowSearchResult res;
    scan_range(0, n, nullptr, &res);
    if (res.offset < 0)
      throw ZeroColumn("every offset of a row produced a zero-norm column");
    return res;
  }

  // Parallel: each chunk keeps its own best; merge in ascending chunk order
  // so the outcome matches the sequential scan exactly.
  const int t = std::min(threads, n);
  std::vector<RowSearchResult> partial(t);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int i = 0; i < t; ++i) {
    const int lo = static_cast<int>((long long)i * n / t);
    const int hi = static_cast<int>((long long)(i + 1) * n / t);
    pool.emplace_back(scan_range, lo, hi, nullptr, &partial[i]);
  }
  for (auto& th : pool) th.join();
  RowSearchResult res;
  bool have = false;
  for (const auto& pr : partial) {
    if (pr.offset < 0) continue;
    if (!have || pr.key.better_than(res.key)) {
      res = pr;
      have = true;
    }
  }
  if (!have)
    throw ZeroColumn("every offset of a row produced a zero-norm column");
  return res;
}

}  // namespace

ShiftResult greedy_shift_search(const SensingMatrix& a, int passes,
                                int threads) {
  if (passes < 1) throw ConfigError("greedy_shift_search: passes must be >= 1");
  if (threads < 1)
    throw ConfigError("greedy_shift_search: threads must be >= 1");
  const int m = a.rows, n = a.cols;
  ShiftResult result;
  result.shifts.assign(m, 0);
  result.objective_before = min_chordal_distance(a);
  result.objective_after = result.objective_before;
  if (n < 2) {
    return result;  // nothing to separate; all offsets equivalent
  }

  // Rows under their committed shifts; pass 1 starts from the input as-is.
  std::vector<std::vector<double>> rows(m, std::vector<double>(n));
  for (int r = 0; r < m; ++r)
    std::copy(a.row(r), a.row(r) + n, rows[r].begin());

  std::vector<double> gram_rest(size_t(n) * n);
  std::vector<double> q_rest(n);
  std::vector<double> row0(n);

  for (int pass = 0; pass < passes; ++pass) {
    for (int i = 0; i < m; ++i) {
      // Gram and squared norms of the matrix without row i, fresh each time.
      std::fill(gram_rest.begin(), gram_rest.end(), 0.0);
      std::fill(q_rest.begin(), q_rest.end(), 0.0);
      for (int r = 0; r < m; ++r) {
        if (r == i) continue;
        const double* w = rows[r].data();
        for (int k = 0; k < n; ++k) {
          const double wk = w[k];
          if (wk == 0.0) {
            continue;
          }
          q_rest[k] += wk * wk;
          double* grow = gram_rest.data() + size_t(k) * n;
          for (int j = k + 1; j < n; ++j) grow[j] += wk * w[j];
        }
      }
      std::copy(a.row(i), a.row(i) + n, row0.begin());
      const auto found = search_row(gram_rest.data(), q_rest.data(),
                                    row0.data(), n, threads);
      result.shifts[i] = found.offset;
      // Commit the row under its new offset.
      std::rotate_copy(row0.begin(), row0.end() - found.offset, row0.end(),
                       rows[i].begin());
      const double clamped = std::max(0.0, 1.0 - found.key.max_rho2);
      result.trajectory.push_back(
          {pass, i, found.offset, std::sqrt(clamped)});
    }
  }
  result.objective_after = result.trajectory.back().objective;
  return result;
}

}  // namespace codedtof
