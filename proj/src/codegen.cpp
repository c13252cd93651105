#include "codedtof/codegen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>

#include "codedtof/prng.hpp"

namespace codedtof {

BinaryCodeMatrix gen_random(int m, int n, double p, std::uint64_t seed) {
  if (m < 1 || n < 1) throw ConfigError("gen_random: m and n must be positive");
  if (!(p >= 0.0 && p <= 1.0))
    throw ConfigError("gen_random: p must lie in [0, 1]");
  Prng stream = Prng(seed).derive("random-code");
  BinaryCodeMatrix c;
  c.rows = m;
  c.cols = n;
  c.data.resize(size_t(m) * n);
  for (auto& v : c.data) v = stream.next_double() < p ? 1 : 0;
  return c;
}

BinaryCodeMatrix she_from(int order, const std::vector<std::uint32_t>& row_sel,
                          const std::vector<std::uint32_t>& col_perm, int n) {
  if (order < 1 || (order & (order - 1)) != 0)
    throw ConfigError("she_from: order must be a power of two");
  if (n < 1 || n > order)
    throw ConfigError("she_from: need 1 <= n <= order");
  if (static_cast<int>(col_perm.size()) < n)
    throw ConfigError("she_from: column permutation too short");
  BinaryCodeMatrix c;
  c.rows = static_cast<int>(row_sel.size());
  c.cols = n;
  c.data.resize(size_t(c.rows) * n);
  for (int i = 0; i < c.rows; ++i) {
    const std::uint32_t r = row_sel[i];
    for (int j = 0; j < n; ++j) {
      // Sylvester-Hadamard entry (-1)^popcount(r & c), rescaled (h+1)/2.
      const std::uint32_t bits = r & col_perm[j];
      c.at(i, j) = (std::popcount(bits) % 2 == 0) ? 1 : 0;
    }
  }
  return c;
}

BinaryCodeMatrix gen_she(int m, int n, std::uint64_t seed, int max_order) {
  if (m < 1 || n < 1) throw ConfigError("gen_she: m and n must be positive");
  int order = 1;
  while (order < std::max(m, n)) {
    order <<= 1;
    if (order > max_order)
      throw SizeUnsupported("gen_she: Hadamard order " + std::to_string(order) +
                            " exceeds the supported maximum " +
                            std::to_string(max_order));
  }
  Prng prng(seed);
  const auto perm = prng.derive("she-perm").permutation(order);
  const auto rows = prng.derive("she-rows").sample_without_replacement(
      order, static_cast<std::uint32_t>(m));
  return she_from(order, rows, perm, n);
}

namespace {

struct PegGraph {
  int m = 0;
  std::vector<int> check_deg;
  std::vector<std::vector<int>> var_adj;    // variable -> checks
  std::vector<std::vector<int>> check_adj;  // check -> variables
};

// BFS distances from variable v to every check node; -1 marks unreachable.
std::vector<int> check_distances(const PegGraph& g, int v) {
  std::vector<int> dist_var(g.var_adj.size(), -1);
  std::vector<int> dist_check(g.m, -1);
  std::deque<std::pair<bool, int>> queue;  // (is_check, index)
  dist_var[v] = 0;
  queue.emplace_back(false, v);
  while (!queue.empty()) {
    const auto [is_check, idx] = queue.front();
    queue.pop_front();
    if (is_check) {
      for (int w : g.check_adj[idx]) {
        if (dist_var[w] < 0) {
          dist_var[w] = dist_check[idx] + 1;
          queue.emplace_back(false, w);
        }
      }
    } else {
      for (int c : g.var_adj[idx]) {
        if (dist_check[c] < 0) {
          dist_check[c] = dist_var[idx] + 1;
          queue.emplace_back(true, c);
        }
      }
    }
  }
  return dist_check;
}

}  // namespace

BinaryCodeMatrix gen_peg(int m, int n, int n_deg) {
  if (m < 1 || n < 1) throw ConfigError("gen_peg: m and n must be positive");
  if (n_deg < 1 || n_deg > m)
    throw ConfigError("gen_peg: need 1 <= n_deg <= m");
  PegGraph g;
  g.m = m;
  g.check_deg.assign(m, 0);
  g.var_adj.resize(n);
  g.check_adj.resize(m);
  std::vector<char> adjacent(m);
  for (int v = 0; v < n; ++v) {
    std::fill(adjacent.begin(), adjacent.end(), 0);
    for (int e = 0; e < n_deg; ++e) {
      int pick = -1;
      if (e == 0) {
        for (int c = 0; c < m; ++c)
          if (pick < 0 || g.check_deg[c] < g.check_deg[pick]) pick = c;
      } else {
        const auto dist = check_distances(g, v);
        long long best_dist = -1;
        constexpr long long kUnreachable = std::numeric_limits<int>::max();
        for (int c = 0; c < m; ++c) {
          if (adjacent[c]) continue;
          const long long d = dist[c] < 0 ? kUnreachable : dist[c];
          bool better;
          if (pick < 0)
            better = true;
          else if (d != best_dist)
            better = d > best_dist;
          else
            better = g.check_deg[c] < g.check_deg[pick];
          if (better) {
            pick = c;
            best_dist = d;
          }
        }
      }
      if (pick < 0) throw AlgorithmError("gen_peg: no available check node");
      adjacent[pick] = 1;
      g.var_adj[v].push_back(pick);
      g.check_adj[pick].push_back(v);
      ++g.check_deg[pick];
    }
  }
  BinaryCodeMatrix c;
  c.rows = m;
  c.cols = n;
  c.data.assign(size_t(m) * n, 0);
  for (int v = 0; v < n; ++v)
    for (int ck : g.var_adj[v]) c.at(ck, v) = 1;
  return c;
}

std::optional<int> tanner_girth(const BinaryCodeMatrix& codes) {
  const int n = codes.cols, m = codes.rows;
  // Node ids: variables [0, n), checks [n, n + m).
  std::vector<std::vector<int>> adj(n + m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c)
      if (codes.at(r, c)) {
        adj[c].push_back(n + r);
        adj[n + r].push_back(c);
      }
  int girth = std::numeric_limits<int>::max();
  std::vector<int> dist(n + m), parent(n + m);
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent.begin(), parent.end(), -1);
    std::deque<int> queue{s};
    dist[s] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int w : adj[u]) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push_back(w);
        } else if (w != parent[u]) {
          girth = std::min(girth, dist[u] + dist[w] + 1);
        }
      }
    }
  }
  if (girth == std::numeric_limits<int>::max()) return std::nullopt;
  return girth;
}

namespace {

std::uint64_t binomial_capped(int m, int k, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * std::uint64_t(m - k + i) / std::uint64_t(i);
    if (r > cap) return cap + 1;
  }
  return r;
}

// All k-subsets of [0, m) in lexicographic order.
std::vector<std::vector<int>> combinations(int m, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  for (;;) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[i] == m - k + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

GCombResult gen_gcomb(int m, int n, int n_deg, const Kernel& kernel,
                      const DerivedGrid& grid) {
  if (m < 1 || n < 1) throw ConfigError("gen_gcomb: m and n must be positive");
  if (n_deg < 1 || n_deg > m)
    throw ConfigError("gen_gcomb: need 1 <= n_deg <= m");
  if (grid.n != n)
    throw DimensionMismatch("gen_gcomb: grid code length differs from n");
  constexpr std::uint64_t kPoolCap = 1ULL << 22;
  if (binomial_capped(m, n_deg, kPoolCap) > kPoolCap)
    throw SizeUnsupported("gen_gcomb: candidate pool C(m, n_deg) too large");

  const auto pool = combinations(m, n_deg);
  std::vector<char> used(pool.size(), 0);

  const int ns = grid.gamma_sr;
  const int N = grid.n_samples;
  const int half = kernel.half_support();

  // Response of one high chip at chip position 0, evaluated at the chip-start
  // fine sample of every column offset q.
  std::vector<double> resp_mult(n, 0.0);
  {
    std::vector<std::uint8_t> one_chip(n, 0);
    one_chip[0] = 1;
    const auto up = upsample_code_row(one_chip.data(), n, ns);
    for (int q = 0; q < n; ++q) {
      double acc = 0.0;
      for (int d = -half; d <= half; ++d) {
        const int ki = d >= 0 ? d : d + N;
        int src = (q * ns - d) % N;
        if (src < 0) src += N;
        acc += kernel.samples[ki] * up[src];
      }
      resp_mult[q] = acc;
    }
  }
  std::vector<int> nonzero_offsets;
  for (int q = 0; q < n; ++q)
    if (resp_mult[q] != 0.0) nonzero_offsets.push_back(q);

  // templates[q] = current value of fine column q * n_steps as an m-vector,
  // accumulated as columns are committed.
  std::vector<std::vector<double>> templates(n, std::vector<double>(m, 0.0));
  std::vector<double> nrm2(n, 0.0);

  // Adjacent-difference columns placed so far, with norms.
  std::vector<std::vector<double>> diffs;
  std::vector<double> diff_norms;

  GCombResult result;
  result.codes.rows = m;
  result.codes.cols = n;
  result.codes.data.assign(size_t(m) * n, 0);

  std::vector<double> t_cand(m), t_adj(m), cand_diff(m);
  for (int p = 0; p < n; ++p) {
    // Placed columns whose templates the candidate itself would touch.
    std::vector<std::pair<int, double>> touched;  // (column, added response)
    for (int off : nonzero_offsets) {
      if (off == 0) continue;
      const int tgt = (p + off) % n;
      if (tgt < p) touched.emplace_back(tgt, resp_mult[off]);
    }

    int best = -1;
    double best_obj = 0.0;
    int rejected = 0;
    for (size_t ci = 0; ci < pool.size(); ++ci) {
      if (used[ci]) continue;
      const auto& comb = pool[ci];

      if (p > 0) {
        // Difference with the previously placed column; reject when parallel
        // (up to sign) to any earlier adjacent difference.
        for (int r = 0; r < m; ++r)
          cand_diff[r] = -double(result.codes.at(r, p - 1));
        for (int r : comb) cand_diff[r] += 1.0;
        const double dn = std::sqrt(dot(cand_diff, cand_diff));
        bool reject = false;
        for (size_t k = 0; k < diffs.size(); ++k) {
          if (std::abs(dot(cand_diff, diffs[k])) >=
              (1.0 - 1e-9) * dn * diff_norms[k]) {
            reject = true;
            break;
          }
        }
        if (reject) {
          ++rejected;
          continue;
        }
      }

      // Greedy objective: max normalized correlation of the candidate's
      // template against every placed template.
      double obj = 0.0;
      if (p > 0) {
        std::copy(templates[p].begin(), templates[p].end(), t_cand.begin());
        for (int r : comb) t_cand[r] += resp_mult[0];
        const double cn2 = dot(t_cand, t_cand);
        for (int q = 0; q < p; ++q) {
          const double* tq = templates[q].data();
          double qn2 = nrm2[q];
          for (const auto& [tgt, resp] : touched) {
            if (tgt != q) continue;
            std::copy(templates[q].begin(), templates[q].end(), t_adj.begin());
            for (int r : comb) t_adj[r] += resp;
            tq = t_adj.data();
            qn2 = 0.0;
            for (int r = 0; r < m; ++r) qn2 += t_adj[r] * t_adj[r];
            break;
          }
          double ip = 0.0;
          for (int r = 0; r < m; ++r) ip += t_cand[r] * tq[r];
          const double c = std::abs(ip) / std::sqrt(cn2 * qn2);
          if (c > obj) obj = c;
        }
      }

      if (best < 0 || obj < best_obj) {
        best = static_cast<int>(ci);
        best_obj = obj;
      }
    }

    if (best < 0) throw PoolExhausted(p);

    const auto& chosen = pool[best];
    used[best] = 1;
    for (int r : chosen) result.codes.at(r, p) = 1;
    if (p > 0) {
      std::vector<double> d(m, 0.0);
      for (int r = 0; r < m; ++r) d[r] = -double(result.codes.at(r, p - 1));
      for (int r : chosen) d[r] += 1.0;
      diff_norms.push_back(std::sqrt(dot(d, d)));
      diffs.push_back(std::move(d));
    }
    for (int off : nonzero_offsets) {
      const int tgt = (p + off) % n;
      for (int r : chosen) templates[tgt][r] += resp_mult[off];
      nrm2[tgt] = dot(templates[tgt], templates[tgt]);
    }
    result.trace.push_back({p, chosen, rejected, best_obj});
  }

  result.row_weights = result.codes.row_sums();
  return result;
}

}  // namespace codedtof
