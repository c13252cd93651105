#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "codedtof/model.hpp"
#include "codedtof/synthesis.hpp"

namespace codedtof {

// Bernoulli(p) matrix from the stream derive(seed, "random-code").
BinaryCodeMatrix gen_random(int m, int n, double p, std::uint64_t seed);

// Scrambled Hadamard ensemble: order-N Sylvester-Hadamard matrix
// (N = smallest power of two >= max(m, n)), seeded random column
// permutation, m rows sampled without replacement, first n columns kept,
// entries rescaled by h -> (h + 1) / 2. Throws SizeUnsupported when N
// would exceed max_order (default 2^16).
BinaryCodeMatrix gen_she(int m, int n, std::uint64_t seed,
                         int max_order = 1 << 16);

// Deterministic building block behind gen_she: entry (i, j) is the
// rescaled Sylvester-Hadamard value at row row_sel[i], column col_perm[j].
BinaryCodeMatrix she_from(int order, const std::vector<std::uint32_t>& row_sel,
                          const std::vector<std::uint32_t>& col_perm, int n);

// Progressive edge growth: columns of degree n_deg placed left to right.
// The first edge of a column goes to a minimum-degree check node; each
// subsequent edge attaches to a check node at maximal BFS distance from the
// column's variable node (unreachable preferred), ties broken by minimum
// current check degree, then lowest index.
BinaryCodeMatrix gen_peg(int m, int n, int n_deg);

// Shortest cycle length of the Tanner graph (variables = columns, checks =
// rows); empty when the graph is acyclic.
std::optional<int> tanner_girth(const BinaryCodeMatrix& codes);

// Per-column record of the combinatorial generation run.
struct GCombTraceRow {
  int column_index = 0;
  std::vector<int> combination;  // chosen row support
  int rejected_count = 0;        // candidates rejected by the edge test
  double objective = 0.0;        // greedy objective of the chosen candidate
};

struct GCombResult {
  BinaryCodeMatrix codes;
  std::vector<GCombTraceRow> trace;
  std::vector<int> row_weights;  // final per-row ones count
};

// Greedy combinatorial construction. Candidate columns are the C(m, n_deg)
// row supports in lexicographic order, each used at most once. A candidate
// is rejected when appending its difference with the previously placed
// column to the adjacent-difference matrix would make two difference
// columns parallel (normalized |dot| >= 1 - 1e-9). Among survivors the
// generator picks the candidate minimizing the maximum normalized
// correlation between its synthesized fine-grid column template (taken at
// the chip's first fine sample) and the templates of all previously placed
// columns, accounting for the candidate's own smearing into those
// templates; ties resolve to the lexicographically smallest combination.
// Throws PoolExhausted when no admissible candidate remains.
GCombResult gen_gcomb(int m, int n, int n_deg, const Kernel& kernel,
                      const DerivedGrid& grid);

}  // namespace codedtof
