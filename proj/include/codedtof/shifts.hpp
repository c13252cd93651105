#pragma once

#include <cstdint>
#include <vector>

#include "codedtof/model.hpp"

namespace codedtof {

// Row i of the output is row i of the input rotated right by shifts[i]
// samples: out[i][j] = in[i][(j - shifts[i]) mod n_samples].
SensingMatrix apply_shifts(const SensingMatrix& a, const ShiftVector& shifts);

// Minimum over all unordered column pairs of sqrt(1 - rho^2), rho being the
// normalized inner product. 1.0 for matrices with fewer than two columns.
// Throws ZeroColumn when a column has zero norm.
double min_chordal_distance(const SensingMatrix& a);

struct ShiftStep {
  int pass = 0;
  int row = 0;
  int offset = 0;
  double objective = 0.0;  // min chordal distance after committing this row
};

struct ShiftResult {
  ShiftVector shifts;
  double objective_before = 0.0;
  double objective_after = 0.0;
  std::vector<ShiftStep> trajectory;
};

// Greedy per-row search: rows in ascending order, every circular offset of
// the row evaluated against the other rows' current placement. An offset is
// preferred when it increases the minimum pairwise chordal distance; among
// offsets tied on the minimum (exactly equal), the one leaving fewer column
// pairs at that minimum wins, and remaining ties resolve to the smallest
// offset. The multiplicity key matters in regimes where many column pairs
// coincide exactly and the bare minimum cannot order candidate offsets.
// Candidate evaluation uses an incremental Gram update (the scan costs
// O(n_samples^2) per offset, not O(m n_samples^2)); tests pin agreement with
// naive recomputation. `passes` > 1 repeats the row sweep from the previous
// result; `threads` splits candidate offsets, with a deterministic merge so
// results never depend on thread count.
ShiftResult greedy_shift_search(const SensingMatrix& a, int passes = 1,
                                int threads = 1);

// shifts[i] = floor(i * n_samples / m).
ShiftVector uniform_shifts(int m, int n_samples);

// I.i.d. uniform offsets over [0, n_samples) from derive(seed, "random-shifts").
ShiftVector random_shifts(int m, int n_samples, std::uint64_t seed);

}  // namespace codedtof
