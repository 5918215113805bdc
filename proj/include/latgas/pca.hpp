#pragma once

// The noisy probabilistic cellular automaton: each cell performs the
// deterministic stacked update and is then hit by symmetric symbol noise
// with rate epsilon. All randomness is counter-based (see rng.hpp), so a
// sampled trajectory is a pure function of (seed, initial configuration).

#include <array>
#include <cstdint>
#include <vector>

#include "latgas/ca1d.hpp"
#include "latgas/common.hpp"
#include "latgas/rng.hpp"
#include "latgas/stack3d.hpp"

namespace latgas {

struct NoiseParams {
  double epsilon = 0.0;   // total probability of replacing the update
  int alphabet_size = 0;  // m = n_tiles + 1

  // Probability of landing on one specific wrong symbol.
  double off_rate() const { return epsilon / (alphabet_size - 1); }
};

// Single-cell noise kernel: probability that a cell whose deterministic
// update is `a` ends up holding `b`.
double theta(const NoiseParams& np, Symbol a, Symbol b);

// The six-cell input neighborhood of a cell, as (da, db, di) offsets
// into the previous time slice. The first three feed the cell's own
// corrected value, the last three the corrected right neighbor.
inline constexpr std::array<std::array<int, 3>, 6> kNeighborhood = {{
    {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1},
}};

// Symbols read at kNeighborhood offsets, in that order.
using NeighborhoodPattern = std::array<Symbol, 6>;

// The deterministic stacked update on one neighborhood pattern: Toom's
// vote over each offset triple, then the 1D rule.
Symbol stacked_rule(const CaRule& rule, const NeighborhoodPattern& p);

// Transition probability of the PCA: psi(p, b) = theta(stacked_rule(p), b).
double psi(const CaRule& rule, const NoiseParams& np,
           const NeighborhoodPattern& p, Symbol b);

// One noisy step producing the slice at time t + 1 from the slice `y` at
// time t. The two random draws for output cell (a, b, i) -- flip
// decision and replacement symbol -- are keyed by (seed, a, b, i, t),
// i.e. by the *step* index, so any evaluation order gives identical
// output. epsilon = 0 reproduces stacked_step exactly.
Config3D pca_step(const CaRule& rule, const Config3D& y, const NoiseParams& np,
                  const CellRng& rng, int t);

// ---------------------------------------------------------------------------
// Space-time windows

// A full sampled history: slices 0..steps, each an A x B x L block.
// boundary_i holds the policy as of time 0; slice t consumes stream
// index cursor + t.
struct SpaceTimeConfig {
  int extent_a = 0, extent_b = 0, length = 0, steps = 0;
  std::vector<Symbol> cells;
  BoundaryI boundary_i;

  std::size_t volume() const { return cells.size(); }
  std::size_t slice_volume() const {
    return static_cast<std::size_t>(extent_a) * extent_b * length;
  }
  std::size_t index(int a, int b, int i, int t) const {
    return ((static_cast<std::size_t>(t) * extent_a + a) * extent_b + b) *
               length + i;
  }
  Symbol at(int a, int b, int i, int t) const { return cells[index(a, b, i, t)]; }
  Symbol& at(int a, int b, int i, int t) { return cells[index(a, b, i, t)]; }
  Symbol at(const Cell4& k) const { return at(k.a, k.b, k.i, k.t); }

  bool same_extents(const SpaceTimeConfig& o) const {
    return extent_a == o.extent_a && extent_b == o.extent_b &&
           length == o.length && steps == o.steps;
  }

  // Copy of slice t with the boundary cursor advanced to time t.
  Config3D slice(int t) const;
  void set_slice(int t, const Config3D& y);
};

// Run the PCA for `steps` steps from `init`. Slice 0 is `init` itself.
SpaceTimeConfig sample_trajectory(const CaRule& rule, const Config3D& init,
                                  const NoiseParams& np, std::uint64_t seed,
                                  int steps);

// The deterministic update targeted at cell (a, b, i, t), re-derived
// from slice t-1 of X. Throws TruncatedSupport when t = 0 or when the
// neighborhood reads across an Unspecified i-boundary.
Symbol expected_update(const CaRule& rule, const SpaceTimeConfig& X, int a,
                       int b, int i, int t);

// All cells of X (t >= 1) whose value differs from their deterministic
// update: the places where noise actually struck. Cells whose
// neighborhood cannot be resolved are skipped and counted as excluded.
struct ErrorSetResult {
  std::vector<Cell4> cells;    // in (t, a, b, i) order
  std::size_t checked = 0;     // cells with a resolvable neighborhood
  std::size_t excluded = 0;    // cells skipped at an unresolvable boundary
};

ErrorSetResult error_set(const CaRule& rule, const SpaceTimeConfig& X);

}  // namespace latgas
