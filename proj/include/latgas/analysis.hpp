#pragma once

// Post-hoc analyses on sampled space-time windows: disagreement sets
// against a reference, range-r cluster decomposition (sea/island
// structure), periodicity scans, and per-cell empirical majorities.

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "latgas/common.hpp"
#include "latgas/pca.hpp"
#include "latgas/tileset.hpp"

namespace latgas {

enum class Metric { L1, Linf };

struct Extent4 {
  int a = 0, b = 0, i = 0, t = 0;  // t counts slices, i.e. steps + 1

  int axis(int k) const { return k == 0 ? a : k == 1 ? b : k == 2 ? i : t; }
  bool operator==(const Extent4&) const = default;
};

struct DisagreementSet {
  Extent4 extent;
  std::vector<Cell4> cells;  // sorted by (a, b, i, t)

  double rate() const {
    const double volume = static_cast<double>(extent.a) * extent.b *
                          extent.i * extent.t;
    return volume == 0 ? 0.0 : static_cast<double>(cells.size()) / volume;
  }
};

// Cells where X and Z differ. Throws std::invalid_argument on extent
// mismatch.
DisagreementSet disagreements(const SpaceTimeConfig& X,
                              const SpaceTimeConfig& Z);

// ---------------------------------------------------------------------------
// Range-r clusters

struct Cluster {
  std::vector<Cell4> cells;  // sorted
  std::array<int, 4> lo{}, hi{};  // bounding box, axes (a, b, i, t)
  bool spanning = false;  // touches both faces of some axis
};

struct ClusterReport {
  int range = 1;
  Metric metric = Metric::L1;
  Extent4 extent;
  std::size_t total_cells = 0;
  std::size_t max_size = 0;
  bool any_spanning = false;
  std::vector<Cluster> clusters;  // sorted by smallest member
};

// Union-find decomposition of a disagreement set into clusters of cells
// within lattice distance `range` of each other (L1 or Linf over all
// four axes). Adjacency never wraps: the window is treated as a finite
// box, so "spanning" means the cluster's bounding box covers an entire
// axis of the window.
ClusterReport clusters(const DisagreementSet& d, int range, Metric metric);

// Incremental variant for time sweeps: feed disagreement cells slice by
// slice and read statistics after each slice. Equivalent to clusters()
// on the growing prefix window (the t-axis extent of the prefix is
// passed to stats()).
class IncrementalClusters {
 public:
  IncrementalClusters(Extent4 extent, int range, Metric metric);

  // Add cells (later duplicates are rejected). Call with nondecreasing
  // times to keep prefix semantics meaningful.
  void add_cells(std::span<const Cell4> cells);

  struct Stats {
    std::size_t total_cells = 0;
    std::size_t n_clusters = 0;
    std::size_t max_size = 0;
    bool any_spanning = false;
  };

  // Statistics of the prefix window with slices 0..through_t.
  Stats stats(int through_t);

 private:
  std::size_t find(std::size_t x);

  Extent4 extent_;
  int range_;
  Metric metric_;
  std::vector<std::array<int, 4>> offsets_;  // nonzero, within range
  std::vector<Cell4> cells_;
  std::vector<std::size_t> parent_, size_;
  std::vector<std::array<int, 4>> lo_, hi_;  // valid at roots
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

// The sea-with-islands criterion: the disagreement set of X against the
// reference Z decomposes into non-spanning clusters of size at most
// size_threshold.
struct SeaIslandVerdict {
  bool pass = false;
  std::size_t size_threshold = 0;
  ClusterReport report;
};

SeaIslandVerdict sea_island_check(const SpaceTimeConfig& X,
                                  const SpaceTimeConfig& Z, int range,
                                  std::size_t size_threshold,
                                  Metric metric = Metric::L1);

// ---------------------------------------------------------------------------
// Periodicity

struct PeriodEntry {
  enum class Status {
    Period,        // overlap nonempty, all shifted pairs equal
    Broken,        // some pair differs; `witness` is the first mismatch
    EmptyOverlap,  // no cell k with both k and k+p in the window
  };

  std::array<int, 4> p{};  // shift vector over (a, b, i, t)
  Status status = Status::EmptyOverlap;
  Cell4 witness;  // meaningful only when Broken
};

struct PeriodReport {
  int bound = 0;
  bool last_two_only = false;
  std::vector<PeriodEntry> entries;

  bool has_nontrivial_period() const;
};

// Scan all canonical nonzero shift vectors with |components| <= bound
// (canonical: first nonzero component positive; -p holds iff p does).
// Shifts are evaluated without wrapping. With last_two_only, only
// vectors supported on the (i, t) axes are scanned -- the redundancy
// axes a, b are trivially periodic for cloned references.
PeriodReport periodicity_scan(const SpaceTimeConfig& X, int bound,
                              bool last_two_only = false);

// Same scan on a 2D patch; entries use p = (0, 0, row shift, col shift).
PeriodReport periodicity_scan(const Patch& patch, int bound);

// ---------------------------------------------------------------------------
// Empirical majority

struct MajorityField {
  Extent4 extent;
  std::vector<Symbol> modal;      // per cell, smallest id on ties
  std::vector<double> frequency;  // fraction of samples holding modal
};

// Per-cell mode across equally-shaped samples. Throws on an empty span
// or mismatched extents.
MajorityField empirical_majority_field(std::span<const SpaceTimeConfig> samples);

}  // namespace latgas
