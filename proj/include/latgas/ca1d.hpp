#pragma once

// The 1D cellular automaton induced by an NW-deterministic tile set.
//
// Cells hold symbols from the extended alphabet (tile ids plus one blank
// symbol). The local rule maps each pair of adjacent cells (self, right
// neighbor) to the successor tile when rho is defined on it and to blank
// otherwise; blank is absorbing. Information flows right-to-left, so
// only the right edge of a finite window needs a boundary policy.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "latgas/common.hpp"
#include "latgas/tileset.hpp"

namespace latgas {

// The extended alphabet over n tiles: symbols 0..n-1 are tile ids and
// symbol n is blank, so |alphabet| = n + 1.
struct Alphabet {
  int n_tiles = 0;

  int size() const { return n_tiles + 1; }
  Symbol blank() const { return static_cast<Symbol>(n_tiles); }
  bool is_blank(Symbol s) const { return s == blank(); }
  bool valid(Symbol s) const { return s <= n_tiles; }
};

// The local rule as a dense (n+1) x (n+1) table over the extended
// alphabet, built once from rho.
class CaRule {
 public:
  explicit CaRule(const TileSet& ts);

  const Alphabet& alphabet() const { return alphabet_; }
  Symbol blank() const { return alphabet_.blank(); }
  const std::string& tileset_name() const { return name_; }

  // The extended rule: blank if either argument is blank or rho(a,b) is
  // undefined, rho(a,b) otherwise.
  Symbol apply(Symbol a, Symbol b) const {
    if (!alphabet_.valid(a) || !alphabet_.valid(b))
      throw std::out_of_range("CaRule::apply: symbol out of range");
    return table_[static_cast<std::size_t>(a) * alphabet_.size() + b];
  }

  // The partial successor rule on tile ids.
  std::optional<TileId> rho(TileId a, TileId b) const { return rho_(a, b); }

 private:
  Alphabet alphabet_;
  std::string name_;
  RhoTable rho_;
  std::vector<Symbol> table_;
};

// ---------------------------------------------------------------------------
// Finite windows and boundaries

enum class BoundaryKind1D { Periodic, FeedBlank, FeedStream };

struct Boundary1D {
  BoundaryKind1D kind = BoundaryKind1D::FeedBlank;
  std::vector<Symbol> stream;  // FeedStream: symbol consumed per step
  std::size_t cursor = 0;      // next stream index to consume

  static Boundary1D periodic() { return {BoundaryKind1D::Periodic, {}, 0}; }
  static Boundary1D feed_blank() { return {BoundaryKind1D::FeedBlank, {}, 0}; }
  static Boundary1D feed_stream(std::vector<Symbol> s) {
    return {BoundaryKind1D::FeedStream, std::move(s), 0};
  }

  bool operator==(const Boundary1D&) const = default;
};

struct Config1D {
  std::vector<Symbol> cells;
  Boundary1D boundary;

  int length() const { return static_cast<int>(cells.size()); }
  bool operator==(const Config1D&) const = default;
};

// One synchronous update. cells[i] <- rule(cells[i], cells[i+1]); the
// missing right neighbor of the last cell comes from the boundary
// policy. Throws StreamExhausted when a feed stream runs dry.
Config1D step1d(const CaRule& rule, const Config1D& x);

// Time-major trajectory: rows[t] is the window at time t, 0 <= t <= steps.
struct Trajectory1D {
  int length = 0;
  std::vector<std::vector<Symbol>> rows;

  int steps() const { return static_cast<int>(rows.size()) - 1; }
  Symbol at(int t, int i) const { return rows[t][i]; }
};

Trajectory1D run1d(const CaRule& rule, const Config1D& x0, int steps);

// The forward influence cone of a blank injected at site k, time t: all
// (site, time) pairs that are forced blank, up to and including time
// `horizon`. Sites may be negative; no window clamping is applied.
// Returned sorted by (time, site).
std::vector<std::pair<int, int>> blank_cone(int k, int t, int horizon);

// ---------------------------------------------------------------------------
// Patch <-> trajectory correspondence
//
// A valid patch read along anti-diagonals is a CA trajectory: cell i of
// row t is patch(row_origin - i, col_offset + t + i). Rows of the patch
// map to space-time diagonals, so a window of length L and T steps needs
// a patch of height >= row_origin + 1 and width >= col_offset + T + L.

struct TrajectoryWindow {
  int length = 0;      // cells per row (L)
  int steps = 0;       // time steps (T)
  int row_origin = 0;  // patch row holding cell i = 0
  int col_offset = 0;  // patch column of cell (t=0, i=0)
};

// The largest window with default origin: L = min(width, height),
// row_origin = L - 1, col_offset = 0, T = width - L.
TrajectoryWindow default_window(const Patch& patch);

// Pure re-indexing; throws std::out_of_range if the window does not fit
// inside the patch. Validity of the result as a trajectory follows from
// patch validity and is re-checked in tests, not here.
Trajectory1D patch_to_trajectory(const Patch& patch, const TrajectoryWindow& w);

// A deterministic reference run extracted from a patch: the t = 0 row of
// the window plus the boundary stream (patch row 0 anti-diagonal) that
// reproduces rows 1..T of the window when fed at the right edge.
// Requires height >= length + 1 and width >= steps + length.
struct ReferenceRun {
  Trajectory1D trajectory;
  std::vector<Symbol> stream;  // stream[t] enters at i = L during step t
};

ReferenceRun reference_run_from_patch(const Patch& patch, int length, int steps);

}  // namespace latgas
