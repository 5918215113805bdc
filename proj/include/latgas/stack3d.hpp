#pragma once

// The noise-resilient 3D automaton: many redundant copies of a 1D
// trajectory arranged on an (a, b) torus, protected by Toom's
// north-east-center majority vote before every 1D update.

#include <cstdint>
#include <span>
#include <vector>

#include "latgas/ca1d.hpp"
#include "latgas/common.hpp"

namespace latgas {

// Policy for the missing right neighbor at i = L. The a and b axes are
// always periodic; only the i axis needs a choice.
enum class BoundaryKindI {
  Periodic,       // wrap to i = 0
  FeedBlank,      // blank enters from the right
  FeedReference,  // a prescribed (already-correct) symbol per step
  Unspecified,    // unknown provenance; steps are refused, analyses
                  // exclude cells whose neighborhood reads i = L
};

struct BoundaryI {
  BoundaryKindI kind = BoundaryKindI::FeedBlank;
  std::vector<Symbol> stream;  // FeedReference: symbol consumed per step
  std::size_t cursor = 0;

  static BoundaryI periodic() { return {BoundaryKindI::Periodic, {}, 0}; }
  static BoundaryI feed_blank() { return {BoundaryKindI::FeedBlank, {}, 0}; }
  static BoundaryI feed_reference(std::vector<Symbol> s) {
    return {BoundaryKindI::FeedReference, std::move(s), 0};
  }
  static BoundaryI unspecified() { return {BoundaryKindI::Unspecified, {}, 0}; }

  bool operator==(const BoundaryI&) const = default;
};

// An A x B x L block of symbols, a outer / b middle / i inner, with the
// a and b axes periodic.
struct Config3D {
  int extent_a = 0, extent_b = 0, length = 0;
  std::vector<Symbol> cells;
  BoundaryI boundary_i;

  static Config3D filled(int A, int B, int L, Symbol value,
                         BoundaryI boundary = BoundaryI::feed_blank());

  std::size_t volume() const { return cells.size(); }
  std::size_t index(int a, int b, int i) const {
    return (static_cast<std::size_t>(a) * extent_b + b) * length + i;
  }
  Symbol at(int a, int b, int i) const { return cells[index(a, b, i)]; }
  Symbol& at(int a, int b, int i) { return cells[index(a, b, i)]; }

  bool same_extents(const Config3D& o) const {
    return extent_a == o.extent_a && extent_b == o.extent_b &&
           length == o.length;
  }
  bool cells_equal(const Config3D& o) const {
    return same_extents(o) && cells == o.cells;
  }
};

// Toom's NEC vote on three symbols: the majority value when two or three
// agree, the center when all three differ. Both cases collapse to one
// test: if the two neighbors agree they outvote (or match) the center;
// in every other case the center's value is the answer.
inline Symbol toom_majority(Symbol center, Symbol north, Symbol east) {
  return north == east ? north : center;
}

// Apply the NEC vote to every cell: out(a,b,i) = vote over (a,b,i),
// (a+1,b,i), (a,b+1,i) with wraparound. Pure (a,b)-plane operation; the
// boundary is untouched.
Config3D toom_correct(const Config3D& y);

// One noise-free step of the stacked automaton: Toom correction, then
// the 1D rule along every i-line. Throws StreamExhausted /
// std::invalid_argument for exhausted or unspecified boundaries.
Config3D stacked_step(const CaRule& rule, const Config3D& y);

namespace detail {

// The part of a step shared by the deterministic and noisy updates:
// Toom correction plus right-edge boundary resolution.
struct PreparedStep {
  Config3D corrected;
  Symbol feed = 0;     // right neighbor at i = L-1 unless periodic
  BoundaryI boundary;  // boundary for the output config, cursor advanced
};

PreparedStep prepare_step(const CaRule& rule, const Config3D& y);

}  // namespace detail

// Replicate a 1D window onto an A x B torus. The i-boundary is inherited
// from the 1D policy (FeedStream becomes FeedReference: the stream is
// correct by construction, so every copy receives it verbatim).
Config3D clone_config(const Config1D& x, int A, int B);

// ---------------------------------------------------------------------------
// Erosion probe

struct Flip {
  int a = 0, b = 0, i = 0;
  Symbol value = 0;
};

struct ErosionResult {
  bool recovered = false;
  int time = -1;  // first t with perturbed == reference, -1 if never
};

// Clone x onto an A x B torus, apply the flips, and run both the
// perturbed and unperturbed systems side by side for up to max_steps,
// reporting the first time they agree. Flips must change the cell value,
// lie inside the window, and -- when the i-boundary is not periodic --
// keep at least `margin` cells away from both i edges (erosion
// guarantees only cover islands in the interior).
ErosionResult erosion_probe(const CaRule& rule, const Config1D& x, int A,
                            int B, std::span<const Flip> flips, int max_steps,
                            int margin = 1);

}  // namespace latgas
