#pragma once

// Wang tile sets, direction-determinism checks, the successor rule rho,
// and exhaustive/backtracking searches for finite and toroidal patches.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latgas/common.hpp"

namespace latgas {

struct Tile {
  TileId id = 0;
  Color north = 0, east = 0, south = 0, west = 0;

  bool operator==(const Tile&) const = default;
};

class TileSet {
 public:
  TileSet(std::string name, std::vector<Tile> tiles);

  const std::string& name() const { return name_; }
  int size() const { return static_cast<int>(tiles_.size()); }
  const Tile& tile(TileId id) const { return tiles_[id]; }
  const std::vector<Tile>& tiles() const { return tiles_; }

 private:
  std::string name_;
  std::vector<Tile> tiles_;
};

// Parse the "id north east south west" line format ('#' starts a
// comment, ids must run 0..n-1 in order). Throws TilesetError.
TileSet parse_tileset(std::istream& in, std::string name);
TileSet load_tileset_file(const std::filesystem::path& path);

// Resolve "ammann16" to the bundled fixture, anything else to a path.
TileSet load_tileset(const std::string& name_or_path);

// Raw text of the bundled Ammann 16-tile fixture.
const char* ammann16_text();

// ---------------------------------------------------------------------------
// Direction determinism

enum class Direction {
  NW,  // (west, north) determines the tile
  SE,  // (east, south) determines the tile
};

struct DeterminismReport {
  Direction direction = Direction::NW;
  bool deterministic = false;
  // Edge-color pairs claimed by more than one tile; (west,north) for NW,
  // (east,south) for SE. Empty iff deterministic.
  std::vector<std::pair<Color, Color>> violations;
};

DeterminismReport check_deterministic(const TileSet& ts, Direction dir);

// ---------------------------------------------------------------------------
// Successor rule

// rho(a, b) = the unique tile whose west color matches east(a) and whose
// north color matches south(b), when one exists. Precomputed as an n x n
// table; requires an NW-deterministic tile set.
class RhoTable {
 public:
  explicit RhoTable(const TileSet& ts);

  int tile_count() const { return n_; }

  std::optional<TileId> operator()(TileId a, TileId b) const {
    if (a >= n_ || b >= n_) throw std::out_of_range("rho: tile id out of range");
    TileId v = table_[static_cast<std::size_t>(a) * n_ + b];
    if (v == kUndefined) return std::nullopt;
    return v;
  }

 private:
  static constexpr TileId kUndefined = 255;
  int n_ = 0;
  std::vector<TileId> table_;
};

// ---------------------------------------------------------------------------
// Patches

// A rectangular block of tile ids, rows indexed downward (row r+1 sits
// south of row r), row-major storage.
struct Patch {
  int width = 0;
  int height = 0;
  std::vector<TileId> cells;

  TileId at(int row, int col) const {
    return cells[static_cast<std::size_t>(row) * width + col];
  }
  TileId& at(int row, int col) {
    return cells[static_cast<std::size_t>(row) * width + col];
  }

  bool operator==(const Patch&) const = default;
};

// Adjacency validators, written directly against the edge colors so they
// are usable as an independent check on search output.
bool patch_is_valid(const TileSet& ts, const Patch& patch);
// Same, with both axes wrapped (torus). Also checks self-adjacency when
// an axis has extent 1.
bool torus_patch_is_valid(const TileSet& ts, const Patch& patch);

enum class SearchStatus {
  Found,            // witness patch returned
  ProvenAbsent,     // search space exhausted, no witness exists
  BudgetExhausted,  // undecided: node budget hit first
};

struct PatchSearchResult {
  SearchStatus status = SearchStatus::BudgetExhausted;
  std::optional<Patch> patch;
  std::uint64_t nodes = 0;  // candidate placements attempted
};

// Backtracking search for a valid width x height patch. Free choices are
// the top row and left column; the interior is forced by rho. A node is
// one candidate placement at a free cell; the search is single-threaded
// and deterministic for a fixed (budget, order_seed). order_seed only
// permutes value ordering, never the outcome of a completed search.
PatchSearchResult find_patch(const TileSet& ts, int width, int height,
                             std::uint64_t node_budget = 10'000'000,
                             std::uint64_t order_seed = 0);

// Exhaustive search for a p x q torus tiling (wrap on both axes).
// Never returns BudgetExhausted; callers keep p and q small.
PatchSearchResult find_torus_tiling(const TileSet& ts, int p, int q);

}  // namespace latgas
