#include "latgas/tileset.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "latgas/ammann16_data.hpp"
#include "latgas/rng.hpp"

namespace latgas {

TileSet::TileSet(std::string name, std::vector<Tile> tiles)
    : name_(std::move(name)), tiles_(std::move(tiles)) {
  if (tiles_.empty())
    throw TilesetError(TilesetError::Code::EmptySet, "tile set is empty");
  if (tiles_.size() > static_cast<std::size_t>(kMaxTiles))
    throw TilesetError(TilesetError::Code::TooManyTiles,
                       "tile set exceeds " + std::to_string(kMaxTiles) + " tiles");
  for (std::size_t k = 0; k < tiles_.size(); ++k) {
    if (tiles_[k].id != static_cast<TileId>(k))
      throw TilesetError(TilesetError::Code::BadId,
                         "tile ids must run 0..n-1 in order (saw id " +
                             std::to_string(tiles_[k].id) + " at position " +
                             std::to_string(k) + ")");
  }
  for (std::size_t k = 0; k < tiles_.size(); ++k)
    for (std::size_t j = k + 1; j < tiles_.size(); ++j) {
      const Tile &a = tiles_[k], &b = tiles_[j];
      if (a.north == b.north && a.east == b.east && a.south == b.south &&
          a.west == b.west)
        throw TilesetError(TilesetError::Code::DuplicateTile,
                           "tiles " + std::to_string(k) + " and " +
                               std::to_string(j) + " have identical edges");
    }
}

TileSet parse_tileset(std::istream& in, std::string name) {
  std::vector<Tile> tiles;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    long id, n, e, s, w;
    if (!(fields >> id)) continue;  // blank or comment-only line
    if (!(fields >> n >> e >> s >> w))
      throw TilesetError(TilesetError::Code::MalformedLine,
                         "line " + std::to_string(lineno) +
                             ": expected `id north east south west`");
    std::string rest;
    if (fields >> rest)
      throw TilesetError(TilesetError::Code::MalformedLine,
                         "line " + std::to_string(lineno) + ": trailing fields");
    if (id < 0 || id > kMaxTiles || n < 0 || e < 0 || s < 0 || w < 0 ||
        n > 0xffff || e > 0xffff || s > 0xffff || w > 0xffff)
      throw TilesetError(TilesetError::Code::MalformedLine,
                         "line " + std::to_string(lineno) + ": value out of range");
    tiles.push_back(Tile{static_cast<TileId>(id), static_cast<Color>(n),
                         static_cast<Color>(e), static_cast<Color>(s),
                         static_cast<Color>(w)});
  }
  return TileSet(std::move(name), std::move(tiles));
}

TileSet load_tileset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw TilesetError(TilesetError::Code::Io,
                       "cannot open tile file: " + path.string());
  return parse_tileset(in, path.stem().string());
}

TileSet load_tileset(const std::string& name_or_path) {
  if (name_or_path == "ammann16") {
    std::istringstream in(ammann16_text());
    return parse_tileset(in, "ammann16");
  }
  if (std::filesystem::exists(name_or_path))
    return load_tileset_file(name_or_path);
  throw TilesetError(TilesetError::Code::UnknownName,
                     "no bundled tile set or file named `" + name_or_path + "`");
}

const char* ammann16_text() { return kAmmann16Text; }

DeterminismReport check_deterministic(const TileSet& ts, Direction dir) {
  DeterminismReport report;
  report.direction = dir;
  std::map<std::pair<Color, Color>, int> seen;
  for (const Tile& t : ts.tiles()) {
    auto key = dir == Direction::NW ? std::pair{t.west, t.north}
                                    : std::pair{t.east, t.south};
    if (++seen[key] == 2) report.violations.push_back(key);
  }
  std::sort(report.violations.begin(), report.violations.end());
  report.deterministic = report.violations.empty();
  return report;
}

RhoTable::RhoTable(const TileSet& ts) : n_(ts.size()) {
  auto nw = check_deterministic(ts, Direction::NW);
  if (!nw.deterministic)
    throw std::invalid_argument(
        "rho requires an NW-deterministic tile set; `" + ts.name() +
        "` has " + std::to_string(nw.violations.size()) + " colliding pairs");
  table_.assign(static_cast<std::size_t>(n_) * n_, kUndefined);
  for (TileId a = 0; a < n_; ++a)
    for (TileId b = 0; b < n_; ++b) {
      // The unique tile u with west(u) = east(a) and north(u) = south(b);
      // uniqueness is exactly NW-determinism, checked above.
      for (const Tile& u : ts.tiles())
        if (u.west == ts.tile(a).east && u.north == ts.tile(b).south) {
          table_[static_cast<std::size_t>(a) * n_ + b] = u.id;
          break;
        }
    }
}

bool patch_is_valid(const TileSet& ts, const Patch& patch) {
  if (patch.width <= 0 || patch.height <= 0) return false;
  if (patch.cells.size() !=
      static_cast<std::size_t>(patch.width) * patch.height)
    return false;
  for (const TileId id : patch.cells)
    if (id >= ts.size()) return false;
  for (int r = 0; r < patch.height; ++r)
    for (int c = 0; c < patch.width; ++c) {
      const Tile& t = ts.tile(patch.at(r, c));
      if (c + 1 < patch.width &&
          t.east != ts.tile(patch.at(r, c + 1)).west)
        return false;
      if (r + 1 < patch.height &&
          t.south != ts.tile(patch.at(r + 1, c)).north)
        return false;
    }
  return true;
}

bool torus_patch_is_valid(const TileSet& ts, const Patch& patch) {
  if (patch.width <= 0 || patch.height <= 0) return false;
  if (patch.cells.size() !=
      static_cast<std::size_t>(patch.width) * patch.height)
    return false;
  for (const TileId id : patch.cells)
    if (id >= ts.size()) return false;
  // Wrapped adjacency covers extent-1 axes too: a single column requires
  // east = west on every tile in it, likewise north = south for one row.
  for (int r = 0; r < patch.height; ++r)
    for (int c = 0; c < patch.width; ++c) {
      const Tile& t = ts.tile(patch.at(r, c));
      if (t.east != ts.tile(patch.at(r, (c + 1) % patch.width)).west)
        return false;
      if (t.south != ts.tile(patch.at((r + 1) % patch.height, c)).north)
        return false;
    }
  return true;
}

namespace {

// Backtracking patch search.
//
// Free cells are the top row and left column, visited in interleaved
// diagonal order -- (0,0), (0,1), (1,0), (0,2), (2,0), ... -- so that
// after each free choice the forced interior diagonal between the two
// arms can be propagated and conflicts surface immediately. Interior
// cell (r,c) with r,c >= 1 is forced: it must be the unique tile whose
// west color matches its west neighbor and whose north color matches
// its north neighbor (NW-determinism).
class PatchSearch {
 public:
  PatchSearch(const TileSet& ts, int width, int height,
              std::uint64_t budget, std::uint64_t order_seed)
      : ts_(ts),
        width_(width),
        height_(height),
        budget_(budget),
        rng_(order_seed ^ 0x70617463686f7264ull) {
    by_west_.resize(0x10000);
    for (const Tile& t : ts_.tiles()) by_west_[t.west].push_back(t.id);
    grid_.assign(static_cast<std::size_t>(width_) * height_, kEmpty);
    for (int c = 0; c < width_; ++c) free_cells_.emplace_back(0, c);
    for (int r = 1; r < height_; ++r) free_cells_.emplace_back(r, 0);
    std::sort(free_cells_.begin(), free_cells_.end(),
              [](auto& p, auto& q) {
                return std::pair(p.first + p.second, p.first) <
                       std::pair(q.first + q.second, q.first);
              });
  }

  PatchSearchResult run() {
    PatchSearchResult result;
    result.status = dfs(0) ? SearchStatus::Found
                  : budget_hit_ ? SearchStatus::BudgetExhausted
                                : SearchStatus::ProvenAbsent;
    if (result.status == SearchStatus::Found) {
      Patch p{width_, height_, {}};
      p.cells.assign(grid_.begin(), grid_.end());
      result.patch = std::move(p);
    }
    result.nodes = nodes_;
    return result;
  }

 private:
  static constexpr TileId kEmpty = 255;

  TileId cell(int r, int c) const {
    return grid_[static_cast<std::size_t>(r) * width_ + c];
  }
  void set(int r, int c, TileId v) {
    grid_[static_cast<std::size_t>(r) * width_ + c] = v;
  }

  bool fits(int r, int c, TileId id) const {
    const Tile& t = ts_.tile(id);
    if (c > 0 && cell(r, c - 1) != kEmpty &&
        ts_.tile(cell(r, c - 1)).east != t.west)
      return false;
    if (r > 0 && cell(r - 1, c) != kEmpty &&
        ts_.tile(cell(r - 1, c)).south != t.north)
      return false;
    if (c + 1 < width_ && cell(r, c + 1) != kEmpty &&
        t.east != ts_.tile(cell(r, c + 1)).west)
      return false;
    if (r + 1 < height_ && cell(r + 1, c) != kEmpty &&
        t.south != ts_.tile(cell(r + 1, c)).north)
      return false;
    return true;
  }

  // Place (r,c) and force every interior cell this newly enables; record
  // all placements on `trail` for undo. Returns false on a dead end.
  bool place(int r, int c, TileId id, std::vector<std::pair<int, int>>& trail) {
    set(r, c, id);
    trail.emplace_back(r, c);
    std::size_t head = trail.size() - 1;
    while (head < trail.size()) {
      auto [pr, pc] = trail[head++];
      for (auto [nr, nc] : {std::pair{pr, pc + 1}, std::pair{pr + 1, pc}}) {
        if (nr < 1 || nc < 1 || nr >= height_ || nc >= width_) continue;
        if (cell(nr, nc) != kEmpty) continue;
        TileId west = cell(nr, nc - 1), north = cell(nr - 1, nc);
        if (west == kEmpty || north == kEmpty) continue;
        TileId forced = kEmpty;
        for (TileId u : by_west_[ts_.tile(west).east])
          if (ts_.tile(u).north == ts_.tile(north).south) {
            forced = u;
            break;  // unique by NW-determinism
          }
        if (forced == kEmpty || !fits(nr, nc, forced)) return false;
        set(nr, nc, forced);
        trail.emplace_back(nr, nc);
      }
    }
    return true;
  }

  void unwind(std::vector<std::pair<int, int>>& trail) {
    for (auto [r, c] : trail) set(r, c, kEmpty);
    trail.clear();
  }

  bool dfs(std::size_t depth) {
    if (depth == free_cells_.size()) return true;
    auto [r, c] = free_cells_[depth];
    if (cell(r, c) != kEmpty) return dfs(depth + 1);  // forced earlier

    std::vector<TileId> order(ts_.size());
    std::iota(order.begin(), order.end(), TileId{0});
    shuffle(order);

    std::vector<std::pair<int, int>> trail;
    for (TileId id : order) {
      if (nodes_ >= budget_) {
        budget_hit_ = true;
        return false;
      }
      ++nodes_;
      if (!fits(r, c, id)) continue;
      if (place(r, c, id, trail) && dfs(depth + 1)) return true;
      unwind(trail);
      if (budget_hit_) return false;
    }
    return false;
  }

  void shuffle(std::vector<TileId>& order) {
    for (std::size_t k = order.size(); k > 1; --k) {
      rng_ = detail::mix64(rng_ + 0x9e3779b97f4a7c15ull);
      std::swap(order[k - 1], order[rng_ % k]);
    }
  }

  const TileSet& ts_;
  int width_, height_;
  std::uint64_t budget_;
  std::uint64_t rng_;
  std::uint64_t nodes_ = 0;
  bool budget_hit_ = false;
  std::vector<std::vector<TileId>> by_west_;
  std::vector<TileId> grid_;
  std::vector<std::pair<int, int>> free_cells_;
};

}  // namespace

PatchSearchResult find_patch(const TileSet& ts, int width, int height,
                             std::uint64_t node_budget,
                             std::uint64_t order_seed) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("find_patch: extents must be positive");
  return PatchSearch(ts, width, height, node_budget, order_seed).run();
}

PatchSearchResult find_torus_tiling(const TileSet& ts, int p, int q) {
  if (p <= 0 || q <= 0)
    throw std::invalid_argument("find_torus_tiling: extents must be positive");

  // Exhaustive DFS in row-major order. Partial placements are checked
  // against already-placed wrapped neighbors only; a full wrapped
  // validation at the leaf catches the remaining seam constraints
  // (including self-adjacency on extent-1 axes).
  Patch patch{q, p, std::vector<TileId>(static_cast<std::size_t>(p) * q, 0)};
  std::vector<bool> placed(patch.cells.size(), false);
  std::uint64_t nodes = 0;

  auto ok_partial = [&](int r, int c, TileId id) {
    const Tile& t = ts.tile(id);
    auto has = [&](int rr, int cc) {
      return placed[static_cast<std::size_t>(rr) * q + cc];
    };
    auto val = [&](int rr, int cc) -> const Tile& {
      // Read through the candidate at (r,c) so wrapped self-neighbors on
      // extent-1 axes are constrained too.
      if (rr == r && cc == c) return t;
      return ts.tile(patch.at(rr, cc));
    };
    int cl = (c + q - 1) % q, cr = (c + 1) % q;
    int ru = (r + p - 1) % p, rd = (r + 1) % p;
    if ((has(r, cl) || cl == c) && val(r, cl).east != t.west) return false;
    if ((has(r, cr) || cr == c) && t.east != val(r, cr).west) return false;
    if ((has(ru, c) || ru == r) && val(ru, c).south != t.north) return false;
    if ((has(rd, c) || rd == r) && t.south != val(rd, c).north) return false;
    return true;
  };

  std::function<bool(int)> dfs = [&](int pos) -> bool {
    if (pos == p * q) return torus_patch_is_valid(ts, patch);
    int r = pos / q, c = pos % q;
    for (TileId id = 0; id < ts.size(); ++id) {
      ++nodes;
      if (!ok_partial(r, c, id)) continue;
      patch.at(r, c) = id;
      placed[static_cast<std::size_t>(r) * q + c] = true;
      if (dfs(pos + 1)) return true;
      placed[static_cast<std::size_t>(r) * q + c] = false;
    }
    return false;
  };

  PatchSearchResult result;
  result.status = dfs(0) ? SearchStatus::Found : SearchStatus::ProvenAbsent;
  if (result.status == SearchStatus::Found) result.patch = patch;
  result.nodes = nodes;
  return result;
}

}  // namespace latgas
