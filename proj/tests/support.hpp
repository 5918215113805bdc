#pragma once

// Shared oracles and fixtures for the test binaries. Everything here is
// an independent re-derivation from first principles -- plain scans over
// tile edge colors, BFS, explicit probability products -- so agreement
// with the library is evidence, not circularity.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "latgas/analysis.hpp"
#include "latgas/ca1d.hpp"
#include "latgas/pca.hpp"
#include "latgas/stack3d.hpp"
#include "latgas/tileset.hpp"

namespace latgas::testing {

// --- tile rule oracles -------------------------------------------------

// The partial successor rule by brute scan: the unique tile whose west
// edge continues a's east edge and whose north edge continues b's south
// edge. nullopt when no tile fits (ambiguity throws: the scan is only
// meaningful on NW-deterministic sets).
inline std::optional<TileId> rho_oracle(const TileSet& ts, TileId a, TileId b) {
  std::optional<TileId> found;
  for (const Tile& u : ts.tiles()) {
    if (u.west != ts.tile(a).east || u.north != ts.tile(b).south) continue;
    if (found) throw std::logic_error("rho_oracle: ambiguous successor");
    found = u.id;
  }
  return found;
}

// Majority of three by counting, center value on a three-way tie.
inline Symbol majority_oracle(Symbol center, Symbol north, Symbol east) {
  if (north == east) return north;
  if (center == north) return center;
  if (center == east) return center;
  return center;  // all distinct
}

// The extended six-cell update from first principles: vote each triple,
// then the extended rule (blank if either vote is blank or rho is
// undefined).
inline Symbol stacked_rule_oracle(const TileSet& ts,
                                  const NeighborhoodPattern& p) {
  const Symbol blank = static_cast<Symbol>(ts.size());
  const Symbol own = majority_oracle(p[0], p[1], p[2]);
  const Symbol right = majority_oracle(p[3], p[4], p[5]);
  if (own == blank || right == blank) return blank;
  const auto next = rho_oracle(ts, own, right);
  return next ? *next : blank;
}

// --- random tile sets ---------------------------------------------------

// A random NW-deterministic tile set: distinct (west, north) pairs make
// the (west, north) -> tile map a function by construction.
inline TileSet random_nw_tileset(std::uint64_t seed, int n_tiles,
                                 int n_colors) {
  if (n_tiles > n_colors * n_colors)
    throw std::invalid_argument("random_nw_tileset: not enough color pairs");
  std::mt19937_64 gen(seed);
  std::vector<std::pair<Color, Color>> pairs;
  for (int w = 1; w <= n_colors; ++w)
    for (int n = 1; n <= n_colors; ++n)
      pairs.emplace_back(static_cast<Color>(w), static_cast<Color>(n));
  std::shuffle(pairs.begin(), pairs.end(), gen);

  std::uniform_int_distribution<int> color(1, n_colors);
  std::vector<Tile> tiles;
  for (int id = 0; id < n_tiles; ++id) {
    Tile t;
    t.id = static_cast<TileId>(id);
    t.west = pairs[id].first;
    t.north = pairs[id].second;
    t.east = static_cast<Color>(color(gen));
    t.south = static_cast<Color>(color(gen));
    tiles.push_back(t);
  }
  return TileSet("random-nw-" + std::to_string(seed), std::move(tiles));
}

// --- cluster oracle ------------------------------------------------------

inline int oracle_distance(const Cell4& x, const Cell4& y, Metric metric) {
  const int d[4] = {std::abs(x.a - y.a), std::abs(x.b - y.b),
                    std::abs(x.i - y.i), std::abs(x.t - y.t)};
  if (metric == Metric::L1) return d[0] + d[1] + d[2] + d[3];
  return std::max(std::max(d[0], d[1]), std::max(d[2], d[3]));
}

// BFS partition into range-r components. Each component is sorted; the
// list is sorted by smallest member -- the same canonical order the
// library reports, reached by a different algorithm.
inline std::vector<std::vector<Cell4>> bfs_clusters(
    const std::vector<Cell4>& cells, int range, Metric metric) {
  const std::size_t n = cells.size();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<Cell4>> components;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> queue{s};
    seen[s] = true;
    std::vector<Cell4> component;
    while (!queue.empty()) {
      const std::size_t x = queue.back();
      queue.pop_back();
      component.push_back(cells[x]);
      for (std::size_t y = 0; y < n; ++y) {
        if (seen[y] || oracle_distance(cells[x], cells[y], metric) > range)
          continue;
        seen[y] = true;
        queue.push_back(y);
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  std::sort(components.begin(), components.end(),
            [](const auto& lhs, const auto& rhs) {
              return lhs.front() < rhs.front();
            });
  return components;
}

// --- rank correlation -----------------------------------------------------

// Average ranks with tie correction.
inline std::vector<double> ranks_of(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t end = pos;
    while (end + 1 < n && values[order[end + 1]] == values[order[pos]]) ++end;
    const double shared = (static_cast<double>(pos) + end) / 2.0 + 1.0;
    for (std::size_t k = pos; k <= end; ++k) ranks[order[k]] = shared;
    pos = end + 1;
  }
  return ranks;
}

// Spearman rank correlation, ties handled by average ranks.
inline double spearman(const std::vector<double>& xs,
                       const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("spearman: need two equally-sized samples");
  const auto rx = ranks_of(xs);
  const auto ry = ranks_of(ys);
  const double n = static_cast<double>(xs.size());
  double mean = (n + 1.0) / 2.0;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    cov += (rx[k] - mean) * (ry[k] - mean);
    vx += (rx[k] - mean) * (rx[k] - mean);
    vy += (ry[k] - mean) * (ry[k] - mean);
  }
  if (vx == 0.0 || vy == 0.0)
    throw std::invalid_argument("spearman: constant sample");
  return cov / std::sqrt(vx * vy);
}

// --- path-measure conditional ------------------------------------------

// Exact single-site conditional of the PCA path measure on a fully
// periodic window, by brute force: for every candidate symbol, multiply
// the transition probability of *every* cell of *every* slice t >= 1 and
// normalize. Independent of the library's factor bookkeeping.
inline std::vector<double> path_conditional_oracle(const TileSet& ts,
                                                   const SpaceTimeConfig& X,
                                                   const Cell4& cell,
                                                   double epsilon) {
  if (X.boundary_i.kind != BoundaryKindI::Periodic)
    throw std::invalid_argument("path_conditional_oracle: periodic windows only");
  const int m = ts.size() + 1;
  const double match = 1.0 - epsilon;
  const double off = epsilon / (m - 1);

  SpaceTimeConfig Y = X;
  std::vector<double> weight(m, 0.0);
  for (int sigma = 0; sigma < m; ++sigma) {
    Y.at(cell.a, cell.b, cell.i, cell.t) = static_cast<Symbol>(sigma);
    double w = 1.0;
    for (int t = 1; t <= Y.steps; ++t)
      for (int a = 0; a < Y.extent_a; ++a)
        for (int b = 0; b < Y.extent_b; ++b)
          for (int i = 0; i < Y.length; ++i) {
            NeighborhoodPattern p;
            for (std::size_t k = 0; k < kNeighborhood.size(); ++k) {
              const auto& d = kNeighborhood[k];
              p[k] = Y.at((a + d[0]) % Y.extent_a, (b + d[1]) % Y.extent_b,
                          (i + d[2]) % Y.length, t - 1);
            }
            const Symbol target = stacked_rule_oracle(ts, p);
            w *= (Y.at(a, b, i, t) == target) ? match : off;
          }
    weight[sigma] = w;
  }
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
  for (double& w : weight) w /= total;
  return weight;
}

// --- fixtures -------------------------------------------------------------

// A deterministic 1D reference run backed by a searched patch: initial
// row plus the boundary stream that keeps it on-trajectory.
struct Reference1D {
  TileSet ts;
  Patch patch;
  Trajectory1D trajectory;
  Config1D init;
};

inline Reference1D make_reference(int length, int steps,
                                  std::uint64_t order_seed = 1,
                                  std::uint64_t budget = 10'000'000) {
  TileSet ts = load_tileset("ammann16");
  const auto search =
      find_patch(ts, steps + length, length + 1, budget, order_seed);
  if (search.status != SearchStatus::Found)
    throw std::runtime_error("make_reference: patch search failed");
  auto run = reference_run_from_patch(*search.patch, length, steps);
  Config1D init;
  init.cells = run.trajectory.rows.front();
  init.boundary = Boundary1D::feed_stream(run.stream);
  return {std::move(ts), std::move(*search.patch), std::move(run.trajectory),
          std::move(init)};
}

// Scoped temporary directory under the system temp root.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    const auto base = std::filesystem::temp_directory_path();
    for (int k = 0;; ++k) {
      path_ = base / (tag + "-" + std::to_string(::getpid()) + "-" +
                      std::to_string(k));
      if (std::filesystem::create_directory(path_)) break;
      if (k > 1000) throw std::runtime_error("TempDir: cannot create");
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace latgas::testing
