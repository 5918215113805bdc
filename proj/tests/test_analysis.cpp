#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <set>

#include "doctest.h"
#include "latgas/analysis.hpp"
#include "support.hpp"

using namespace latgas;
using namespace latgas::testing;

namespace {

SpaceTimeConfig make_window(int A, int B, int L, int T, Symbol fill = 0) {
  SpaceTimeConfig X;
  X.extent_a = A;
  X.extent_b = B;
  X.length = L;
  X.steps = T;
  X.cells.assign(static_cast<std::size_t>(A) * B * L * (T + 1), fill);
  X.boundary_i = BoundaryI::periodic();
  return X;
}

// Random distinct cells inside an extent.
std::vector<Cell4> random_cells(std::mt19937_64& gen, const Extent4& extent,
                                int count) {
  std::set<Cell4> cells;
  std::uniform_int_distribution<int> da(0, extent.a - 1), db(0, extent.b - 1),
      di(0, extent.i - 1), dt(0, extent.t - 1);
  while (static_cast<int>(cells.size()) < count)
    cells.insert(Cell4{da(gen), db(gen), di(gen), dt(gen)});
  return {cells.begin(), cells.end()};
}

}  // namespace

TEST_CASE("disagreements lists mismatching cells in canonical order") {
  SpaceTimeConfig X = make_window(2, 2, 3, 2);
  SpaceTimeConfig Z = X;
  X.at(1, 0, 2, 1) = 5;
  X.at(0, 1, 0, 2) = 7;
  X.at(0, 0, 0, 0) = 1;

  const DisagreementSet d = disagreements(X, Z);
  CHECK(d.extent == Extent4{2, 2, 3, 3});
  REQUIRE(d.cells.size() == 3);
  CHECK(d.cells[0] == Cell4{0, 0, 0, 0});
  CHECK(d.cells[1] == Cell4{0, 1, 0, 2});
  CHECK(d.cells[2] == Cell4{1, 0, 2, 1});
  CHECK(d.rate() == doctest::Approx(3.0 / 36.0).epsilon(1e-15));

  SpaceTimeConfig W = make_window(2, 2, 3, 1);
  CHECK_THROWS_AS(disagreements(X, W), std::invalid_argument);
}

TEST_CASE("union-find clusters equal the BFS oracle") {
  std::mt19937_64 gen(404);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> axis(1, 12);
    const Extent4 extent{axis(gen), axis(gen), axis(gen), axis(gen)};
    const long volume = static_cast<long>(extent.a) * extent.b * extent.i *
                        extent.t;
    std::uniform_int_distribution<int> size_pick(
        1, static_cast<int>(std::min<long>(volume, 60)));
    DisagreementSet d;
    d.extent = extent;
    d.cells = random_cells(gen, extent, size_pick(gen));

    for (const Metric metric : {Metric::L1, Metric::Linf})
      for (int range = 1; range <= 3; ++range) {
        const ClusterReport got = clusters(d, range, metric);
        const auto oracle = bfs_clusters(d.cells, range, metric);

        REQUIRE(got.clusters.size() == oracle.size());
        CHECK(got.total_cells == d.cells.size());
        std::size_t max_size = 0;
        bool any_spanning = false;
        for (std::size_t c = 0; c < oracle.size(); ++c) {
          CHECK(got.clusters[c].cells == oracle[c]);
          std::array<int, 4> lo{INT32_MAX, INT32_MAX, INT32_MAX, INT32_MAX};
          std::array<int, 4> hi{-1, -1, -1, -1};
          for (const Cell4& cell : oracle[c]) {
            const int v[4] = {cell.a, cell.b, cell.i, cell.t};
            for (int k = 0; k < 4; ++k) {
              lo[k] = std::min(lo[k], v[k]);
              hi[k] = std::max(hi[k], v[k]);
            }
          }
          CHECK(got.clusters[c].lo == lo);
          CHECK(got.clusters[c].hi == hi);
          bool spanning = false;
          for (int k = 0; k < 4; ++k)
            spanning |= lo[k] == 0 && hi[k] == extent.axis(k) - 1;
          CHECK(got.clusters[c].spanning == spanning);
          max_size = std::max(max_size, oracle[c].size());
          any_spanning |= spanning;
        }
        CHECK(got.max_size == max_size);
        CHECK(got.any_spanning == any_spanning);
      }
  }
}

TEST_CASE("coarser ranges only merge clusters") {
  std::mt19937_64 gen(7);
  const Extent4 extent{6, 6, 6, 6};
  DisagreementSet d;
  d.extent = extent;
  d.cells = random_cells(gen, extent, 40);
  for (const Metric metric : {Metric::L1, Metric::Linf}) {
    std::size_t last = d.cells.size() + 1;
    for (int range = 1; range <= 4; ++range) {
      const std::size_t n = clusters(d, range, metric).clusters.size();
      CHECK(n <= last);
      last = n;
    }
  }
  CHECK_THROWS_AS(clusters(d, 0, Metric::L1), std::invalid_argument);
}

TEST_CASE("incremental clusters match batch clustering on prefixes") {
  std::mt19937_64 gen(11);
  const Extent4 extent{5, 4, 6, 8};
  DisagreementSet full;
  full.extent = extent;
  full.cells = random_cells(gen, extent, 70);

  for (const Metric metric : {Metric::L1, Metric::Linf}) {
    IncrementalClusters inc(extent, 2, metric);
    for (int t = 0; t < extent.t; ++t) {
      std::vector<Cell4> slice;
      for (const Cell4& c : full.cells)
        if (c.t == t) slice.push_back(c);
      inc.add_cells(slice);

      DisagreementSet prefix;
      prefix.extent = extent;
      prefix.extent.t = t + 1;
      for (const Cell4& c : full.cells)
        if (c.t <= t) prefix.cells.push_back(c);

      const auto got = inc.stats(t);
      const ClusterReport want = clusters(prefix, 2, metric);
      CHECK(got.total_cells == want.total_cells);
      CHECK(got.n_clusters == want.clusters.size());
      CHECK(got.max_size == want.max_size);
      CHECK(got.any_spanning == want.any_spanning);
    }
  }

  IncrementalClusters inc(extent, 1, Metric::L1);
  const Cell4 cell{0, 0, 0, 0};
  inc.add_cells(std::span(&cell, 1));
  CHECK_THROWS_AS(inc.add_cells(std::span(&cell, 1)), std::invalid_argument);
}

TEST_CASE("sea-island verdict rejects oversized and spanning clusters") {
  SpaceTimeConfig Z = make_window(4, 4, 6, 5);
  SpaceTimeConfig X = Z;

  // Two small islands.
  X.at(0, 0, 1, 1) = 1;
  X.at(0, 0, 2, 1) = 2;
  X.at(3, 3, 4, 4) = 3;
  const auto ok = sea_island_check(X, Z, 2, 4);
  CHECK(ok.pass);
  CHECK(ok.report.clusters.size() == 2);
  CHECK(ok.report.max_size == 2);

  // Same islands, but a threshold below the biggest size.
  const auto too_big = sea_island_check(X, Z, 2, 1);
  CHECK_FALSE(too_big.pass);
  CHECK(too_big.size_threshold == 1);

  // A column of disagreement across the whole time axis spans.
  SpaceTimeConfig S = Z;
  for (int t = 0; t <= 5; ++t) S.at(1, 1, 3, t) = 9;
  const auto spanning = sea_island_check(S, Z, 1, 100);
  CHECK_FALSE(spanning.pass);
  CHECK(spanning.report.any_spanning);
}

TEST_CASE("periodicity scan classifies shifts of striped windows") {
  SpaceTimeConfig X = make_window(3, 3, 6, 4);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int i = 0; i < 6; ++i)
        for (int t = 0; t <= 4; ++t)
          X.at(a, b, i, t) = static_cast<Symbol>(i % 2);

  const PeriodReport report = periodicity_scan(X, 2);
  CHECK(report.bound == 2);
  CHECK(report.has_nontrivial_period());

  auto status_of = [&](std::array<int, 4> p) {
    for (const PeriodEntry& e : report.entries)
      if (e.p == p) return e.status;
    FAIL("shift not scanned");
    return PeriodEntry::Status::EmptyOverlap;
  };
  CHECK(status_of({0, 0, 2, 0}) == PeriodEntry::Status::Period);
  CHECK(status_of({1, 0, 0, 0}) == PeriodEntry::Status::Period);
  CHECK(status_of({0, 1, 0, 0}) == PeriodEntry::Status::Period);
  CHECK(status_of({0, 0, 0, 1}) == PeriodEntry::Status::Period);
  CHECK(status_of({0, 0, 1, 0}) == PeriodEntry::Status::Broken);
  CHECK(status_of({0, 0, 1, 1}) == PeriodEntry::Status::Broken);

  for (const PeriodEntry& e : report.entries) {
    // Canonical vectors only: first nonzero component positive.
    int first = 0;
    for (int v : e.p)
      if (v != 0) {
        first = v;
        break;
      }
    CHECK(first > 0);
    if (e.status == PeriodEntry::Status::Broken) {
      // The witness really is a mismatch.
      const Cell4& w = e.witness;
      CHECK(X.at(w.a, w.b, w.i, w.t) !=
            X.at(w.a + e.p[0], w.b + e.p[1], w.i + e.p[2], w.t + e.p[3]));
    }
  }

}

TEST_CASE("periodicity scan reports empty overlaps distinctly") {
  SpaceTimeConfig X = make_window(2, 2, 2, 1);
  const PeriodReport report = periodicity_scan(X, 3);
  bool saw_empty = false;
  for (const PeriodEntry& e : report.entries) {
    if (e.p == std::array<int, 4>{0, 0, 3, 0} ||
        e.p == std::array<int, 4>{0, 0, 2, 0}) {
      CHECK(e.status == PeriodEntry::Status::EmptyOverlap);
      saw_empty = true;
    }
  }
  CHECK(saw_empty);
  // A constant window is periodic under every overlapping shift.
  CHECK(report.has_nontrivial_period());
}

TEST_CASE("last-two-only restricts the scan to the (i, t) axes") {
  SpaceTimeConfig X = make_window(3, 3, 4, 3);
  const PeriodReport report = periodicity_scan(X, 1, true);
  CHECK(report.last_two_only);
  // Exactly the canonical nonzero vectors over two axes with bound 1.
  CHECK(report.entries.size() == 4);
  for (const PeriodEntry& e : report.entries) {
    CHECK(e.p[0] == 0);
    CHECK(e.p[1] == 0);
  }
}

TEST_CASE("patch periodicity scan uses the row and column axes") {
  Patch flat;
  flat.width = 4;
  flat.height = 3;
  flat.cells.assign(12, 0);
  const PeriodReport report = periodicity_scan(flat, 2);
  CHECK(report.has_nontrivial_period());
  for (const PeriodEntry& e : report.entries) {
    CHECK(e.p[0] == 0);
    CHECK(e.p[1] == 0);
    if (e.p == std::array<int, 4>{0, 0, 1, 0} ||
        e.p == std::array<int, 4>{0, 0, 0, 1})
      CHECK(e.status == PeriodEntry::Status::Period);
  }

  // A genuine Ammann patch has no small period.
  const TileSet ts = load_tileset("ammann16");
  const auto found = find_patch(ts, 10, 10, 10'000'000, 1);
  REQUIRE(found.status == SearchStatus::Found);
  const PeriodReport ammann = periodicity_scan(*found.patch, 3);
  CHECK_FALSE(ammann.has_nontrivial_period());
  for (const PeriodEntry& e : ammann.entries)
    CHECK(e.status == PeriodEntry::Status::Broken);
}

TEST_CASE("majority field reports the modal symbol with tie-break") {
  std::vector<SpaceTimeConfig> samples(4, make_window(2, 1, 2, 1));
  // Cell (0,0,0,0): values 2,2,5,5 -> tie, keep 2. Cell (1,0,1,1): 3,3,3,1.
  samples[0].at(0, 0, 0, 0) = 2;
  samples[1].at(0, 0, 0, 0) = 2;
  samples[2].at(0, 0, 0, 0) = 5;
  samples[3].at(0, 0, 0, 0) = 5;
  samples[0].at(1, 0, 1, 1) = 3;
  samples[1].at(1, 0, 1, 1) = 3;
  samples[2].at(1, 0, 1, 1) = 3;
  samples[3].at(1, 0, 1, 1) = 1;

  const MajorityField field = empirical_majority_field(samples);
  CHECK(field.extent == Extent4{2, 1, 2, 2});
  const std::size_t k0 = samples[0].index(0, 0, 0, 0);
  const std::size_t k1 = samples[0].index(1, 0, 1, 1);
  CHECK(field.modal[k0] == 2);
  CHECK(field.frequency[k0] == doctest::Approx(0.5));
  CHECK(field.modal[k1] == 3);
  CHECK(field.frequency[k1] == doctest::Approx(0.75));
  // Untouched cells are unanimous zeros.
  CHECK(field.modal[samples[0].index(0, 0, 1, 0)] == 0);
  CHECK(field.frequency[samples[0].index(0, 0, 1, 0)] == doctest::Approx(1.0));

  CHECK_THROWS_AS(empirical_majority_field(std::span<const SpaceTimeConfig>{}),
                  std::invalid_argument);
  std::vector<SpaceTimeConfig> mixed = {make_window(1, 1, 1, 1),
                                        make_window(2, 1, 1, 1)};
  CHECK_THROWS_AS(empirical_majority_field(mixed), std::invalid_argument);
}
