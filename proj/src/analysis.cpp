#include "latgas/analysis.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <unordered_map>

namespace latgas {

namespace {

Extent4 window_extent(const SpaceTimeConfig& X) {
  return {X.extent_a, X.extent_b, X.length, X.steps + 1};
}

int coord(const Cell4& c, int axis) {
  return axis == 0 ? c.a : axis == 1 ? c.b : axis == 2 ? c.i : c.t;
}

// Plain union-find with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    for (std::size_t k = 0; k < n; ++k) parent_[k] = k;
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (size_[x] < size_[y]) std::swap(x, y);
    parent_[y] = x;
    size_[x] += size_[y];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

std::uint64_t pack(const Cell4& c) {
  // Coordinates are window-local and comfortably below 2^16.
  return (((static_cast<std::uint64_t>(c.a) << 16 | c.b) << 16 | c.i) << 16) |
         static_cast<std::uint64_t>(c.t);
}

}  // namespace

DisagreementSet disagreements(const SpaceTimeConfig& X,
                              const SpaceTimeConfig& Z) {
  if (!X.same_extents(Z))
    throw std::invalid_argument("disagreements: extent mismatch");
  DisagreementSet d;
  d.extent = window_extent(X);
  for (int a = 0; a < X.extent_a; ++a)
    for (int b = 0; b < X.extent_b; ++b)
      for (int i = 0; i < X.length; ++i)
        for (int t = 0; t <= X.steps; ++t)
          if (X.at(a, b, i, t) != Z.at(a, b, i, t))
            d.cells.push_back({a, b, i, t});
  return d;  // loop order is (a, b, i, t): already sorted
}

ClusterReport clusters(const DisagreementSet& d, int range, Metric metric) {
  if (range < 1) throw std::invalid_argument("clusters: range must be >= 1");

  ClusterReport report;
  report.range = range;
  report.metric = metric;
  report.extent = d.extent;
  report.total_cells = d.cells.size();
  if (d.cells.empty()) return report;

  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(d.cells.size() * 2);
  for (std::size_t k = 0; k < d.cells.size(); ++k)
    index.emplace(pack(d.cells[k]), k);

  // Union each cell with every lattice offset within `range`; scanning
  // only lexicographically-positive offsets covers each pair once.
  UnionFind uf(d.cells.size());
  for (std::size_t k = 0; k < d.cells.size(); ++k) {
    const Cell4& c = d.cells[k];
    for (int da = 0; da <= range; ++da)
      for (int db = -range; db <= range; ++db)
        for (int di = -range; di <= range; ++di)
          for (int dt = -range; dt <= range; ++dt) {
            if (std::array{da, db, di, dt} <= std::array{0, 0, 0, 0}) continue;
            if (metric == Metric::L1 &&
                da + std::abs(db) + std::abs(di) + std::abs(dt) > range)
              continue;
            if (metric == Metric::Linf &&
                std::max({da, std::abs(db), std::abs(di), std::abs(dt)}) >
                    range)
              continue;
            const Cell4 other{c.a + da, c.b + db, c.i + di, c.t + dt};
            if (auto hit = index.find(pack(other)); hit != index.end())
              uf.unite(k, hit->second);
          }
  }

  std::unordered_map<std::size_t, std::size_t> root_to_cluster;
  for (std::size_t k = 0; k < d.cells.size(); ++k) {
    const std::size_t root = uf.find(k);
    auto [it, fresh] = root_to_cluster.emplace(root, report.clusters.size());
    if (fresh) report.clusters.emplace_back();
    Cluster& cl = report.clusters[it->second];
    const Cell4& c = d.cells[k];
    if (cl.cells.empty()) {
      for (int ax = 0; ax < 4; ++ax) cl.lo[ax] = cl.hi[ax] = coord(c, ax);
    } else {
      for (int ax = 0; ax < 4; ++ax) {
        cl.lo[ax] = std::min(cl.lo[ax], coord(c, ax));
        cl.hi[ax] = std::max(cl.hi[ax], coord(c, ax));
      }
    }
    cl.cells.push_back(c);
  }

  for (Cluster& cl : report.clusters) {
    std::sort(cl.cells.begin(), cl.cells.end());
    for (int ax = 0; ax < 4; ++ax)
      if (cl.lo[ax] == 0 && cl.hi[ax] == d.extent.axis(ax) - 1)
        cl.spanning = true;
    report.max_size = std::max(report.max_size, cl.cells.size());
    report.any_spanning = report.any_spanning || cl.spanning;
  }
  std::sort(report.clusters.begin(), report.clusters.end(),
            [](const Cluster& x, const Cluster& y) {
              return x.cells.front() < y.cells.front();
            });
  return report;
}

namespace {

std::vector<std::array<int, 4>> neighborhood_offsets(int range, Metric metric) {
  std::vector<std::array<int, 4>> offsets;
  for (int da = -range; da <= range; ++da)
    for (int db = -range; db <= range; ++db)
      for (int di = -range; di <= range; ++di)
        for (int dt = -range; dt <= range; ++dt) {
          if (da == 0 && db == 0 && di == 0 && dt == 0) continue;
          const int l1 = std::abs(da) + std::abs(db) + std::abs(di) + std::abs(dt);
          if (metric == Metric::L1 && l1 > range) continue;
          offsets.push_back({da, db, di, dt});
        }
  return offsets;
}

}  // namespace

IncrementalClusters::IncrementalClusters(Extent4 extent, int range,
                                         Metric metric)
    : extent_(extent), range_(range), metric_(metric),
      offsets_(neighborhood_offsets(range, metric)) {
  if (range < 1)
    throw std::invalid_argument("IncrementalClusters: range must be >= 1");
}

std::size_t IncrementalClusters::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void IncrementalClusters::add_cells(std::span<const Cell4> cells) {
  for (const Cell4& c : cells) {
    const std::uint64_t key = pack(c);
    if (!index_.emplace(key, cells_.size()).second)
      throw std::invalid_argument("IncrementalClusters: duplicate cell");
    const std::size_t k = cells_.size();
    cells_.push_back(c);
    parent_.push_back(k);
    size_.push_back(1);
    lo_.push_back({c.a, c.b, c.i, c.t});
    hi_.push_back({c.a, c.b, c.i, c.t});

    for (const auto& d : offsets_) {
      const Cell4 other{c.a + d[0], c.b + d[1], c.i + d[2], c.t + d[3]};
      const auto hit = index_.find(pack(other));
      if (hit == index_.end()) continue;
      std::size_t x = find(k), y = find(hit->second);
      if (x == y) continue;
      if (size_[x] < size_[y]) std::swap(x, y);
      parent_[y] = x;
      size_[x] += size_[y];
      for (int ax = 0; ax < 4; ++ax) {
        lo_[x][ax] = std::min(lo_[x][ax], lo_[y][ax]);
        hi_[x][ax] = std::max(hi_[x][ax], hi_[y][ax]);
      }
    }
  }
}

IncrementalClusters::Stats IncrementalClusters::stats(int through_t) {
  Stats s;
  s.total_cells = cells_.size();
  std::vector<bool> seen(cells_.size(), false);
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    const std::size_t root = find(k);
    if (seen[root]) continue;
    seen[root] = true;
    ++s.n_clusters;
    s.max_size = std::max(s.max_size, size_[root]);
    const std::array<int, 4> full{extent_.a - 1, extent_.b - 1, extent_.i - 1,
                                  through_t};
    for (int ax = 0; ax < 4; ++ax)
      if (lo_[root][ax] == 0 && hi_[root][ax] == full[ax]) s.any_spanning = true;
  }
  return s;
}

SeaIslandVerdict sea_island_check(const SpaceTimeConfig& X,
                                  const SpaceTimeConfig& Z, int range,
                                  std::size_t size_threshold, Metric metric) {
  SeaIslandVerdict verdict;
  verdict.size_threshold = size_threshold;
  verdict.report = clusters(disagreements(X, Z), range, metric);
  verdict.pass = !verdict.report.any_spanning &&
                 verdict.report.max_size <= size_threshold;
  return verdict;
}

namespace {

// Evaluate one shift vector on an indexable window.
template <typename At>
PeriodEntry evaluate_shift(const std::array<int, 4>& p, const Extent4& e,
                           At&& at) {
  PeriodEntry entry;
  entry.p = p;

  const int a0 = std::max(0, -p[0]), a1 = std::min(e.a, e.a - p[0]);
  const int b0 = std::max(0, -p[1]), b1 = std::min(e.b, e.b - p[1]);
  const int i0 = std::max(0, -p[2]), i1 = std::min(e.i, e.i - p[2]);
  const int t0 = std::max(0, -p[3]), t1 = std::min(e.t, e.t - p[3]);
  if (a0 >= a1 || b0 >= b1 || i0 >= i1 || t0 >= t1) {
    entry.status = PeriodEntry::Status::EmptyOverlap;
    return entry;
  }

  for (int a = a0; a < a1; ++a)
    for (int b = b0; b < b1; ++b)
      for (int i = i0; i < i1; ++i)
        for (int t = t0; t < t1; ++t)
          if (at(a, b, i, t) != at(a + p[0], b + p[1], i + p[2], t + p[3])) {
            entry.status = PeriodEntry::Status::Broken;
            entry.witness = {a, b, i, t};
            return entry;
          }
  entry.status = PeriodEntry::Status::Period;
  return entry;
}

bool canonical(const std::array<int, 4>& p) {
  for (int v : p) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;  // zero vector
}

template <typename At>
PeriodReport scan(const Extent4& e, int bound, bool last_two_only, At&& at) {
  if (bound < 1)
    throw std::invalid_argument("periodicity_scan: bound must be >= 1");
  PeriodReport report;
  report.bound = bound;
  report.last_two_only = last_two_only;
  const int ab = last_two_only ? 0 : bound;
  for (int pa = -ab; pa <= ab; ++pa)
    for (int pb = -ab; pb <= ab; ++pb)
      for (int pi = -bound; pi <= bound; ++pi)
        for (int pt = -bound; pt <= bound; ++pt) {
          const std::array<int, 4> p{pa, pb, pi, pt};
          if (!canonical(p)) continue;
          report.entries.push_back(evaluate_shift(p, e, at));
        }
  return report;
}

}  // namespace

bool PeriodReport::has_nontrivial_period() const {
  return std::any_of(entries.begin(), entries.end(), [](const PeriodEntry& e) {
    return e.status == PeriodEntry::Status::Period;
  });
}

PeriodReport periodicity_scan(const SpaceTimeConfig& X, int bound,
                              bool last_two_only) {
  return scan(window_extent(X), bound, last_two_only,
              [&X](int a, int b, int i, int t) { return X.at(a, b, i, t); });
}

PeriodReport periodicity_scan(const Patch& patch, int bound) {
  const Extent4 e{1, 1, patch.height, patch.width};
  return scan(e, bound, /*last_two_only=*/true,
              [&patch](int, int, int r, int c) { return patch.at(r, c); });
}

MajorityField empirical_majority_field(
    std::span<const SpaceTimeConfig> samples) {
  if (samples.empty())
    throw std::invalid_argument("empirical_majority_field: no samples");
  for (const SpaceTimeConfig& s : samples)
    if (!s.same_extents(samples.front()))
      throw std::invalid_argument("empirical_majority_field: extent mismatch");

  const SpaceTimeConfig& head = samples.front();
  MajorityField field;
  field.extent = window_extent(head);
  field.modal.resize(head.volume());
  field.frequency.resize(head.volume());

  std::vector<std::uint32_t> counts(256);
  for (std::size_t cell = 0; cell < head.volume(); ++cell) {
    std::fill(counts.begin(), counts.end(), 0);
    for (const SpaceTimeConfig& s : samples) ++counts[s.cells[cell]];
    std::size_t best = 0;
    for (std::size_t v = 1; v < counts.size(); ++v)
      if (counts[v] > counts[best]) best = v;  // ties keep the smaller id
    field.modal[cell] = static_cast<Symbol>(best);
    field.frequency[cell] =
        static_cast<double>(counts[best]) / static_cast<double>(samples.size());
  }
  return field;
}

}  // namespace latgas
