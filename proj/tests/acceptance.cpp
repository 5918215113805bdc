// End-to-end acceptance run. Each criterion prints exactly one
// [C# PASS]/[C# FAIL] line; the process exits nonzero if any failed.
// Thresholds and window sizes are pinned here on purpose -- they are the
// contract, not tunables.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "latgas/analysis.hpp"
#include "latgas/ca1d.hpp"
#include "latgas/cli.hpp"
#include "latgas/gibbs.hpp"
#include "latgas/io.hpp"
#include "latgas/pca.hpp"
#include "latgas/rng.hpp"
#include "latgas/stack3d.hpp"
#include "latgas/tileset.hpp"
#include "support.hpp"

using namespace latgas;
using namespace latgas::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
};

void expect(Outcome& o, bool condition, const std::string& message) {
  if (!condition && o.pass) {
    o.pass = false;
    o.note = message;
  }
}

// --- C1: tile-set gates ---------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const TileSet ts = load_tileset("ammann16");
  expect(o, ts.size() == 16, "expected 16 tiles");
  expect(o, check_deterministic(ts, Direction::NW).deterministic,
         "not NW-deterministic");
  expect(o, check_deterministic(ts, Direction::SE).deterministic,
         "not SE-deterministic");
  for (int p = 1; p <= 4 && o.pass; ++p)
    for (int q = 1; q <= 4 && o.pass; ++q)
      expect(o, find_torus_tiling(ts, p, q).status == SearchStatus::ProvenAbsent,
             "torus tiling exists at " + std::to_string(p) + "x" +
                 std::to_string(q));
  const auto patch = find_patch(ts, 8, 8, 10'000'000, 1);
  expect(o, patch.status == SearchStatus::Found, "no 8x8 patch in budget");
  if (patch.patch)
    expect(o, patch_is_valid(ts, *patch.patch), "witness patch invalid");
  return o;
}

// --- C2: blank dynamics ---------------------------------------------------

Outcome criterion2() {
  Outcome o;
  const int L = 24, T = 16;
  int cases = 0;
  for (std::uint64_t patch_seed = 0; patch_seed < 10 && o.pass; ++patch_seed) {
    const Reference1D ref = make_reference(L, T, patch_seed);
    const CaRule rule(ref.ts);
    for (const auto& row : ref.trajectory.rows)
      for (Symbol s : row)
        expect(o, s != rule.blank(), "reference run contains a blank");

    std::mt19937_64 gen(1000 + patch_seed);
    std::uniform_int_distribution<int> site(0, L - 1);
    for (int rep = 0; rep < 10 && o.pass; ++rep) {
      const int k = site(gen);
      Config1D dirty = ref.init;
      dirty.cells[k] = rule.blank();
      const Trajectory1D got = run1d(rule, dirty, T);
      for (int t = 0; t <= T && o.pass; ++t)
        for (int i = 0; i < L; ++i) {
          const bool in_cone = i <= k && i >= k - t;
          const Symbol want =
              in_cone ? rule.blank() : ref.trajectory.at(t, i);
          if (got.at(t, i) != want) {
            expect(o, false,
                   "case " + std::to_string(cases) + ": cell (" +
                       std::to_string(i) + "," + std::to_string(t) +
                       ") wrong after blank at " + std::to_string(k));
            break;
          }
        }
      ++cases;
    }
  }
  expect(o, cases == 100 || !o.pass, "expected 100 cases");
  return o;
}

// --- C3: commuting diagram -------------------------------------------------

Outcome criterion3() {
  Outcome o;
  const TileSet ammann = load_tileset("ammann16");
  std::mt19937_64 gen(33);
  for (int trial = 0; trial < 200 && o.pass; ++trial) {
    std::uniform_int_distribution<int> colors(2, 5);
    const int n_colors = colors(gen);
    std::uniform_int_distribution<int> count(
        2, std::min(16, n_colors * n_colors));
    const TileSet ts = trial % 4 == 0
                           ? ammann
                           : random_nw_tileset(trial, count(gen), n_colors);
    const CaRule rule(ts);

    std::uniform_int_distribution<int> extent(1, 8), length(1, 32),
        symbol(0, ts.size());
    const int A = extent(gen), B = extent(gen), L = length(gen);
    Config1D x;
    x.cells.resize(L);
    for (Symbol& s : x.cells) s = static_cast<Symbol>(symbol(gen));
    switch (trial % 3) {
      case 0: x.boundary = Boundary1D::periodic(); break;
      case 1: x.boundary = Boundary1D::feed_blank(); break;
      default:
        x.boundary =
            Boundary1D::feed_stream({static_cast<Symbol>(symbol(gen))});
    }

    const Config3D left = stacked_step(rule, clone_config(x, A, B));
    const Config3D right = clone_config(step1d(rule, x), A, B);
    expect(o, left.cells_equal(right) && left.boundary_i == right.boundary_i,
           "diagram broken at trial " + std::to_string(trial));
  }
  return o;
}

// --- C4: erosion ------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  const int L = 16, T = 12, margin = 2;
  const Reference1D ref = make_reference(L, T, 44);
  const CaRule rule(ref.ts);
  std::mt19937_64 gen(44);
  std::uniform_int_distribution<int> count(1, 8), pa(0, 15), pb(0, 15),
      pi(margin, L - margin - 1), value(0, 16);

  for (int trial = 0; trial < 50 && o.pass; ++trial) {
    std::set<std::array<int, 3>> sites;
    std::vector<Flip> flips;
    const int wanted = count(gen);
    while (static_cast<int>(flips.size()) < wanted) {
      Flip f{pa(gen), pb(gen), pi(gen), 0};
      if (!sites.insert({f.a, f.b, f.i}).second) continue;
      const Symbol current = ref.init.cells[f.i];
      do {
        f.value = static_cast<Symbol>(value(gen));
      } while (f.value == current);
      flips.push_back(f);
    }
    const ErosionResult result =
        erosion_probe(rule, ref.init, 16, 16, flips, T, margin);
    expect(o, result.recovered && result.time <= T,
           "flip set " + std::to_string(trial) + " (" +
               std::to_string(wanted) + " flips) not recovered within T=12");
  }
  return o;
}

// --- C5: noise rate ---------------------------------------------------------

Outcome criterion5() {
  Outcome o;
  const TileSet ts = load_tileset("ammann16");
  const CaRule rule(ts);
  const Config3D init = Config3D::filled(8, 8, 16, 0, BoundaryI::periodic());
  for (const double eps : {0.002, 0.01, 0.05}) {
    std::size_t errors = 0, checked = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const SpaceTimeConfig X =
          sample_trajectory(rule, init, NoiseParams{eps, 17}, seed, 16);
      const ErrorSetResult r = error_set(rule, X);
      errors += r.cells.size();
      checked += r.checked;
    }
    const double n = static_cast<double>(checked);
    const double rate = static_cast<double>(errors) / n;
    const double sigma = std::sqrt(eps * (1.0 - eps) / n);
    std::ostringstream detail;
    detail << "eps " << eps << ": rate " << rate << " outside 3 sigma ("
           << sigma << ")";
    expect(o, std::abs(rate - eps) <= 3.0 * sigma, detail.str());
  }
  return o;
}

// --- C6: stability curve ----------------------------------------------------

struct StabilityData {
  Reference1D ref;          // shared 1D reference (L=16, T=64)
  SpaceTimeConfig clean;    // deterministic 16x16x16xT reference
};

StabilityData make_stability_data() {
  const int L = 16, T = 64;
  Reference1D ref = make_reference(L, T, 6);
  const CaRule rule(ref.ts);
  const Config3D init = clone_config(ref.init, 16, 16);
  SpaceTimeConfig clean =
      sample_trajectory(rule, init, NoiseParams{0.0, 17}, 0, T);
  return {std::move(ref), std::move(clean)};
}

Outcome criterion6(const StabilityData& data) {
  Outcome o;
  const CaRule rule(data.ref.ts);
  const Config3D init = clone_config(data.ref.init, 16, 16);
  const int T = 64;

  for (const auto& row : data.ref.trajectory.rows)
    for (Symbol s : row)
      expect(o, s != rule.blank(), "reference contains blanks");

  // Fixed point of the deterministic dynamics: zero disagreement.
  expect(o, error_set(rule, data.clean).cells.empty(),
         "deterministic reference violates the rule");

  // 20 seeds at eps = 0.002: small disagreement, sea of agreement.
  int island_passes = 0;
  for (std::uint64_t seed = 0; seed < 20 && o.pass; ++seed) {
    const SpaceTimeConfig X =
        sample_trajectory(rule, init, NoiseParams{0.002, 17}, seed, T);
    const DisagreementSet d = disagreements(X, data.clean);
    expect(o, d.rate() < 0.1,
           "seed " + std::to_string(seed) + ": disagreement rate " +
               std::to_string(d.rate()) + " >= 0.1");
    const SeaIslandVerdict v = sea_island_check(
        X, data.clean, 2, std::numeric_limits<std::size_t>::max());
    if (v.pass) ++island_passes;
  }
  expect(o, island_passes >= 18,
         "sea-island pass count " + std::to_string(island_passes) + "/20");

  // Monotonicity across the grid: Spearman over (eps, rate) pairs.
  std::vector<double> xs, ys;
  for (const double eps : {0.002, 0.005, 0.01, 0.02, 0.05})
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SpaceTimeConfig X =
          sample_trajectory(rule, init, NoiseParams{eps, 17}, seed, T);
      xs.push_back(eps);
      ys.push_back(disagreements(X, data.clean).rate());
    }
  const double rho = spearman(xs, ys);
  expect(o, rho > 0.9, "Spearman rho " + std::to_string(rho) + " <= 0.9");
  return o;
}

// --- C7: temperature map ------------------------------------------------

Outcome criterion7() {
  Outcome o;
  const int m = 17;
  const auto unit = beta_to_epsilon(0.37, 1.0, m);
  expect(o, std::abs(unit.alpha) < 1e-12 && std::abs(unit.epsilon - 0.37) < 1e-12,
         "beta = 1 is not the identity");
  const auto halved = beta_to_epsilon(0.5, 2.0, m);
  expect(o, std::abs(halved.epsilon - 1.0 / 17.0) < 1e-12,
         "(1/2, beta=2) did not map to 1/17");

  for (const double eps0 : {0.1, 0.5, 0.9}) {
    double last = 2.0;
    for (int k = 1; k <= 20; ++k) {
      const double beta = 0.25 * k;
      const auto [alpha, eps] = beta_to_epsilon(eps0, beta, m);
      std::ostringstream at;
      at << "eps0 " << eps0 << ", beta " << beta;
      expect(o, eps < last, "not strictly decreasing at " + at.str());
      last = eps;
      expect(o,
             std::abs(beta * phi_match(eps0) - (alpha + phi_match(eps))) <
                 1e-12,
             "match identity broken at " + at.str());
      expect(o,
             std::abs(beta * phi_mismatch(eps0, m) -
                      (alpha + phi_mismatch(eps, m))) < 1e-12,
             "mismatch identity broken at " + at.str());
    }
  }
  return o;
}

// --- C8: DLR shadow --------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  const TileSet ts = load_tileset("ammann16");
  const CaRule rule(ts);
  const Config3D init = Config3D::filled(2, 2, 2, 6, BoundaryI::periodic());
  const int T = 2;

  for (const double eps : {0.1, 0.3}) {
    const SpaceTimeConfig X = sample_trajectory(
        rule, init, NoiseParams{eps, 17}, eps == 0.1 ? 81 : 82, T);
    for (int t = 1; t <= T && o.pass; ++t)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int i = 0; i < 2; ++i) {
            const Cell4 cell{a, b, i, t};
            const auto direct = gibbs_conditional(rule, X, cell, eps);
            const auto oracle = path_conditional_oracle(ts, X, cell, eps);
            double worst = 0.0;
            for (std::size_t s = 0; s < direct.size(); ++s)
              worst = std::max(worst, std::abs(direct[s] - oracle[s]));
            std::ostringstream at;
            at << "eps " << eps << " cell (" << a << "," << b << "," << i
               << "," << t << "): residual " << worst;
            expect(o, worst < 1e-10, at.str());
          }
  }

  // Monte Carlo: redrawing the probe cell from its conditional leaves
  // the marginal unchanged (DLR fixed-point property).
  const Cell4 probe{0, 0, 0, 1};
  const int samples = 20'000;
  for (const double eps : {0.1, 0.3}) {
    std::vector<std::uint64_t> direct(17, 0), resampled(17, 0);
    const CellRng redraw_rng(eps == 0.1 ? 910 : 930);
    for (int s = 0; s < samples; ++s) {
      const SpaceTimeConfig X = sample_trajectory(
          rule, init, NoiseParams{eps, 17},
          200'000 + static_cast<std::uint64_t>(s) * 2 + (eps == 0.1 ? 0 : 1),
          T);
      ++direct[X.at(probe)];
      const auto cond = path_conditional_oracle(ts, X, probe, eps);
      const double u = CellRng::uniform01(redraw_rng.cell_key(0, 0, 0, s), 0);
      double acc = 0.0;
      Symbol drawn = 16;
      for (int sigma = 0; sigma < 17; ++sigma) {
        acc += cond[sigma];
        if (u < acc) {
          drawn = static_cast<Symbol>(sigma);
          break;
        }
      }
      ++resampled[drawn];
    }
    const double n = samples;
    for (int sigma = 0; sigma < 17; ++sigma) {
      const double p =
          (static_cast<double>(direct[sigma]) + resampled[sigma]) / (2.0 * n);
      const double sd = std::sqrt(std::max(p * (1.0 - p) * 2.0 / n, 1e-12));
      const double diff = std::abs(static_cast<double>(direct[sigma]) -
                                   static_cast<double>(resampled[sigma])) /
                          n;
      std::ostringstream at;
      at << "MC eps " << eps << " symbol " << sigma << ": |diff| " << diff
         << " > 3 sigma " << 3.0 * sd;
      expect(o, diff <= 3.0 * sd, at.str());
    }
  }
  return o;
}

// --- C9: cluster oracle -----------------------------------------------------

Outcome criterion9() {
  Outcome o;
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 100 && o.pass; ++trial) {
    std::uniform_int_distribution<int> axis(1, 12);
    const Extent4 extent{axis(gen), axis(gen), axis(gen), axis(gen)};
    const long volume =
        static_cast<long>(extent.a) * extent.b * extent.i * extent.t;
    std::uniform_int_distribution<int> count(
        1, static_cast<int>(std::min<long>(volume, 200)));

    DisagreementSet d;
    d.extent = extent;
    std::set<Cell4> cells;
    std::uniform_int_distribution<int> da(0, extent.a - 1),
        db(0, extent.b - 1), di(0, extent.i - 1), dt(0, extent.t - 1);
    const int wanted = count(gen);
    while (static_cast<int>(cells.size()) < wanted)
      cells.insert(Cell4{da(gen), db(gen), di(gen), dt(gen)});
    d.cells.assign(cells.begin(), cells.end());

    for (const Metric metric : {Metric::L1, Metric::Linf})
      for (int range = 1; range <= 3 && o.pass; ++range) {
        const ClusterReport got = clusters(d, range, metric);
        const auto oracle = bfs_clusters(d.cells, range, metric);
        bool equal = got.clusters.size() == oracle.size();
        for (std::size_t c = 0; equal && c < oracle.size(); ++c)
          equal = got.clusters[c].cells == oracle[c];
        expect(o, equal,
               "partition mismatch at trial " + std::to_string(trial) +
                   ", range " + std::to_string(range));
      }
  }
  return o;
}

// --- C10: non-periodicity ---------------------------------------------------

Outcome criterion10(const StabilityData& data) {
  Outcome o;

  // Periods of a cloned valid window: the redundancy axes and nothing else.
  {
    const Reference1D ref = make_reference(12, 8, 10);
    const CaRule rule(ref.ts);
    const SpaceTimeConfig X = sample_trajectory(
        rule, clone_config(ref.init, 6, 6), NoiseParams{0.0, 17}, 0, 8);
    const PeriodReport report = periodicity_scan(X, 4);
    bool saw_a = false, saw_b = false;
    for (const PeriodEntry& e : report.entries) {
      if (e.p == std::array<int, 4>{1, 0, 0, 0}) {
        saw_a = e.status == PeriodEntry::Status::Period;
      } else if (e.p == std::array<int, 4>{0, 1, 0, 0}) {
        saw_b = e.status == PeriodEntry::Status::Period;
      }
      if (e.p[2] != 0 || e.p[3] != 0) {
        std::ostringstream at;
        at << "shift (" << e.p[0] << "," << e.p[1] << "," << e.p[2] << ","
           << e.p[3] << ")";
        expect(o, e.status == PeriodEntry::Status::Broken,
               at.str() + " is not refuted by a witness");
      }
    }
    expect(o, saw_a, "(1,0,0,0) not reported as a period");
    expect(o, saw_b, "(0,1,0,0) not reported as a period");
  }

  // Majority vote across 50 noisy samples reproduces the reference.
  {
    const CaRule rule(data.ref.ts);
    const Config3D init = clone_config(data.ref.init, 16, 16);
    std::vector<SpaceTimeConfig> samples;
    samples.reserve(50);
    for (std::uint64_t seed = 100; seed < 150; ++seed)
      samples.push_back(
          sample_trajectory(rule, init, NoiseParams{0.002, 17}, seed, 64));
    const MajorityField field = empirical_majority_field(samples);
    std::size_t modal_errors = 0;
    double min_freq = 1.0;
    for (std::size_t k = 0; k < field.modal.size(); ++k) {
      if (field.modal[k] != data.clean.cells[k]) ++modal_errors;
      min_freq = std::min(min_freq, field.frequency[k]);
    }
    expect(o, modal_errors == 0,
           std::to_string(modal_errors) + " cells with wrong modal value");
    expect(o, min_freq >= 0.9,
           "minimum modal frequency " + std::to_string(min_freq) + " < 0.9");
  }
  return o;
}

// --- C11: reproducibility ---------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome criterion11() {
  Outcome o;
  const TempDir dir("latgas-acceptance");
  RunConfig config;
  config.extent_a = 6;
  config.extent_b = 6;
  config.length = 12;
  config.steps = 16;
  config.epsilons = {0.002, 0.01};
  config.seeds = {0, 1, 2};

  std::vector<std::string> outputs;
  int run = 0;
  for (const int threads : {1, 4, 1}) {
    config.threads = threads;
    config.out_dir = dir.file("run" + std::to_string(run++));
    std::ostringstream log;
    const int rc = cmd_sweep_stability(config, log);
    expect(o, rc == 0, "sweep failed: " + log.str());
    if (rc == 0)
      outputs.push_back(read_file(config.out_dir + "/stability.csv"));
  }
  expect(o, outputs.size() == 3 && !outputs[0].empty(), "missing sweep output");
  if (outputs.size() == 3) {
    expect(o, outputs[0] == outputs[1],
           "threads=1 and threads=4 outputs differ");
    expect(o, outputs[0] == outputs[2], "identical reruns differ");
  }
  return o;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* label;
    Outcome outcome;
    double seconds;
  };
  std::vector<Entry> entries;

  StabilityData stability = make_stability_data();

  const auto run = [&](int id, const char* label, auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    entries.push_back({id, label, o, seconds});
    std::cout << "[C" << id << (o.pass ? " PASS] " : " FAIL] ") << label
              << " (" << fmt_g12(seconds) << "s)";
    if (!o.pass) std::cout << " -- " << o.note;
    std::cout << "\n" << std::flush;
  };

  run(1, "tile-set gates", criterion1);
  run(2, "blank dynamics", criterion2);
  run(3, "commuting diagram", criterion3);
  run(4, "erosion", criterion4);
  run(5, "noise rate", criterion5);
  run(6, "stability curve", [&] { return criterion6(stability); });
  run(7, "temperature map", criterion7);
  run(8, "DLR conditionals", criterion8);
  run(9, "cluster oracle", criterion9);
  run(10, "non-periodicity", [&] { return criterion10(stability); });
  run(11, "reproducibility", criterion11);

  int failed = 0;
  for (const Entry& e : entries) failed += e.outcome.pass ? 0 : 1;
  std::cout << "acceptance: " << (entries.size() - failed) << "/"
            << entries.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
