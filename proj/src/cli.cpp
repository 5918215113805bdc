#include "latgas/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "latgas/analysis.hpp"
#include "latgas/ca1d.hpp"
#include "latgas/gibbs.hpp"
#include "latgas/io.hpp"
#include "latgas/pca.hpp"
#include "latgas/rng.hpp"
#include "latgas/stack3d.hpp"
#include "latgas/tileset.hpp"

namespace latgas {

namespace {

// Run `body` and map exceptions to exit code 2 with a diagnostic.
template <typename Body>
int guarded(std::ostream& out, Body&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    out << "error: " << e.what() << '\n';
    return 2;
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

// Stream sink selection: '-' means the command's own output stream.
std::ostream& select_sink(const std::string& path, std::ostream& fallback,
                          std::ofstream& storage) {
  if (path == "-" || path.empty()) return fallback;
  storage = open_output(path);
  return storage;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open input file: " + path);
  return file;
}

Metric parse_metric(const std::string& name) {
  if (name == "l1") return Metric::L1;
  if (name == "linf") return Metric::Linf;
  throw std::invalid_argument("unknown metric `" + name + "` (l1 or linf)");
}

// Resolve an init spec to a 1D window of `length` cells able to run for
// `steps` steps, plus the boundary policy requested. For patch-backed
// inits the natural boundary is the patch's own continuation stream.
Config1D resolve_init_1d(const CaRule& rule, const TileSet& ts,
                         const std::string& init, const std::string& boundary,
                         int length, int steps, std::uint64_t budget,
                         std::uint64_t order_seed) {
  Config1D x;

  std::optional<ReferenceRun> run;
  if (init == "blank") {
    x.cells.assign(static_cast<std::size_t>(length), rule.blank());
  } else if (init == "search" || init.starts_with("patch:")) {
    Patch patch;
    if (init == "search") {
      // Smallest patch a (length, steps) reference run needs.
      const auto result =
          find_patch(ts, steps + length, length + 1, budget, order_seed);
      if (result.status == SearchStatus::BudgetExhausted)
        throw std::runtime_error(
            "patch search exhausted its node budget; raise --budget");
      if (result.status == SearchStatus::ProvenAbsent)
        throw std::runtime_error(
            "no patch of the required size exists for this tile set");
      patch = *result.patch;
    } else {
      auto file = open_input(init.substr(6));
      patch = read_patch(file);
      if (!patch_is_valid(ts, patch))
        throw std::runtime_error("patch file fails adjacency validation");
    }
    run = reference_run_from_patch(patch, length, steps);
    x.cells = run->trajectory.rows[0];
  } else {
    throw std::invalid_argument("unknown init spec `" + init + "`");
  }

  const std::string resolved =
      boundary == "auto" ? (run ? "stream" : "blank") : boundary;
  if (resolved == "periodic") {
    x.boundary = Boundary1D::periodic();
  } else if (resolved == "blank") {
    x.boundary = Boundary1D::feed_blank();
  } else if (resolved == "stream" || resolved == "reference") {
    if (!run)
      throw std::invalid_argument(
          "a stream boundary needs a patch-backed init");
    x.boundary = Boundary1D::feed_stream(run->stream);
  } else {
    throw std::invalid_argument("unknown boundary `" + boundary + "`");
  }
  return x;
}

std::string fmt_cell(const Cell4& c) {
  std::ostringstream s;
  s << c.a << ':' << c.b << ':' << c.i << ':' << c.t;
  return s.str();
}

std::string join_u64(const std::vector<std::uint64_t>& values) {
  std::ostringstream s;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) s << ',';
    s << values[k];
  }
  return s.str();
}

std::string join_g12(const std::vector<double>& values) {
  std::ostringstream s;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) s << ',';
    s << fmt_g12(values[k]);
  }
  return s.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// tileset

int cmd_tileset_check(const TilesetCheckArgs& args, std::ostream& out) {
  return guarded(out, [&]() -> int {
    bool ok = true;
    std::optional<TileSet> ts;
    try {
      ts = load_tileset(args.tileset);
      out << "gate parse: ok (" << ts->size() << " tiles)\n";
    } catch (const TilesetError& e) {
      out << "gate parse: FAIL (" << e.what() << ")\n";
      return 1;
    }

    for (const Direction dir : {Direction::NW, Direction::SE}) {
      const auto report = check_deterministic(*ts, dir);
      const char* name = dir == Direction::NW ? "nw-deterministic"
                                              : "se-deterministic";
      if (report.deterministic) {
        out << "gate " << name << ": ok\n";
      } else {
        ok = false;
        out << "gate " << name << ": FAIL (" << report.violations.size()
            << " edge pairs shared";
        for (const auto& [x, y] : report.violations) out << " (" << x << ',' << y << ')';
        out << ")\n";
      }
    }
    if (!ok) return 1;  // rho is undefined without NW-determinism

    for (int p = 1; p <= args.torus_bound && ok; ++p)
      for (int q = 1; q <= args.torus_bound && ok; ++q) {
        const auto result = find_torus_tiling(*ts, p, q);
        if (result.status == SearchStatus::Found) {
          ok = false;
          out << "gate torus-absence: FAIL (" << p << "x" << q
              << " torus tiling exists)\n";
        }
      }
    if (ok)
      out << "gate torus-absence: ok (no torus tiling up to "
          << args.torus_bound << "x" << args.torus_bound << ")\n";

    const auto patch =
        find_patch(*ts, args.patch_width, args.patch_height, args.budget,
                   args.order_seed);
    switch (patch.status) {
      case SearchStatus::Found:
        if (!patch_is_valid(*ts, *patch.patch)) {
          ok = false;
          out << "gate patch-existence: FAIL (witness failed validation)\n";
        } else {
          out << "gate patch-existence: ok (" << args.patch_width << "x"
              << args.patch_height << " in " << patch.nodes << " nodes)\n";
        }
        break;
      case SearchStatus::ProvenAbsent:
        ok = false;
        out << "gate patch-existence: FAIL (no " << args.patch_width << "x"
            << args.patch_height << " patch exists)\n";
        break;
      case SearchStatus::BudgetExhausted:
        ok = false;
        out << "gate patch-existence: FAIL (undecided within budget)\n";
        break;
    }
    return ok ? 0 : 1;
  });
}

int cmd_tileset_patch(const TilesetPatchArgs& args, std::ostream& out) {
  return guarded(out, [&]() -> int {
    const TileSet ts = load_tileset(args.tileset);
    const auto result =
        find_patch(ts, args.width, args.height, args.budget, args.order_seed);
    if (result.status == SearchStatus::ProvenAbsent) {
      out << "no " << args.width << "x" << args.height
          << " patch exists (proven, " << result.nodes << " nodes)\n";
      return 1;
    }
    if (result.status == SearchStatus::BudgetExhausted) {
      out << "undecided: node budget " << args.budget
          << " exhausted; raise --budget\n";
      return 2;
    }
    std::ofstream storage;
    write_patch(select_sink(args.out_path, out, storage), *result.patch);
    if (args.out_path != "-" && !args.out_path.empty())
      out << "patch " << args.width << "x" << args.height << " -> "
          << args.out_path << " (" << result.nodes << " nodes)\n";
    return 0;
  });
}

// ---------------------------------------------------------------------------
// ca

int cmd_ca_run(const CaRunArgs& args, std::ostream& out) {
  return guarded(out, [&]() -> int {
    const TileSet ts = load_tileset(args.tileset);
    const CaRule rule(ts);
    const Config1D x0 =
        resolve_init_1d(rule, ts, args.init, args.boundary, args.length,
                        args.steps, args.budget, args.order_seed);
    const Trajectory1D traj = run1d(rule, x0, args.steps);

    std::size_t blanks = 0;
    for (const auto& row : traj.rows)
      blanks += static_cast<std::size_t>(
          std::count(row.begin(), row.end(), rule.blank()));
    out << "ran " << args.steps << " steps on " << args.length
        << " cells; blank cells: " << blanks << "\n";

    if (!args.dump.empty()) {
      std::ofstream storage;
      write_trajectory_text(select_sink(args.dump, out, storage), traj,
                            rule.alphabet());
    }
    return 0;
  });
}

// ---------------------------------------------------------------------------
// stack

int cmd_stack_run(const StackRunArgs& args, std::ostream& out) {
  return guarded(out, [&]() -> int {
    const TileSet ts = load_tileset(args.tileset);
    const CaRule rule(ts);
    const Config1D x0 =
        resolve_init_1d(rule, ts, args.init, args.boundary_i, args.length,
                        args.steps, args.budget, args.order_seed);

    if (args.flips > 0) {
      // Draw distinct interior flip sites and wrong values from the seed.
      const CellRng rng(args.flip_seed ^ 0x666c697073ull);
      Config3D probe = clone_config(x0, args.extent_a, args.extent_b);
      std::vector<Flip> flips;
      std::uint32_t draw = 0;
      const int lo = probe.boundary_i.kind == BoundaryKindI::Periodic
                         ? 0
                         : args.margin;
      const int hi = probe.boundary_i.kind == BoundaryKindI::Periodic
                         ? args.length
                         : args.length - args.margin;
      if (hi <= lo)
        throw std::invalid_argument("margin leaves no interior cells to flip");
      while (static_cast<int>(flips.size()) < args.flips) {
        const std::uint64_t key = rng.cell_key(0, 0, 0, static_cast<int>(draw++));
        Flip f;
        f.a = static_cast<int>(CellRng::bits(key, 0) % args.extent_a);
        f.b = static_cast<int>(CellRng::bits(key, 1) % args.extent_b);
        f.i = lo + static_cast<int>(CellRng::bits(key, 2) % (hi - lo));
        const Symbol current = probe.at(f.a, f.b, f.i);
        const std::uint64_t u = CellRng::bits(key, 3) % rule.alphabet().n_tiles;
        f.value = static_cast<Symbol>(u + (u >= current ? 1 : 0));
        const bool duplicate =
            std::any_of(flips.begin(), flips.end(), [&](const Flip& g) {
              return g.a == f.a && g.b == f.b && g.i == f.i;
            });
        if (!duplicate) flips.push_back(f);
      }
      const ErosionResult result =
          erosion_probe(rule, x0, args.extent_a, args.extent_b, flips,
                        args.steps, args.margin);
      if (result.recovered)
        out << "erosion: " << args.flips << " flips recovered at t="
            << result.time << "\n";
      else
        out << "erosion: NOT recovered within " << args.steps << " steps\n";
      return result.recovered ? 0 : 1;
    }

    Config3D y = clone_config(x0, args.extent_a, args.extent_b);
    for (int t = 0; t < args.steps; ++t) y = stacked_step(rule, y);
    out << "ran " << args.steps << " stacked steps on " << args.extent_a
        << "x" << args.extent_b << "x" << args.length << "\n";
    if (!args.dump.empty()) {
      std::ofstream storage;
      write_config3d(select_sink(args.dump, out, storage), y);
    }
    return 0;
  });
}

// ---------------------------------------------------------------------------
// pca

namespace {

double resolve_epsilon(const std::optional<double>& epsilon,
                       const std::optional<double>& epsilon0,
                       const std::optional<double>& beta, int alphabet_size,
                       MetaKv* meta) {
  if (epsilon && (epsilon0 || beta))
    throw std::invalid_argument(
        "give either --epsilon or --epsilon0 with --beta, not both");
  if (epsilon) {
    if (!(*epsilon >= 0.0) || *epsilon >= 1.0)
      throw std::invalid_argument("epsilon must lie in [0, 1)");
    if (meta) meta->emplace_back("epsilon", fmt_g12(*epsilon));
    return *epsilon;
  }
  if (!epsilon0 || !beta)
    throw std::invalid_argument(
        "give either --epsilon or --epsilon0 with --beta");
  InteractionParams params;
  params.epsilon0 = *epsilon0;
  params.beta = *beta;
  params.alphabet_size = alphabet_size;
  validate_interaction(params);
  const TemperatureMap map = beta_to_epsilon(params);
  if (meta) {
    meta->emplace_back("epsilon0", fmt_g12(*epsilon0));
    meta->emplace_back("beta", fmt_g12(*beta));
    meta->emplace_back("alpha", fmt_g12(map.alpha));
    meta->emplace_back("epsilon", fmt_g12(map.epsilon));
  }
  return map.epsilon;
}

}  // namespace

int cmd_pca_sample(const PcaSampleArgs& args, std::ostream& out) {
  return guarded(out, [&]() -> int {
    const TileSet ts = load_tileset(args.tileset);
    const CaRule rule(ts);
    const int m = rule.alphabet().size();

    MetaKv meta{{"tileset", ts.name()},
                {"extent-a", std::to_string(args.extent_a)},
                {"extent-b", std::to_string(args.extent_b)},
                {"length", std::to_string(args.length)},
                {"steps", std::to_string(args.steps)},
                {"init", args.init},
                {"boundary-i", args.boundary_i},
                {"seeds", join_u64(args.seeds)}};
    const double epsilon =
        resolve_epsilon(args.epsilon, args.epsilon0, args.beta, m, &meta);

    if (!args.dump_window.empty() && args.seeds.size() != 1)
      throw std::invalid_argument("--dump-window needs exactly one seed");
    if (args.seeds.empty())
      throw std::invalid_argument("at least one seed is required");

    const Config1D x0 =
        resolve_init_1d(rule, ts, args.init, args.boundary_i, args.length,
                        args.steps, args.budget, args.order_seed);
    const Config3D init = clone_config(x0, args.extent_a, args.extent_b);
    const NoiseParams np{epsilon, m};

    std::vector<std::vector<std::string>> rows;
    for (const std::uint64_t seed : args.seeds) {
      const SpaceTimeConfig X = sample_trajectory(rule, init, np, seed, args.steps);
      const ErrorSetResult errors = error_set(rule, X);
      rows.push_back({fmt_g12(epsilon), std::to_string(seed),
                      std::to_string(errors.checked),
                      std::to_string(errors.cells.size())});
      if (!args.dump_window.empty()) {
        auto file = open_output(args.dump_window);
        write_spacetime(file, X);
      }
    }

    std::ofstream storage;
    write_csv(select_sink(args.summary, out, storage), std::move(meta),
              {"epsilon", "seed", "volume", "n_errors"}, rows);
    return 0;
  });
}

// ---------------------------------------------------------------------------
// gibbs

int cmd_gibbs_beta_map(const BetaMapArgs& args, std::ostream& out) {
  return guarded(out, [&]() -> int {
    const TileSet ts = load_tileset(args.tileset);
    const int m = ts.size() + 1;
    if (args.betas.empty())
      throw std::invalid_argument("an explicit --betas grid is required");

    MetaKv meta{{"tileset", ts.name()},
                {"epsilon0", fmt_g12(args.epsilon0)},
                {"betas", join_g12(args.betas)}};
    std::vector<std::vector<std::string>> rows;
    for (const double beta : args.betas) {
      const TemperatureMap map = beta_to_epsilon(args.epsilon0, beta, m);
      rows.push_back({fmt_g12(beta), fmt_g12(map.alpha), fmt_g12(map.epsilon)});
    }
    std::ofstream storage;
    write_csv(select_sink(args.out_path, out, storage), std::move(meta),
              {"beta", "alpha", "epsilon"}, rows);
    return 0;
  });
}

int cmd_gibbs_energy(const GibbsEnergyArgs& args, std::ostream& out) {
  return guarded(out, [&]() -> int {
    const TileSet ts = load_tileset(args.tileset);
    const CaRule rule(ts);
    auto file = open_input(args.window);
    const SpaceTimeConfig X = read_spacetime(file);
    const auto region = full_support_region(X);
    const double energy =
        window_energy(rule, X, args.epsilon, args.mu_blank, region);
    const auto errors = error_set(rule, X);
    out << "cells " << region.size() << "\n"
        << "errors " << errors.cells.size() << "\n"
        << "excluded " << errors.excluded << "\n"
        << "energy " << fmt_g12(energy) << "\n";
    return 0;
  });
}

// ---------------------------------------------------------------------------
// dlr

int cmd_dlr_check(const DlrCheckArgs& args, std::ostream& out) {
  return guarded(out, [&]() -> int {
    const TileSet ts = load_tileset(args.tileset);
    const CaRule rule(ts);
    const int m = rule.alphabet().size();

    const std::size_t cells = static_cast<std::size_t>(args.extent_a) *
                              args.extent_b * args.length *
                              (args.steps + 1);
    if (cells > args.max_cells) {
      out << "refused: window has " << cells
          << " cells, enumeration guard allows " << args.max_cells << "\n";
      return 2;
    }
    if (!(args.epsilon > 0.0) || args.epsilon >= 1.0)
      throw std::invalid_argument("dlr check: epsilon must lie in (0, 1)");

    // Seeded random initial slice on a periodic window.
    const CellRng init_rng(args.seed ^ 0x646c72696e6974ull);
    Config3D init = Config3D::filled(args.extent_a, args.extent_b, args.length,
                                     0, BoundaryI::periodic());
    for (int a = 0; a < args.extent_a; ++a)
      for (int b = 0; b < args.extent_b; ++b)
        for (int i = 0; i < args.length; ++i)
          init.at(a, b, i) = static_cast<Symbol>(
              CellRng::bits(init_rng.cell_key(a, b, i, -1), 0) % m);

    const NoiseParams np{args.epsilon, m};
    const SpaceTimeConfig X =
        sample_trajectory(rule, init, np, args.seed, args.steps);

    // Locality check: the single-site conditional from the factors
    // touching the cell must match the conditional of the full window
    // energy (softmax over the cell's value of the total energy).
    const auto region = full_support_region(X);
    double max_residual = 0.0;
    SpaceTimeConfig Y = X;
    for (const Cell4& cell : region) {
      const auto local = gibbs_conditional(rule, X, cell, args.epsilon);
      std::vector<double> neg_energy(m);
      for (int sigma = 0; sigma < m; ++sigma) {
        Y.at(cell.a, cell.b, cell.i, cell.t) = static_cast<Symbol>(sigma);
        neg_energy[sigma] =
            -window_energy(rule, Y, args.epsilon, 0.0, region);
      }
      Y.at(cell.a, cell.b, cell.i, cell.t) = X.at(cell);
      const double peak =
          *std::max_element(neg_energy.begin(), neg_energy.end());
      double z = 0.0;
      for (double& v : neg_energy) {
        v = std::exp(v - peak);
        z += v;
      }
      for (int sigma = 0; sigma < m; ++sigma)
        max_residual =
            std::max(max_residual, std::abs(local[sigma] - neg_energy[sigma] / z));
    }
    out << "cells checked " << region.size() << "\n"
        << "max residual " << fmt_g12(max_residual) << "\n";
    bool pass = max_residual < args.tolerance;

    if (args.mc_samples > 0) {
      // Resampling invariance: redrawing one fixed cell from its
      // conditional must leave the marginal of that cell unchanged
      // across trajectory samples.
      const Cell4 probe = region[region.size() / 2];
      std::vector<std::size_t> direct(m, 0), resampled(m, 0);
      for (int s = 0; s < args.mc_samples; ++s) {
        const SpaceTimeConfig W = sample_trajectory(
            rule, init, np, args.seed + 1 + static_cast<std::uint64_t>(s),
            args.steps);
        ++direct[W.at(probe)];
        const auto conditional =
            gibbs_conditional(rule, W, probe, args.epsilon);
        const double u = CellRng::uniform01(
            CellRng(args.seed ^ 0x6d63726573ull).cell_key(0, 0, 0, s), 0);
        double acc = 0.0;
        Symbol drawn = static_cast<Symbol>(m - 1);
        for (int sigma = 0; sigma < m; ++sigma) {
          acc += conditional[sigma];
          if (u < acc) {
            drawn = static_cast<Symbol>(sigma);
            break;
          }
        }
        ++resampled[drawn];
      }
      // Compare the two samples of the marginal within 3 sigma per value.
      const double n = args.mc_samples;
      double worst = 0.0;
      bool mc_ok = true;
      for (int sigma = 0; sigma < m; ++sigma) {
        const double p = (direct[sigma] + resampled[sigma]) / (2.0 * n);
        const double sd = std::sqrt(std::max(p * (1.0 - p) * 2.0 / n, 1e-12));
        const double diff = std::abs(static_cast<double>(direct[sigma]) -
                                     static_cast<double>(resampled[sigma])) /
                            n;
        worst = std::max(worst, diff / sd);
        if (diff > 3.0 * sd) mc_ok = false;
      }
      out << "mc samples " << args.mc_samples << "\n"
          << "mc worst z " << fmt_g12(worst) << "\n"
          << "mc " << (mc_ok ? "ok" : "FAIL") << "\n";
      pass = pass && mc_ok;
    }

    out << (pass ? "dlr: ok\n" : "dlr: FAIL\n");
    return pass ? 0 : 1;
  });
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze_clusters(const AnalyzeClustersArgs& args, std::ostream& out) {
  return guarded(out, [&]() -> int {
    auto wf = open_input(args.window);
    auto rf = open_input(args.reference);
    const SpaceTimeConfig X = read_spacetime(wf);
    const SpaceTimeConfig Z = read_spacetime(rf);

    const std::size_t threshold =
        args.threshold == 0 ? std::numeric_limits<std::size_t>::max()
                            : args.threshold;
    const SeaIslandVerdict verdict = sea_island_check(
        X, Z, args.range, threshold, parse_metric(args.metric));
    const ClusterReport& report = verdict.report;

    out << "disagreements " << report.total_cells << "\n"
        << "clusters " << report.clusters.size() << "\n"
        << "max cluster " << report.max_size << "\n"
        << "spanning " << (report.any_spanning ? "yes" : "no") << "\n"
        << "verdict " << (verdict.pass ? "pass" : "fail") << "\n";

    if (!args.csv.empty()) {
      MetaKv meta{{"range", std::to_string(args.range)},
                  {"metric", args.metric},
                  {"threshold", std::to_string(args.threshold)},
                  {"window",
                   std::filesystem::path(args.window).filename().string()},
                  {"reference",
                   std::filesystem::path(args.reference).filename().string()}};
      std::vector<std::vector<std::string>> rows;
      for (std::size_t k = 0; k < report.clusters.size(); ++k) {
        const Cluster& cl = report.clusters[k];
        rows.push_back({std::to_string(k), std::to_string(cl.cells.size()),
                        cl.spanning ? "1" : "0", fmt_cell(cl.cells.front())});
      }
      std::ofstream storage;
      write_csv(select_sink(args.csv, out, storage), std::move(meta),
                {"cluster", "size", "spanning", "first_cell"}, rows);
    }
    return verdict.pass ? 0 : 1;
  });
}

int cmd_analyze_periods(const AnalyzePeriodsArgs& args, std::ostream& out) {
  return guarded(out, [&]() -> int {
    auto wf = open_input(args.window);
    const SpaceTimeConfig X = read_spacetime(wf);
    const PeriodReport report =
        periodicity_scan(X, args.bound, args.last_two_only);

    MetaKv meta{{"bound", std::to_string(args.bound)},
                {"last-two-only", args.last_two_only ? "1" : "0"},
                {"window",
                 std::filesystem::path(args.window).filename().string()}};
    std::vector<std::vector<std::string>> rows;
    for (const PeriodEntry& e : report.entries) {
      std::string is_period, witness;
      switch (e.status) {
        case PeriodEntry::Status::Period:
          is_period = "1";
          break;
        case PeriodEntry::Status::Broken:
          is_period = "0";
          witness = fmt_cell(e.witness);
          break;
        case PeriodEntry::Status::EmptyOverlap:
          is_period = "0";
          witness = "empty";
          break;
      }
      rows.push_back({std::to_string(e.p[0]), std::to_string(e.p[1]),
                      std::to_string(e.p[2]), std::to_string(e.p[3]),
                      is_period, witness});
    }
    std::ofstream storage;
    write_csv(select_sink(args.out_path, out, storage), std::move(meta),
              {"p1", "p2", "p3", "p4", "is_period", "witness"}, rows);
    return 0;
  });
}

// ---------------------------------------------------------------------------
// sweep

void RunConfig::apply(const std::string& key, const std::string& value) {
  auto parse_doubles = [](const std::string& v) {
    std::vector<double> values;
    std::istringstream s(v);
    std::string item;
    while (std::getline(s, item, ',')) values.push_back(std::stod(item));
    return values;
  };
  auto parse_seeds = [](const std::string& v) {
    std::vector<std::uint64_t> values;
    std::istringstream s(v);
    std::string item;
    while (std::getline(s, item, ',')) values.push_back(std::stoull(item));
    return values;
  };

  if (key == "tileset") tileset = value;
  else if (key == "extent-a") extent_a = std::stoi(value);
  else if (key == "extent-b") extent_b = std::stoi(value);
  else if (key == "length") length = std::stoi(value);
  else if (key == "steps") steps = std::stoi(value);
  else if (key == "epsilons") epsilons = parse_doubles(value);
  else if (key == "epsilon0") epsilon0 = std::stod(value);
  else if (key == "betas") betas = parse_doubles(value);
  else if (key == "seeds") seeds = parse_seeds(value);
  else if (key == "init") init = value;
  else if (key == "boundary-i") boundary_i = value;
  else if (key == "budget") budget = std::stoull(value);
  else if (key == "order-seed") order_seed = std::stoull(value);
  else if (key == "range") range = std::stoi(value);
  else if (key == "metric") metric = value;
  else if (key == "threshold") threshold = std::stoull(value);
  else if (key == "out-dir") out_dir = value;
  else if (key == "threads") threads = std::stoi(value);
  else throw std::invalid_argument("unknown config key `" + key + "`");
}

void RunConfig::apply_file(std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::meta() const {
  // out_dir and threads are runtime-only: they change where and how fast
  // results appear, never what they contain, and stay out of the header.
  MetaKv meta{{"tileset", tileset},
              {"extent-a", std::to_string(extent_a)},
              {"extent-b", std::to_string(extent_b)},
              {"length", std::to_string(length)},
              {"steps", std::to_string(steps)},
              {"seeds", join_u64(seeds)},
              {"init", init},
              {"boundary-i", boundary_i},
              {"budget", std::to_string(budget)},
              {"order-seed", std::to_string(order_seed)},
              {"range", std::to_string(range)},
              {"metric", metric},
              {"threshold", std::to_string(threshold)}};
  if (epsilon0) {
    meta.emplace_back("epsilon0", fmt_g12(*epsilon0));
    meta.emplace_back("betas", join_g12(betas));
  } else {
    meta.emplace_back("epsilons", join_g12(epsilons));
  }
  return meta;
}

int cmd_sweep_stability(const RunConfig& config, std::ostream& out) {
  return guarded(out, [&]() -> int {
    const TileSet ts = load_tileset(config.tileset);
    const CaRule rule(ts);
    const int m = rule.alphabet().size();
    const Metric metric = parse_metric(config.metric);

    std::vector<double> epsilons = config.epsilons;
    if (config.epsilon0) {
      if (config.betas.empty())
        throw std::invalid_argument("epsilon0 given but no betas grid");
      epsilons.clear();
      for (const double beta : config.betas) {
        InteractionParams params{*config.epsilon0, beta, 0.0, m};
        validate_interaction(params);
        epsilons.push_back(beta_to_epsilon(params).epsilon);
      }
    }
    if (epsilons.empty() || config.seeds.empty())
      throw std::invalid_argument("empty epsilon grid or seed list");
    for (const double e : epsilons)
      if (!(e >= 0.0) || e >= 1.0)
        throw std::invalid_argument("epsilon must lie in [0, 1)");

    const Config1D x0 = resolve_init_1d(rule, ts, config.init,
                                        config.boundary_i, config.length,
                                        config.steps, config.budget,
                                        config.order_seed);
    const Config3D init = clone_config(x0, config.extent_a, config.extent_b);
    const SpaceTimeConfig reference =
        sample_trajectory(rule, init, NoiseParams{0.0, m}, 0, config.steps);

    // One task per (epsilon, seed); rows are assembled in task order so
    // the output is identical for any thread count.
    struct Task {
      double epsilon;
      std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const double epsilon : epsilons)
      for (const std::uint64_t seed : config.seeds)
        tasks.push_back({epsilon, seed});

    std::vector<std::vector<std::vector<std::string>>> task_rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto run_tasks = [&]() {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= tasks.size()) return;
        const Task& task = tasks[k];
        const SpaceTimeConfig X = sample_trajectory(
            rule, init, NoiseParams{task.epsilon, m}, task.seed, config.steps);

        // Group disagreements by slice, then grow clusters slice by slice.
        std::vector<std::vector<Cell4>> by_slice(config.steps + 1);
        for (const Cell4& c : disagreements(X, reference).cells)
          by_slice[c.t].push_back(c);
        IncrementalClusters engine(
            {config.extent_a, config.extent_b, config.length,
             config.steps + 1},
            config.range, metric);

        const double slice_volume = static_cast<double>(config.extent_a) *
                                    config.extent_b * config.length;
        auto& rows = task_rows[k];
        engine.add_cells(by_slice[0]);  // empty for a shared init
        for (int t = 1; t <= config.steps; ++t) {
          engine.add_cells(by_slice[t]);
          const auto stats = engine.stats(t);
          // Rate over the checked slices 1..t; slice 0 is the shared
          // init and never disagrees.
          const double rate =
              static_cast<double>(stats.total_cells) / (slice_volume * t);
          rows.push_back({fmt_g12(task.epsilon), std::to_string(task.seed),
                          std::to_string(t), fmt_g12(rate),
                          std::to_string(stats.n_clusters),
                          std::to_string(stats.max_size),
                          stats.any_spanning ? "1" : "0"});
        }
      }
    };

    std::mutex error_lock;
    std::exception_ptr first_error;
    auto worker = [&]() {
      try {
        run_tasks();
      } catch (...) {
        const std::scoped_lock lock(error_lock);
        if (!first_error) first_error = std::current_exception();
      }
    };

    const int n_threads =
        std::max(1, std::min<int>(config.threads,
                                  static_cast<int>(tasks.size())));
    if (n_threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(n_threads);
      for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::vector<std::vector<std::string>> rows;
    for (auto& block : task_rows)
      for (auto& row : block) rows.push_back(std::move(row));

    std::filesystem::create_directories(config.out_dir);
    const auto path = std::filesystem::path(config.out_dir) / "stability.csv";
    auto file = open_output(path.string());
    write_csv(file, config.meta(),
              {"epsilon", "seed", "t", "disagreement_rate", "n_clusters",
               "max_cluster", "spanning"},
              rows);
    out << "wrote " << rows.size() << " rows -> " << path.string() << "\n";
    return 0;
  });
}

}  // namespace latgas
