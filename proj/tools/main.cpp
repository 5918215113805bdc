// Command-line frontend; all behavior lives in the library's cmd_*
// functions so it can be tested without spawning processes.

#include <array>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "latgas/cli.hpp"

namespace {

// "WxH" / "AxBxL" extent strings.
std::vector<int> parse_extents(const std::string& text, std::size_t count) {
  std::vector<int> values;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, 'x')) values.push_back(std::stoi(item));
  if (values.size() != count)
    throw CLI::ValidationError("extents", "expected " + std::to_string(count) +
                                              " x-separated integers");
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace latgas;

  CLI::App app{"latgas: tile-set CA stacking, noisy sampling, and analysis"};
  app.require_subcommand(1);
  int exit_code = 0;

  // --- tileset ------------------------------------------------------------
  auto* tileset = app.add_subcommand("tileset", "tile-set gates and searches");
  tileset->require_subcommand(1);

  TilesetCheckArgs check_args;
  std::string check_patch_size = "8x8";
  auto* check = tileset->add_subcommand("check", "run the tile-set gates");
  check->add_option("--tileset", check_args.tileset, "bundled name or file");
  check->add_option("--torus-bound", check_args.torus_bound);
  check->add_option("--patch-size", check_patch_size, "existence gate, WxH");
  check->add_option("--budget", check_args.budget);
  check->add_option("--order-seed", check_args.order_seed);
  check->callback([&] {
    const auto wh = parse_extents(check_patch_size, 2);
    check_args.patch_width = wh[0];
    check_args.patch_height = wh[1];
    exit_code = cmd_tileset_check(check_args, std::cout);
  });

  TilesetPatchArgs patch_args;
  std::string patch_size = "8x8";
  auto* patch = tileset->add_subcommand("patch", "search for a valid patch");
  patch->add_option("--tileset", patch_args.tileset);
  patch->add_option("--size", patch_size, "WxH");
  patch->add_option("--budget", patch_args.budget);
  patch->add_option("--order-seed", patch_args.order_seed);
  patch->add_option("--out", patch_args.out_path, "file path or '-'");
  patch->callback([&] {
    const auto wh = parse_extents(patch_size, 2);
    patch_args.width = wh[0];
    patch_args.height = wh[1];
    exit_code = cmd_tileset_patch(patch_args, std::cout);
  });

  // --- ca -------------------------------------------------------------------
  auto* ca = app.add_subcommand("ca", "1D automaton runs");
  ca->require_subcommand(1);

  CaRunArgs ca_args;
  auto* ca_run = ca->add_subcommand("run", "run the 1D automaton");
  ca_run->add_option("--tileset", ca_args.tileset);
  ca_run->add_option("--length", ca_args.length);
  ca_run->add_option("--steps", ca_args.steps);
  ca_run->add_option("--init", ca_args.init, "blank | search | patch:FILE");
  ca_run->add_option("--boundary", ca_args.boundary,
                     "auto | periodic | blank | stream");
  ca_run->add_option("--budget", ca_args.budget);
  ca_run->add_option("--order-seed", ca_args.order_seed);
  ca_run->add_option("--dump", ca_args.dump, "trajectory text dump, '-' ok");
  ca_run->callback([&] { exit_code = cmd_ca_run(ca_args, std::cout); });

  // --- stack ----------------------------------------------------------------
  auto* stack = app.add_subcommand("stack", "3D stacked automaton");
  stack->require_subcommand(1);

  StackRunArgs stack_args;
  std::string stack_size = "4x4x16";
  auto* stack_run = stack->add_subcommand("run", "run the stacked automaton");
  stack_run->add_option("--tileset", stack_args.tileset);
  stack_run->add_option("--size", stack_size, "AxBxL");
  stack_run->add_option("--steps", stack_args.steps);
  stack_run->add_option("--init", stack_args.init,
                        "blank | search | patch:FILE");
  stack_run->add_option("--boundary-i", stack_args.boundary_i,
                        "auto | periodic | blank | reference");
  stack_run->add_option("--flips", stack_args.flips,
                        "inject N flips and probe erosion");
  stack_run->add_option("--flip-seed", stack_args.flip_seed);
  stack_run->add_option("--margin", stack_args.margin);
  stack_run->add_option("--budget", stack_args.budget);
  stack_run->add_option("--order-seed", stack_args.order_seed);
  stack_run->add_option("--dump", stack_args.dump, "final 3D config dump");
  stack_run->callback([&] {
    const auto abl = parse_extents(stack_size, 3);
    stack_args.extent_a = abl[0];
    stack_args.extent_b = abl[1];
    stack_args.length = abl[2];
    exit_code = cmd_stack_run(stack_args, std::cout);
  });

  // --- pca ----------------------------------------------------------------
  auto* pca = app.add_subcommand("pca", "noisy sampling");
  pca->require_subcommand(1);

  PcaSampleArgs pca_args;
  std::string pca_size = "4x4x16";
  auto* pca_sample = pca->add_subcommand("sample", "sample noisy trajectories");
  pca_sample->add_option("--tileset", pca_args.tileset);
  pca_sample->add_option("--size", pca_size, "AxBxL");
  pca_sample->add_option("--steps", pca_args.steps);
  auto* eps_opt = pca_sample->add_option("--epsilon", pca_args.epsilon);
  auto* eps0_opt = pca_sample->add_option("--epsilon0", pca_args.epsilon0);
  pca_sample->add_option("--beta", pca_args.beta)->needs(eps0_opt);
  eps_opt->excludes(eps0_opt);
  pca_sample->add_option("--seeds", pca_args.seeds)->delimiter(',');
  pca_sample->add_option("--init", pca_args.init);
  pca_sample->add_option("--boundary-i", pca_args.boundary_i);
  pca_sample->add_option("--budget", pca_args.budget);
  pca_sample->add_option("--order-seed", pca_args.order_seed);
  pca_sample->add_option("--dump-window", pca_args.dump_window,
                         "space-time dump (single seed)");
  pca_sample->add_option("--summary", pca_args.summary, "CSV path or '-'");
  pca_sample->callback([&] {
    const auto abl = parse_extents(pca_size, 3);
    pca_args.extent_a = abl[0];
    pca_args.extent_b = abl[1];
    pca_args.length = abl[2];
    exit_code = cmd_pca_sample(pca_args, std::cout);
  });

  // --- gibbs ----------------------------------------------------------------
  auto* gibbs = app.add_subcommand("gibbs", "interaction and temperature map");
  gibbs->require_subcommand(1);

  BetaMapArgs beta_args;
  auto* beta_map = gibbs->add_subcommand("beta-map", "tabulate beta -> epsilon");
  beta_map->add_option("--tileset", beta_args.tileset);
  beta_map->add_option("--epsilon0", beta_args.epsilon0);
  beta_map->add_option("--betas", beta_args.betas)->delimiter(',')->required();
  beta_map->add_option("--out", beta_args.out_path, "CSV path or '-'");
  beta_map->callback([&] { exit_code = cmd_gibbs_beta_map(beta_args, std::cout); });

  GibbsEnergyArgs energy_args;
  auto* energy = gibbs->add_subcommand("energy", "window energy of a dump");
  energy->add_option("--tileset", energy_args.tileset);
  energy->add_option("--window", energy_args.window)->required();
  energy->add_option("--epsilon", energy_args.epsilon);
  energy->add_option("--mu-blank", energy_args.mu_blank);
  energy->callback([&] { exit_code = cmd_gibbs_energy(energy_args, std::cout); });

  // --- dlr --------------------------------------------------------------
  auto* dlr = app.add_subcommand("dlr", "Gibbs conditional checks");
  dlr->require_subcommand(1);

  DlrCheckArgs dlr_args;
  std::string dlr_size = "2x2x2";
  auto* dlr_check = dlr->add_subcommand("check", "verify DLR conditionals");
  dlr_check->add_option("--tileset", dlr_args.tileset);
  dlr_check->add_option("--size", dlr_size, "AxBxL");
  dlr_check->add_option("--steps", dlr_args.steps);
  dlr_check->add_option("--epsilon", dlr_args.epsilon);
  dlr_check->add_option("--seed", dlr_args.seed);
  dlr_check->add_option("--tol", dlr_args.tolerance);
  dlr_check->add_option("--mc-samples", dlr_args.mc_samples);
  dlr_check->add_option("--max-cells", dlr_args.max_cells,
                        "enumeration guard");
  dlr_check->callback([&] {
    const auto abl = parse_extents(dlr_size, 3);
    dlr_args.extent_a = abl[0];
    dlr_args.extent_b = abl[1];
    dlr_args.length = abl[2];
    exit_code = cmd_dlr_check(dlr_args, std::cout);
  });

  // --- analyze ----------------------------------------------------------
  auto* analyze = app.add_subcommand("analyze", "window analyses");
  analyze->require_subcommand(1);

  AnalyzeClustersArgs cluster_args;
  auto* clusters = analyze->add_subcommand("clusters", "sea-island verdict");
  clusters->add_option("--window", cluster_args.window)->required();
  clusters->add_option("--reference", cluster_args.reference)->required();
  clusters->add_option("-r,--range", cluster_args.range);
  clusters->add_option("--metric", cluster_args.metric, "l1 | linf");
  clusters->add_option("--threshold", cluster_args.threshold,
                       "max island size, 0 = unlimited");
  clusters->add_option("--csv", cluster_args.csv, "per-cluster CSV path");
  clusters->callback(
      [&] { exit_code = cmd_analyze_clusters(cluster_args, std::cout); });

  AnalyzePeriodsArgs period_args;
  auto* periods = analyze->add_subcommand("periods", "periodicity scan");
  periods->add_option("--window", period_args.window)->required();
  periods->add_option("--bound", period_args.bound);
  periods->add_flag("--last-two-only", period_args.last_two_only);
  periods->add_option("--out", period_args.out_path, "CSV path or '-'");
  periods->callback(
      [&] { exit_code = cmd_analyze_periods(period_args, std::cout); });

  // --- sweep --------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "grid runs");
  sweep->require_subcommand(1);

  std::string sweep_config_path;
  std::vector<std::pair<std::string, std::string>> sweep_overrides;
  auto* stability = sweep->add_subcommand("stability", "epsilon/seed sweep");
  stability->add_option("--config", sweep_config_path, "key=value file");
  for (const char* key :
       {"tileset", "extent-a", "extent-b", "length", "steps", "epsilons",
        "epsilon0", "betas", "seeds", "init", "boundary-i", "budget",
        "order-seed", "range", "metric", "threshold", "out-dir", "threads"}) {
    stability->add_option_function<std::string>(
        std::string("--") + key,
        [&sweep_overrides, key](const std::string& value) {
          sweep_overrides.emplace_back(key, value);
        },
        std::string("config key ") + key + " (overrides --config)");
  }
  stability->callback([&] {
    RunConfig config;
    if (!sweep_config_path.empty()) {
      std::ifstream file(sweep_config_path);
      if (!file) {
        std::cout << "error: cannot open config file: " << sweep_config_path
                  << "\n";
        exit_code = 2;
        return;
      }
      config.apply_file(file);
    }
    for (const auto& [key, value] : sweep_overrides) config.apply(key, value);
    exit_code = cmd_sweep_stability(config, std::cout);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
