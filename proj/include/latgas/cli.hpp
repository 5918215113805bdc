#pragma once

// Library-level command implementations behind the CLI frontend. Each
// cmd_* function takes a plain argument struct and a stream for human
// output and returns a process exit code, so tests drive them directly.
//
// Exit codes: 0 success / verdict pass; 1 gate or verdict failure;
// 2 unusable request (bad arguments, refused guard, missing file).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latgas/common.hpp"

namespace latgas {

// ---------------------------------------------------------------------------
// tileset

struct TilesetCheckArgs {
  std::string tileset = "ammann16";
  int torus_bound = 4;       // exhaustively refute all p x q up to this
  int patch_width = 8;       // existence gate extents
  int patch_height = 8;
  std::uint64_t budget = 10'000'000;
  std::uint64_t order_seed = 1;
};

int cmd_tileset_check(const TilesetCheckArgs& args, std::ostream& out);

struct TilesetPatchArgs {
  std::string tileset = "ammann16";
  int width = 8;
  int height = 8;
  std::uint64_t budget = 10'000'000;
  std::uint64_t order_seed = 1;
  std::string out_path = "-";  // '-' = stdout
};

int cmd_tileset_patch(const TilesetPatchArgs& args, std::ostream& out);

// ---------------------------------------------------------------------------
// ca / stack / pca

struct CaRunArgs {
  std::string tileset = "ammann16";
  int length = 16;
  int steps = 16;
  std::string init = "blank";      // blank | patch:FILE | search
  std::string boundary = "auto";   // auto | periodic | blank | stream
  std::uint64_t budget = 10'000'000;
  std::uint64_t order_seed = 1;
  std::string dump;  // trajectory text dump path, '-' = stdout
};

int cmd_ca_run(const CaRunArgs& args, std::ostream& out);

struct StackRunArgs {
  std::string tileset = "ammann16";
  int extent_a = 4, extent_b = 4;
  int length = 16;
  int steps = 8;
  std::string init = "search";     // blank | patch:FILE | search
  std::string boundary_i = "auto"; // auto | periodic | blank | reference
  int flips = 0;                   // random interior flips to inject
  std::uint64_t flip_seed = 0;
  int margin = 1;
  std::uint64_t budget = 10'000'000;
  std::uint64_t order_seed = 1;
  std::string dump;  // final Config3D dump path
};

int cmd_stack_run(const StackRunArgs& args, std::ostream& out);

struct PcaSampleArgs {
  std::string tileset = "ammann16";
  int extent_a = 4, extent_b = 4;
  int length = 16;
  int steps = 16;
  // Exactly one of epsilon / (epsilon0, beta).
  std::optional<double> epsilon;
  std::optional<double> epsilon0;
  std::optional<double> beta;
  std::vector<std::uint64_t> seeds = {0};
  std::string init = "search";
  std::string boundary_i = "auto";
  std::uint64_t budget = 10'000'000;
  std::uint64_t order_seed = 1;
  std::string dump_window;  // space-time dump (single seed only)
  std::string summary;      // CSV path, '-' = stdout
};

int cmd_pca_sample(const PcaSampleArgs& args, std::ostream& out);

// ---------------------------------------------------------------------------
// gibbs / dlr

struct BetaMapArgs {
  std::string tileset = "ammann16";
  double epsilon0 = 0.05;
  std::vector<double> betas;  // explicit grid
  std::string out_path = "-";
};

int cmd_gibbs_beta_map(const BetaMapArgs& args, std::ostream& out);

struct GibbsEnergyArgs {
  std::string tileset = "ammann16";
  std::string window;  // space-time dump path
  double epsilon = 0.05;
  double mu_blank = 0.0;
};

int cmd_gibbs_energy(const GibbsEnergyArgs& args, std::ostream& out);

struct DlrCheckArgs {
  std::string tileset = "ammann16";
  int extent_a = 2, extent_b = 2;
  int length = 2;
  int steps = 2;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  int mc_samples = 0;          // optional Monte Carlo resampling check
  std::size_t max_cells = 512; // enumeration guard on (T+1)*A*B*L
};

int cmd_dlr_check(const DlrCheckArgs& args, std::ostream& out);

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeClustersArgs {
  std::string window;     // space-time dump path
  std::string reference;  // space-time dump path
  int range = 2;
  std::string metric = "l1";   // l1 | linf
  std::size_t threshold = 0;   // 0 = unlimited (spanning check only)
  std::string csv;             // optional per-cluster CSV path
};

int cmd_analyze_clusters(const AnalyzeClustersArgs& args, std::ostream& out);

struct AnalyzePeriodsArgs {
  std::string window;  // space-time dump path
  int bound = 4;
  bool last_two_only = false;
  std::string out_path = "-";  // CSV
};

int cmd_analyze_periods(const AnalyzePeriodsArgs& args, std::ostream& out);

// ---------------------------------------------------------------------------
// sweep

// Flat key=value run configuration for stability sweeps. Every key can
// come from a config file or a CLI flag; flags win. The resolved
// configuration is embedded in the output CSV as '# key=value' lines
// (runtime-only settings -- output dir, thread count -- excluded, so
// reruns are byte-comparable).
struct RunConfig {
  std::string tileset = "ammann16";
  int extent_a = 16, extent_b = 16;
  int length = 16;
  int steps = 64;
  std::vector<double> epsilons = {0.002, 0.005, 0.01, 0.02, 0.05};
  std::optional<double> epsilon0;       // alternative grid: epsilon0 + betas
  std::vector<double> betas;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  std::string init = "search";          // search | patch:FILE | blank
  std::string boundary_i = "auto";
  std::uint64_t budget = 100'000'000;
  std::uint64_t order_seed = 1;
  int range = 2;
  std::string metric = "l1";
  std::size_t threshold = 0;            // 0 = unlimited
  std::string out_dir = ".";            // runtime-only
  int threads = 1;                      // runtime-only

  // Parse "key=value" lines ('#' comments); unknown keys throw.
  void apply_file(std::istream& in);
  void apply(const std::string& key, const std::string& value);

  // Resolved config as sorted key=value pairs for CSV embedding.
  std::vector<std::pair<std::string, std::string>> meta() const;
};

int cmd_sweep_stability(const RunConfig& config, std::ostream& out);

}  // namespace latgas
