// Python bindings for the latgas core. The module exposes the main
// operations end to end: tile-set checks and patch search, the 1D
// automaton, the Toom-protected 3D stack, noisy PCA sampling, the
// Gibbs-side quantities, and the window analyses.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <sstream>

#include "latgas/analysis.hpp"
#include "latgas/ca1d.hpp"
#include "latgas/common.hpp"
#include "latgas/gibbs.hpp"
#include "latgas/io.hpp"
#include "latgas/pca.hpp"
#include "latgas/stack3d.hpp"
#include "latgas/tileset.hpp"

namespace py = pybind11;
using namespace latgas;

namespace {

py::array_t<std::uint8_t> config3d_numpy(const Config3D& y) {
  py::array_t<std::uint8_t> out(
      std::vector<py::ssize_t>{y.extent_a, y.extent_b, y.length});
  std::memcpy(out.mutable_data(), y.cells.data(), y.cells.size());
  return out;
}

py::array_t<std::uint8_t> spacetime_numpy(const SpaceTimeConfig& X) {
  py::array_t<std::uint8_t> out(std::vector<py::ssize_t>{
      X.steps + 1, X.extent_a, X.extent_b, X.length});
  std::memcpy(out.mutable_data(), X.cells.data(), X.cells.size());
  return out;
}

}  // namespace

PYBIND11_MODULE(_latgas, m) {
  m.doc() =
      "Lattice-gas quasicrystal toolkit: Wang tile sets, the induced 1D "
      "automaton, the Toom-protected 3D stack, noisy sampling, and "
      "Gibbs-measure analyses.";

  py::register_exception<TilesetError>(m, "TilesetError");
  py::register_exception<StreamExhausted>(m, "StreamExhausted");
  py::register_exception<TruncatedSupport>(m, "TruncatedSupport");

  // --- tileset ------------------------------------------------------------

  py::class_<Tile>(m, "Tile")
      .def(py::init([](TileId id, Color north, Color east, Color south,
                       Color west) {
             return Tile{id, north, east, south, west};
           }),
           py::arg("id"), py::arg("north"), py::arg("east"), py::arg("south"),
           py::arg("west"))
      .def_readonly("id", &Tile::id)
      .def_readonly("north", &Tile::north)
      .def_readonly("east", &Tile::east)
      .def_readonly("south", &Tile::south)
      .def_readonly("west", &Tile::west)
      .def("__eq__", [](const Tile& a, const Tile& b) { return a == b; })
      .def("__repr__", [](const Tile& t) {
        std::ostringstream s;
        s << "Tile(id=" << int(t.id) << ", north=" << t.north
          << ", east=" << t.east << ", south=" << t.south
          << ", west=" << t.west << ")";
        return s.str();
      });

  py::class_<TileSet>(m, "TileSet")
      .def(py::init<std::string, std::vector<Tile>>(), py::arg("name"),
           py::arg("tiles"))
      .def_property_readonly("name", &TileSet::name)
      .def("__len__", &TileSet::size)
      .def("tile", &TileSet::tile, py::arg("id"),
           py::return_value_policy::copy)
      .def_property_readonly("tiles", &TileSet::tiles);

  m.def("load_tileset", &load_tileset, py::arg("name_or_path"),
        "Resolve 'ammann16' to the bundled fixture, anything else to a "
        "file path.");
  m.def(
      "tileset_from_text",
      [](const std::string& text, const std::string& name) {
        std::istringstream in(text);
        return parse_tileset(in, name);
      },
      py::arg("text"), py::arg("name") = "inline");
  m.def("ammann16_text", [] { return std::string(ammann16_text()); });

  py::enum_<Direction>(m, "Direction")
      .value("NW", Direction::NW)
      .value("SE", Direction::SE);

  py::class_<DeterminismReport>(m, "DeterminismReport")
      .def_readonly("direction", &DeterminismReport::direction)
      .def_readonly("deterministic", &DeterminismReport::deterministic)
      .def_readonly("violations", &DeterminismReport::violations);

  m.def("check_deterministic", &check_deterministic, py::arg("tileset"),
        py::arg("direction"));

  py::class_<Patch>(m, "Patch")
      .def(py::init([](int width, int height, std::vector<TileId> cells) {
             if (cells.size() !=
                 static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
               throw std::invalid_argument("Patch: cells does not match extents");
             return Patch{width, height, std::move(cells)};
           }),
           py::arg("width"), py::arg("height"), py::arg("cells"))
      .def_readonly("width", &Patch::width)
      .def_readonly("height", &Patch::height)
      .def_readonly("cells", &Patch::cells)
      .def("at",
           [](const Patch& p, int row, int col) {
             if (row < 0 || row >= p.height || col < 0 || col >= p.width)
               throw std::out_of_range("Patch.at: index out of range");
             return p.at(row, col);
           },
           py::arg("row"), py::arg("col"))
      .def("__eq__", [](const Patch& a, const Patch& b) { return a == b; });

  m.def("patch_is_valid", &patch_is_valid, py::arg("tileset"),
        py::arg("patch"));
  m.def("torus_patch_is_valid", &torus_patch_is_valid, py::arg("tileset"),
        py::arg("patch"));

  py::enum_<SearchStatus>(m, "SearchStatus")
      .value("Found", SearchStatus::Found)
      .value("ProvenAbsent", SearchStatus::ProvenAbsent)
      .value("BudgetExhausted", SearchStatus::BudgetExhausted);

  py::class_<PatchSearchResult>(m, "PatchSearchResult")
      .def_readonly("status", &PatchSearchResult::status)
      .def_readonly("patch", &PatchSearchResult::patch)
      .def_readonly("nodes", &PatchSearchResult::nodes);

  m.def("find_patch", &find_patch, py::arg("tileset"), py::arg("width"),
        py::arg("height"), py::arg("node_budget") = 10'000'000,
        py::arg("order_seed") = 0);
  m.def("find_torus_tiling", &find_torus_tiling, py::arg("tileset"),
        py::arg("p"), py::arg("q"));

  // --- 1D automaton ---------------------------------------------------------

  py::class_<Alphabet>(m, "Alphabet")
      .def(py::init([](int n_tiles) { return Alphabet{n_tiles}; }),
           py::arg("n_tiles"))
      .def_readonly("n_tiles", &Alphabet::n_tiles)
      .def_property_readonly("size", &Alphabet::size)
      .def_property_readonly("blank", &Alphabet::blank)
      .def("is_blank", &Alphabet::is_blank, py::arg("symbol"))
      .def("valid", &Alphabet::valid, py::arg("symbol"));

  py::class_<CaRule>(m, "CaRule")
      .def(py::init<const TileSet&>(), py::arg("tileset"))
      .def_property_readonly("alphabet", &CaRule::alphabet)
      .def_property_readonly("blank", &CaRule::blank)
      .def_property_readonly("tileset_name", &CaRule::tileset_name)
      .def("apply", &CaRule::apply, py::arg("a"), py::arg("b"))
      .def("rho", &CaRule::rho, py::arg("a"), py::arg("b"));

  py::enum_<BoundaryKind1D>(m, "BoundaryKind1D")
      .value("Periodic", BoundaryKind1D::Periodic)
      .value("FeedBlank", BoundaryKind1D::FeedBlank)
      .value("FeedStream", BoundaryKind1D::FeedStream);

  py::class_<Boundary1D>(m, "Boundary1D")
      .def_readonly("kind", &Boundary1D::kind)
      .def_readonly("stream", &Boundary1D::stream)
      .def_readonly("cursor", &Boundary1D::cursor)
      .def_static("periodic", &Boundary1D::periodic)
      .def_static("feed_blank", &Boundary1D::feed_blank)
      .def_static("feed_stream", &Boundary1D::feed_stream, py::arg("stream"));

  py::class_<Config1D>(m, "Config1D")
      .def(py::init([](std::vector<Symbol> cells, const Boundary1D& boundary) {
             return Config1D{std::move(cells), boundary};
           }),
           py::arg("cells"), py::arg("boundary") = Boundary1D::feed_blank())
      .def_readwrite("cells", &Config1D::cells)
      .def_readwrite("boundary", &Config1D::boundary)
      .def_property_readonly("length", &Config1D::length)
      .def("__eq__",
           [](const Config1D& a, const Config1D& b) { return a == b; });

  py::class_<Trajectory1D>(m, "Trajectory1D")
      .def_readonly("length", &Trajectory1D::length)
      .def_readonly("rows", &Trajectory1D::rows)
      .def_property_readonly("steps", &Trajectory1D::steps)
      .def("at", &Trajectory1D::at, py::arg("t"), py::arg("i"));

  m.def("step1d", &step1d, py::arg("rule"), py::arg("config"));
  m.def("run1d", &run1d, py::arg("rule"), py::arg("config"), py::arg("steps"));
  m.def("blank_cone", &blank_cone, py::arg("k"), py::arg("t"),
        py::arg("horizon"));

  py::class_<TrajectoryWindow>(m, "TrajectoryWindow")
      .def(py::init([](int length, int steps, int row_origin, int col_offset) {
             return TrajectoryWindow{length, steps, row_origin, col_offset};
           }),
           py::arg("length"), py::arg("steps"), py::arg("row_origin"),
           py::arg("col_offset") = 0)
      .def_readwrite("length", &TrajectoryWindow::length)
      .def_readwrite("steps", &TrajectoryWindow::steps)
      .def_readwrite("row_origin", &TrajectoryWindow::row_origin)
      .def_readwrite("col_offset", &TrajectoryWindow::col_offset);

  m.def("default_window", &default_window, py::arg("patch"));
  m.def("patch_to_trajectory", &patch_to_trajectory, py::arg("patch"),
        py::arg("window"));

  py::class_<ReferenceRun>(m, "ReferenceRun")
      .def_readonly("trajectory", &ReferenceRun::trajectory)
      .def_readonly("stream", &ReferenceRun::stream);

  m.def("reference_run_from_patch", &reference_run_from_patch,
        py::arg("patch"), py::arg("length"), py::arg("steps"));

  // --- 3D stack ---------------------------------------------------------

  py::enum_<BoundaryKindI>(m, "BoundaryKindI")
      .value("Periodic", BoundaryKindI::Periodic)
      .value("FeedBlank", BoundaryKindI::FeedBlank)
      .value("FeedReference", BoundaryKindI::FeedReference)
      .value("Unspecified", BoundaryKindI::Unspecified);

  py::class_<BoundaryI>(m, "BoundaryI")
      .def_readonly("kind", &BoundaryI::kind)
      .def_readonly("stream", &BoundaryI::stream)
      .def_readonly("cursor", &BoundaryI::cursor)
      .def_static("periodic", &BoundaryI::periodic)
      .def_static("feed_blank", &BoundaryI::feed_blank)
      .def_static("feed_reference", &BoundaryI::feed_reference,
                  py::arg("stream"))
      .def_static("unspecified", &BoundaryI::unspecified);

  py::class_<Config3D>(m, "Config3D")
      .def_static("filled", &Config3D::filled, py::arg("extent_a"),
                  py::arg("extent_b"), py::arg("length"), py::arg("value"),
                  py::arg("boundary") = BoundaryI::feed_blank())
      .def_readonly("extent_a", &Config3D::extent_a)
      .def_readonly("extent_b", &Config3D::extent_b)
      .def_readonly("length", &Config3D::length)
      .def_readwrite("cells", &Config3D::cells)
      .def_readwrite("boundary_i", &Config3D::boundary_i)
      .def_property_readonly("volume", &Config3D::volume)
      .def("at",
           [](const Config3D& y, int a, int b, int i) {
             if (a < 0 || a >= y.extent_a || b < 0 || b >= y.extent_b ||
                 i < 0 || i >= y.length)
               throw std::out_of_range("Config3D.at: index out of range");
             return y.at(a, b, i);
           },
           py::arg("a"), py::arg("b"), py::arg("i"))
      .def("set",
           [](Config3D& y, int a, int b, int i, Symbol v) {
             if (a < 0 || a >= y.extent_a || b < 0 || b >= y.extent_b ||
                 i < 0 || i >= y.length)
               throw std::out_of_range("Config3D.set: index out of range");
             y.at(a, b, i) = v;
           },
           py::arg("a"), py::arg("b"), py::arg("i"), py::arg("value"))
      .def("cells_equal", &Config3D::cells_equal, py::arg("other"))
      .def("numpy", &config3d_numpy,
           "The cell block as a (A, B, L) uint8 array (copy).");

  m.def("toom_majority", &toom_majority, py::arg("center"), py::arg("north"),
        py::arg("east"));
  m.def("toom_correct", &toom_correct, py::arg("config"));
  m.def("stacked_step", &stacked_step, py::arg("rule"), py::arg("config"));
  m.def("clone_config", &clone_config, py::arg("config"), py::arg("extent_a"),
        py::arg("extent_b"));

  py::class_<Flip>(m, "Flip")
      .def(py::init([](int a, int b, int i, Symbol value) {
             return Flip{a, b, i, value};
           }),
           py::arg("a"), py::arg("b"), py::arg("i"), py::arg("value"))
      .def_readwrite("a", &Flip::a)
      .def_readwrite("b", &Flip::b)
      .def_readwrite("i", &Flip::i)
      .def_readwrite("value", &Flip::value);

  py::class_<ErosionResult>(m, "ErosionResult")
      .def_readonly("recovered", &ErosionResult::recovered)
      .def_readonly("time", &ErosionResult::time);

  m.def(
      "erosion_probe",
      [](const CaRule& rule, const Config1D& x, int A, int B,
         const std::vector<Flip>& flips, int max_steps, int margin) {
        return erosion_probe(rule, x, A, B, flips, max_steps, margin);
      },
      py::arg("rule"), py::arg("config"), py::arg("extent_a"),
      py::arg("extent_b"), py::arg("flips"), py::arg("max_steps"),
      py::arg("margin") = 1);

  // --- noisy sampling ----------------------------------------------------

  py::class_<NoiseParams>(m, "NoiseParams")
      .def(py::init([](double epsilon, int alphabet_size) {
             return NoiseParams{epsilon, alphabet_size};
           }),
           py::arg("epsilon"), py::arg("alphabet_size"))
      .def_readonly("epsilon", &NoiseParams::epsilon)
      .def_readonly("alphabet_size", &NoiseParams::alphabet_size)
      .def("off_rate", &NoiseParams::off_rate);

  m.def("theta", &theta, py::arg("noise"), py::arg("a"), py::arg("b"));
  m.def(
      "stacked_rule",
      [](const CaRule& rule, const std::array<Symbol, 6>& p) {
        return stacked_rule(rule, p);
      },
      py::arg("rule"), py::arg("pattern"));
  m.def(
      "psi",
      [](const CaRule& rule, const NoiseParams& np,
         const std::array<Symbol, 6>& p, Symbol b) {
        return psi(rule, np, p, b);
      },
      py::arg("rule"), py::arg("noise"), py::arg("pattern"), py::arg("b"));

  {
    py::list hood;
    for (const auto& o : kNeighborhood)
      hood.append(py::make_tuple(o[0], o[1], o[2]));
    m.attr("NEIGHBORHOOD") = hood;
  }

  py::class_<Cell4>(m, "Cell4")
      .def(py::init([](int a, int b, int i, int t) {
             return Cell4{a, b, i, t};
           }),
           py::arg("a"), py::arg("b"), py::arg("i"), py::arg("t"))
      .def_readwrite("a", &Cell4::a)
      .def_readwrite("b", &Cell4::b)
      .def_readwrite("i", &Cell4::i)
      .def_readwrite("t", &Cell4::t)
      .def("__eq__", [](const Cell4& x, const Cell4& y) { return x == y; })
      .def("__lt__", [](const Cell4& x, const Cell4& y) { return x < y; })
      .def("__repr__", [](const Cell4& c) {
        std::ostringstream s;
        s << "Cell4(" << c.a << ", " << c.b << ", " << c.i << ", " << c.t
          << ")";
        return s.str();
      });

  py::class_<SpaceTimeConfig>(m, "SpaceTimeConfig")
      .def_readonly("extent_a", &SpaceTimeConfig::extent_a)
      .def_readonly("extent_b", &SpaceTimeConfig::extent_b)
      .def_readonly("length", &SpaceTimeConfig::length)
      .def_readonly("steps", &SpaceTimeConfig::steps)
      .def_readonly("cells", &SpaceTimeConfig::cells)
      .def_readonly("boundary_i", &SpaceTimeConfig::boundary_i)
      .def_property_readonly("volume", &SpaceTimeConfig::volume)
      .def("at",
           [](const SpaceTimeConfig& X, int a, int b, int i, int t) {
             if (a < 0 || a >= X.extent_a || b < 0 || b >= X.extent_b ||
                 i < 0 || i >= X.length || t < 0 || t > X.steps)
               throw std::out_of_range(
                   "SpaceTimeConfig.at: index out of range");
             return X.at(a, b, i, t);
           },
           py::arg("a"), py::arg("b"), py::arg("i"), py::arg("t"))
      .def("slice", &SpaceTimeConfig::slice, py::arg("t"))
      .def("numpy", &spacetime_numpy,
           "The sampled history as a (T+1, A, B, L) uint8 array (copy).");

  m.def("sample_trajectory", &sample_trajectory, py::arg("rule"),
        py::arg("init"), py::arg("noise"), py::arg("seed"), py::arg("steps"));
  m.def("expected_update", &expected_update, py::arg("rule"), py::arg("window"),
        py::arg("a"), py::arg("b"), py::arg("i"), py::arg("t"));

  py::class_<ErrorSetResult>(m, "ErrorSetResult")
      .def_readonly("cells", &ErrorSetResult::cells)
      .def_readonly("checked", &ErrorSetResult::checked)
      .def_readonly("excluded", &ErrorSetResult::excluded);

  m.def("error_set", &error_set, py::arg("rule"), py::arg("window"));

  // --- Gibbs side -------------------------------------------------------

  {
    py::list support;
    for (const auto& c : kInteractionSupport)
      support.append(py::make_tuple(c.a, c.b, c.i, c.t));
    m.attr("INTERACTION_SUPPORT") = support;
  }

  py::class_<InteractionParams>(m, "InteractionParams")
      .def(py::init([](double epsilon0, double beta, double mu_blank,
                       int alphabet_size) {
             return InteractionParams{epsilon0, beta, mu_blank, alphabet_size};
           }),
           py::arg("epsilon0"), py::arg("beta"), py::arg("mu_blank"),
           py::arg("alphabet_size"))
      .def_readwrite("epsilon0", &InteractionParams::epsilon0)
      .def_readwrite("beta", &InteractionParams::beta)
      .def_readwrite("mu_blank", &InteractionParams::mu_blank)
      .def_readwrite("alphabet_size", &InteractionParams::alphabet_size);

  m.def("validate_interaction", &validate_interaction, py::arg("params"));
  m.def("phi_match", &phi_match, py::arg("epsilon"));
  m.def("phi_mismatch", &phi_mismatch, py::arg("epsilon"),
        py::arg("alphabet_size"));
  m.def(
      "phi",
      [](const CaRule& rule, double epsilon,
         const std::array<Symbol, 7>& pattern) {
        return phi(rule, epsilon, pattern);
      },
      py::arg("rule"), py::arg("epsilon"), py::arg("pattern"));

  py::class_<TemperatureMap>(m, "TemperatureMap")
      .def_readonly("alpha", &TemperatureMap::alpha)
      .def_readonly("epsilon", &TemperatureMap::epsilon);

  m.def("beta_to_epsilon",
        py::overload_cast<double, double, int>(&beta_to_epsilon),
        py::arg("epsilon0"), py::arg("beta"), py::arg("alphabet_size"));
  m.def("beta_to_epsilon",
        py::overload_cast<const InteractionParams&>(&beta_to_epsilon),
        py::arg("params"));

  m.def("full_support_region", &full_support_region, py::arg("window"));
  m.def("window_energy", &window_energy, py::arg("rule"), py::arg("window"),
        py::arg("epsilon"), py::arg("mu_blank"), py::arg("region"));
  m.def("gibbs_conditional", &gibbs_conditional, py::arg("rule"),
        py::arg("window"), py::arg("cell"), py::arg("epsilon"),
        py::arg("mu_blank") = 0.0);

  // --- analyses -----------------------------------------------------------

  py::enum_<Metric>(m, "Metric")
      .value("L1", Metric::L1)
      .value("Linf", Metric::Linf);

  py::class_<Extent4>(m, "Extent4")
      .def(py::init([](int a, int b, int i, int t) {
             return Extent4{a, b, i, t};
           }),
           py::arg("a"), py::arg("b"), py::arg("i"), py::arg("t"))
      .def_readwrite("a", &Extent4::a)
      .def_readwrite("b", &Extent4::b)
      .def_readwrite("i", &Extent4::i)
      .def_readwrite("t", &Extent4::t)
      .def("__eq__",
           [](const Extent4& x, const Extent4& y) { return x == y; });

  py::class_<DisagreementSet>(m, "DisagreementSet")
      .def(py::init([](Extent4 extent, std::vector<Cell4> cells) {
             return DisagreementSet{extent, std::move(cells)};
           }),
           py::arg("extent"), py::arg("cells"))
      .def_readonly("extent", &DisagreementSet::extent)
      .def_readonly("cells", &DisagreementSet::cells)
      .def("rate", &DisagreementSet::rate);

  m.def("disagreements", &disagreements, py::arg("window"),
        py::arg("reference"));

  py::class_<Cluster>(m, "Cluster")
      .def_readonly("cells", &Cluster::cells)
      .def_readonly("lo", &Cluster::lo)
      .def_readonly("hi", &Cluster::hi)
      .def_readonly("spanning", &Cluster::spanning);

  py::class_<ClusterReport>(m, "ClusterReport")
      .def_readonly("range", &ClusterReport::range)
      .def_readonly("metric", &ClusterReport::metric)
      .def_readonly("extent", &ClusterReport::extent)
      .def_readonly("total_cells", &ClusterReport::total_cells)
      .def_readonly("max_size", &ClusterReport::max_size)
      .def_readonly("any_spanning", &ClusterReport::any_spanning)
      .def_readonly("clusters", &ClusterReport::clusters);

  m.def("clusters", &clusters, py::arg("disagreements"), py::arg("range"),
        py::arg("metric") = Metric::L1);

  py::class_<SeaIslandVerdict>(m, "SeaIslandVerdict")
      .def_readonly("pass_", &SeaIslandVerdict::pass)
      .def_readonly("size_threshold", &SeaIslandVerdict::size_threshold)
      .def_readonly("report", &SeaIslandVerdict::report);

  m.def("sea_island_check", &sea_island_check, py::arg("window"),
        py::arg("reference"), py::arg("range"), py::arg("size_threshold"),
        py::arg("metric") = Metric::L1);

  py::class_<PeriodEntry> period_entry(m, "PeriodEntry");
  py::enum_<PeriodEntry::Status>(period_entry, "Status")
      .value("Period", PeriodEntry::Status::Period)
      .value("Broken", PeriodEntry::Status::Broken)
      .value("EmptyOverlap", PeriodEntry::Status::EmptyOverlap);
  period_entry.def_readonly("p", &PeriodEntry::p)
      .def_readonly("status", &PeriodEntry::status)
      .def_readonly("witness", &PeriodEntry::witness);

  py::class_<PeriodReport>(m, "PeriodReport")
      .def_readonly("bound", &PeriodReport::bound)
      .def_readonly("last_two_only", &PeriodReport::last_two_only)
      .def_readonly("entries", &PeriodReport::entries)
      .def("has_nontrivial_period", &PeriodReport::has_nontrivial_period);

  m.def("periodicity_scan",
        py::overload_cast<const SpaceTimeConfig&, int, bool>(
            &periodicity_scan),
        py::arg("window"), py::arg("bound"), py::arg("last_two_only") = false);
  m.def("periodicity_scan",
        py::overload_cast<const Patch&, int>(&periodicity_scan),
        py::arg("patch"), py::arg("bound"));

  py::class_<MajorityField>(m, "MajorityField")
      .def_readonly("extent", &MajorityField::extent)
      .def_readonly("modal", &MajorityField::modal)
      .def_readonly("frequency", &MajorityField::frequency);

  m.def(
      "empirical_majority_field",
      [](const std::vector<SpaceTimeConfig>& samples) {
        return empirical_majority_field(samples);
      },
      py::arg("samples"));
}
