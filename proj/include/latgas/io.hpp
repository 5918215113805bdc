#pragma once

// Serialization: trajectory text dumps, binary configuration dumps, and
// CSV output with embedded resolved-config headers. All writers are
// deterministic -- no timestamps, no environment-dependent content -- so
// identical inputs produce byte-identical files.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "latgas/analysis.hpp"
#include "latgas/ca1d.hpp"
#include "latgas/pca.hpp"
#include "latgas/stack3d.hpp"

namespace latgas {

// --- 1D trajectories: one text line per time step, symbols as decimal
// tile ids, blank as '.'; '#' lines are comments.

void write_trajectory_text(std::ostream& out, const Trajectory1D& traj,
                           const Alphabet& alphabet);
Trajectory1D read_trajectory_text(std::istream& in, const Alphabet& alphabet);

// --- 3D configurations: a text header line "A B L", then A*B*L raw
// bytes, a outer / b middle / i inner. The format carries no boundary
// information; the reader returns an Unspecified boundary and callers
// choose a policy explicitly.

void write_config3d(std::ostream& out, const Config3D& y);
Config3D read_config3d(std::istream& in);

// --- Space-time windows: text header lines
//       A B L T
//       boundary-i {periodic|blank|reference|unspecified}
//       stream s0 s1 ... s_{T-1}      (reference only)
//       data
//     followed by (T+1)*A*B*L raw bytes, t outer / a / b / i inner.
//     '#' lines before `data` are comments. A missing boundary-i line
//     reads as unspecified.

void write_spacetime(std::ostream& out, const SpaceTimeConfig& X);
SpaceTimeConfig read_spacetime(std::istream& in);

// --- Patches: text header "width height", then height lines of width
// decimal tile ids.

void write_patch(std::ostream& out, const Patch& patch);
Patch read_patch(std::istream& in);

// --- CSV with resolved configuration embedded as leading '# key=value'
// comment lines (sorted by key), then a header row, then data rows.

using MetaKv = std::vector<std::pair<std::string, std::string>>;

void write_csv(std::ostream& out, MetaKv meta,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

// Shortest representation with 12 significant digits.
std::string fmt_g12(double value);

}  // namespace latgas
