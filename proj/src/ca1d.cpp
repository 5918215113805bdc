#include "latgas/ca1d.hpp"

#include <algorithm>

namespace latgas {

CaRule::CaRule(const TileSet& ts)
    : alphabet_{ts.size()}, name_(ts.name()), rho_(ts) {
  const int m = alphabet_.size();
  const Symbol blank = alphabet_.blank();
  table_.assign(static_cast<std::size_t>(m) * m, blank);
  for (TileId a = 0; a < ts.size(); ++a)
    for (TileId b = 0; b < ts.size(); ++b)
      if (auto u = rho_(a, b))
        table_[static_cast<std::size_t>(a) * m + b] = *u;
  // Row and column `blank` stay blank: blank is absorbing.
}

Config1D step1d(const CaRule& rule, const Config1D& x) {
  if (x.cells.empty())
    throw std::invalid_argument("step1d: empty configuration");

  Config1D out;
  out.boundary = x.boundary;
  const int L = x.length();

  Symbol right;  // neighbor of the last cell
  switch (x.boundary.kind) {
    case BoundaryKind1D::Periodic:
      right = x.cells[0];
      break;
    case BoundaryKind1D::FeedBlank:
      right = rule.blank();
      break;
    case BoundaryKind1D::FeedStream:
      if (x.boundary.cursor >= x.boundary.stream.size())
        throw StreamExhausted("step1d: boundary stream exhausted at step " +
                              std::to_string(x.boundary.cursor));
      right = x.boundary.stream[x.boundary.cursor];
      out.boundary.cursor = x.boundary.cursor + 1;
      break;
    default:
      throw std::invalid_argument("step1d: unknown boundary kind");
  }

  out.cells.resize(L);
  for (int i = 0; i + 1 < L; ++i)
    out.cells[i] = rule.apply(x.cells[i], x.cells[i + 1]);
  out.cells[L - 1] = rule.apply(x.cells[L - 1], right);
  return out;
}

Trajectory1D run1d(const CaRule& rule, const Config1D& x0, int steps) {
  if (steps < 0) throw std::invalid_argument("run1d: negative step count");
  Trajectory1D traj;
  traj.length = x0.length();
  traj.rows.reserve(steps + 1);
  traj.rows.push_back(x0.cells);
  Config1D x = x0;
  for (int t = 0; t < steps; ++t) {
    x = step1d(rule, x);
    traj.rows.push_back(x.cells);
  }
  return traj;
}

std::vector<std::pair<int, int>> blank_cone(int k, int t, int horizon) {
  if (horizon < t)
    throw std::invalid_argument("blank_cone: horizon precedes injection time");
  std::vector<std::pair<int, int>> cone;
  for (int s = t; s <= horizon; ++s)
    for (int site = k - (s - t); site <= k; ++site)
      cone.emplace_back(site, s);
  // Built in (time, site) order already; keep the contract explicit.
  std::sort(cone.begin(), cone.end(), [](auto& p, auto& q) {
    return std::pair(p.second, p.first) < std::pair(q.second, q.first);
  });
  return cone;
}

TrajectoryWindow default_window(const Patch& patch) {
  TrajectoryWindow w;
  w.length = std::min(patch.width, patch.height);
  w.row_origin = w.length - 1;
  w.col_offset = 0;
  w.steps = patch.width - w.length;
  return w;
}

Trajectory1D patch_to_trajectory(const Patch& patch, const TrajectoryWindow& w) {
  if (w.length <= 0 || w.steps < 0)
    throw std::out_of_range("patch_to_trajectory: bad window extents");
  // Cell (t, i) reads patch(row_origin - i, col_offset + t + i).
  if (w.row_origin - (w.length - 1) < 0 || w.row_origin >= patch.height ||
      w.col_offset < 0 ||
      w.col_offset + w.steps + (w.length - 1) >= patch.width)
    throw std::out_of_range("patch_to_trajectory: window exceeds patch");

  Trajectory1D traj;
  traj.length = w.length;
  traj.rows.reserve(w.steps + 1);
  for (int t = 0; t <= w.steps; ++t) {
    std::vector<Symbol> row(w.length);
    for (int i = 0; i < w.length; ++i)
      row[i] = patch.at(w.row_origin - i, w.col_offset + t + i);
    traj.rows.push_back(std::move(row));
  }
  return traj;
}

ReferenceRun reference_run_from_patch(const Patch& patch, int length, int steps) {
  if (length <= 0 || steps < 0)
    throw std::out_of_range("reference_run_from_patch: bad extents");
  if (patch.height < length + 1 || patch.width < steps + length)
    throw std::out_of_range(
        "reference_run_from_patch: patch too small; need height >= L+1 and "
        "width >= T+L");

  TrajectoryWindow w{length, steps, length, 0};
  ReferenceRun run;
  run.trajectory = patch_to_trajectory(patch, w);
  run.stream.resize(steps);
  // The right-edge feed is the anti-diagonal one row above the window's
  // i = L-1 cells: cell (t, L) of the extended window.
  for (int t = 0; t < steps; ++t) run.stream[t] = patch.at(0, t + length);
  return run;
}

}  // namespace latgas
