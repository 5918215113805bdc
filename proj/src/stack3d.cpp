#include "latgas/stack3d.hpp"

#include <stdexcept>
#include <string>

namespace latgas {

Config3D Config3D::filled(int A, int B, int L, Symbol value, BoundaryI boundary) {
  if (A <= 0 || B <= 0 || L <= 0)
    throw std::invalid_argument("Config3D: extents must be positive");
  Config3D y;
  y.extent_a = A;
  y.extent_b = B;
  y.length = L;
  y.cells.assign(static_cast<std::size_t>(A) * B * L, value);
  y.boundary_i = std::move(boundary);
  return y;
}

Config3D toom_correct(const Config3D& y) {
  Config3D out = y;
  const int A = y.extent_a, B = y.extent_b, L = y.length;
  for (int a = 0; a < A; ++a) {
    const int an = (a + 1) % A;
    for (int b = 0; b < B; ++b) {
      const int be = (b + 1) % B;
      for (int i = 0; i < L; ++i)
        out.at(a, b, i) =
            toom_majority(y.at(a, b, i), y.at(an, b, i), y.at(a, be, i));
    }
  }
  return out;
}

namespace detail {

PreparedStep prepare_step(const CaRule& rule, const Config3D& y) {
  if (y.volume() == 0)
    throw std::invalid_argument("stacked step: empty configuration");

  PreparedStep prep;
  prep.corrected = toom_correct(y);
  prep.feed = rule.blank();
  prep.boundary = y.boundary_i;
  switch (y.boundary_i.kind) {
    case BoundaryKindI::Periodic:
    case BoundaryKindI::FeedBlank:
      break;
    case BoundaryKindI::FeedReference:
      if (y.boundary_i.cursor >= y.boundary_i.stream.size())
        throw StreamExhausted(
            "stacked step: reference stream exhausted at step " +
            std::to_string(y.boundary_i.cursor));
      prep.feed = y.boundary_i.stream[y.boundary_i.cursor];
      prep.boundary.cursor = y.boundary_i.cursor + 1;
      break;
    case BoundaryKindI::Unspecified:
      throw std::invalid_argument(
          "stacked step: configuration has an unspecified i-boundary");
  }
  return prep;
}

}  // namespace detail

Config3D stacked_step(const CaRule& rule, const Config3D& y) {
  const auto prep = detail::prepare_step(rule, y);
  const Config3D& c = prep.corrected;
  const int A = y.extent_a, B = y.extent_b, L = y.length;

  Config3D out = c;
  out.boundary_i = prep.boundary;
  for (int a = 0; a < A; ++a)
    for (int b = 0; b < B; ++b) {
      for (int i = 0; i + 1 < L; ++i)
        out.at(a, b, i) = rule.apply(c.at(a, b, i), c.at(a, b, i + 1));
      const Symbol right = y.boundary_i.kind == BoundaryKindI::Periodic
                               ? c.at(a, b, 0)
                               : prep.feed;
      out.at(a, b, L - 1) = rule.apply(c.at(a, b, L - 1), right);
    }
  return out;
}

Config3D clone_config(const Config1D& x, int A, int B) {
  if (A <= 0 || B <= 0)
    throw std::invalid_argument("clone_config: extents must be positive");
  if (x.cells.empty())
    throw std::invalid_argument("clone_config: empty source configuration");

  BoundaryI boundary;
  switch (x.boundary.kind) {
    case BoundaryKind1D::Periodic:
      boundary = BoundaryI::periodic();
      break;
    case BoundaryKind1D::FeedBlank:
      boundary = BoundaryI::feed_blank();
      break;
    case BoundaryKind1D::FeedStream:
      boundary = BoundaryI::feed_reference(x.boundary.stream);
      boundary.cursor = x.boundary.cursor;
      break;
  }

  Config3D y = Config3D::filled(A, B, x.length(), 0, std::move(boundary));
  for (int a = 0; a < A; ++a)
    for (int b = 0; b < B; ++b)
      for (int i = 0; i < x.length(); ++i) y.at(a, b, i) = x.cells[i];
  return y;
}

ErosionResult erosion_probe(const CaRule& rule, const Config1D& x, int A,
                            int B, std::span<const Flip> flips, int max_steps,
                            int margin) {
  if (max_steps < 0) throw std::invalid_argument("erosion_probe: negative steps");
  if (margin < 0) throw std::invalid_argument("erosion_probe: negative margin");

  Config3D clean = clone_config(x, A, B);
  Config3D dirty = clean;
  const bool margin_applies = clean.boundary_i.kind != BoundaryKindI::Periodic;
  for (const Flip& f : flips) {
    if (f.a < 0 || f.a >= A || f.b < 0 || f.b >= B || f.i < 0 ||
        f.i >= clean.length)
      throw std::invalid_argument("erosion_probe: flip outside the window");
    if (margin_applies &&
        (f.i < margin || f.i >= clean.length - margin))
      throw std::invalid_argument(
          "erosion_probe: flip touches the i-boundary margin");
    if (!rule.alphabet().valid(f.value))
      throw std::invalid_argument("erosion_probe: flip value out of range");
    if (f.value == dirty.at(f.a, f.b, f.i))
      throw std::invalid_argument("erosion_probe: flip does not change the cell");
    dirty.at(f.a, f.b, f.i) = f.value;
  }

  if (dirty.cells_equal(clean)) return {true, 0};
  for (int t = 1; t <= max_steps; ++t) {
    clean = stacked_step(rule, clean);
    dirty = stacked_step(rule, dirty);
    if (dirty.cells_equal(clean)) return {true, t};
  }
  return {false, -1};
}

}  // namespace latgas
