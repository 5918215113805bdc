#include "latgas/pca.hpp"

#include <stdexcept>
#include <string>

namespace latgas {

namespace {

void validate(const NoiseParams& np) {
  if (np.alphabet_size < 2)
    throw std::invalid_argument("NoiseParams: alphabet must have >= 2 symbols");
  if (!(np.epsilon >= 0.0) || np.epsilon >= 1.0)
    throw std::invalid_argument("NoiseParams: epsilon must lie in [0, 1)");
}

}  // namespace

double theta(const NoiseParams& np, Symbol a, Symbol b) {
  validate(np);
  if (a >= np.alphabet_size || b >= np.alphabet_size)
    throw std::out_of_range("theta: symbol out of range");
  return a == b ? 1.0 - np.epsilon : np.off_rate();
}

Symbol stacked_rule(const CaRule& rule, const NeighborhoodPattern& p) {
  const Symbol own = toom_majority(p[0], p[1], p[2]);
  const Symbol right = toom_majority(p[3], p[4], p[5]);
  return rule.apply(own, right);
}

double psi(const CaRule& rule, const NoiseParams& np,
           const NeighborhoodPattern& p, Symbol b) {
  return theta(np, stacked_rule(rule, p), b);
}

Config3D pca_step(const CaRule& rule, const Config3D& y, const NoiseParams& np,
                  const CellRng& rng, int t) {
  validate(np);
  if (np.alphabet_size != rule.alphabet().size())
    throw std::invalid_argument("pca_step: alphabet size mismatch");

  const auto prep = detail::prepare_step(rule, y);
  const Config3D& c = prep.corrected;
  const int A = y.extent_a, B = y.extent_b, L = y.length;
  const int m = np.alphabet_size;

  Config3D out = c;
  out.boundary_i = prep.boundary;
  for (int a = 0; a < A; ++a)
    for (int b = 0; b < B; ++b)
      for (int i = 0; i < L; ++i) {
        const Symbol right =
            i + 1 < L ? c.at(a, b, i + 1)
                      : (y.boundary_i.kind == BoundaryKindI::Periodic
                             ? c.at(a, b, 0)
                             : prep.feed);
        Symbol v = rule.apply(c.at(a, b, i), right);
        if (np.epsilon > 0.0) {
          const std::uint64_t key = rng.cell_key(a, b, i, t);
          if (CellRng::uniform01(key, 0) < np.epsilon) {
            // Uniform over the m-1 symbols other than v. m-1 is the
            // tile count, so for power-of-two tile sets the modulo is
            // exact; otherwise the bias for 64-bit draws is negligible.
            const std::uint64_t u = CellRng::bits(key, 1) % (m - 1);
            v = static_cast<Symbol>(u + (u >= v ? 1 : 0));
          }
        }
        out.at(a, b, i) = v;
      }
  return out;
}

Config3D SpaceTimeConfig::slice(int t) const {
  if (t < 0 || t > steps)
    throw std::out_of_range("SpaceTimeConfig::slice: time out of range");
  Config3D y;
  y.extent_a = extent_a;
  y.extent_b = extent_b;
  y.length = length;
  y.boundary_i = boundary_i;
  y.boundary_i.cursor = boundary_i.cursor + t;
  const std::size_t v = slice_volume();
  y.cells.assign(cells.begin() + static_cast<std::ptrdiff_t>(t * v),
                 cells.begin() + static_cast<std::ptrdiff_t>((t + 1) * v));
  return y;
}

void SpaceTimeConfig::set_slice(int t, const Config3D& y) {
  if (t < 0 || t > steps)
    throw std::out_of_range("SpaceTimeConfig::set_slice: time out of range");
  if (y.extent_a != extent_a || y.extent_b != extent_b || y.length != length)
    throw std::invalid_argument("SpaceTimeConfig::set_slice: extent mismatch");
  std::copy(y.cells.begin(), y.cells.end(),
            cells.begin() + static_cast<std::ptrdiff_t>(t * slice_volume()));
}

SpaceTimeConfig sample_trajectory(const CaRule& rule, const Config3D& init,
                                  const NoiseParams& np, std::uint64_t seed,
                                  int steps) {
  if (steps < 0)
    throw std::invalid_argument("sample_trajectory: negative step count");
  validate(np);

  SpaceTimeConfig X;
  X.extent_a = init.extent_a;
  X.extent_b = init.extent_b;
  X.length = init.length;
  X.steps = steps;
  X.boundary_i = init.boundary_i;
  X.cells.resize(static_cast<std::size_t>(steps + 1) * init.volume());
  X.set_slice(0, init);

  const CellRng rng(seed);
  Config3D y = init;
  for (int t = 0; t < steps; ++t) {
    y = pca_step(rule, y, np, rng, t);
    X.set_slice(t + 1, y);
  }
  return X;
}

Symbol expected_update(const CaRule& rule, const SpaceTimeConfig& X, int a,
                       int b, int i, int t) {
  if (a < 0 || a >= X.extent_a || b < 0 || b >= X.extent_b || i < 0 ||
      i >= X.length || t < 0 || t > X.steps)
    throw std::out_of_range("expected_update: cell outside the window");
  if (t == 0)
    throw TruncatedSupport("expected_update: slice 0 has no predecessor");

  const int s = t - 1;  // input slice
  const int an = (a + 1) % X.extent_a;
  const int be = (b + 1) % X.extent_b;
  const Symbol own =
      toom_majority(X.at(a, b, i, s), X.at(an, b, i, s), X.at(a, be, i, s));

  Symbol right;
  if (i + 1 < X.length) {
    right = toom_majority(X.at(a, b, i + 1, s), X.at(an, b, i + 1, s),
                          X.at(a, be, i + 1, s));
  } else {
    switch (X.boundary_i.kind) {
      case BoundaryKindI::Periodic:
        right = toom_majority(X.at(a, b, 0, s), X.at(an, b, 0, s),
                              X.at(a, be, 0, s));
        break;
      case BoundaryKindI::FeedBlank:
        right = rule.blank();
        break;
      case BoundaryKindI::FeedReference: {
        const std::size_t pos = X.boundary_i.cursor + static_cast<std::size_t>(s);
        if (pos >= X.boundary_i.stream.size())
          throw StreamExhausted("expected_update: reference stream exhausted");
        right = X.boundary_i.stream[pos];
        break;
      }
      case BoundaryKindI::Unspecified:
      default:
        throw TruncatedSupport(
            "expected_update: neighborhood reads across an unspecified "
            "i-boundary");
    }
  }
  return rule.apply(own, right);
}

ErrorSetResult error_set(const CaRule& rule, const SpaceTimeConfig& X) {
  ErrorSetResult result;
  const bool unresolved_edge = X.boundary_i.kind == BoundaryKindI::Unspecified;
  for (int t = 1; t <= X.steps; ++t)
    for (int a = 0; a < X.extent_a; ++a)
      for (int b = 0; b < X.extent_b; ++b)
        for (int i = 0; i < X.length; ++i) {
          if (unresolved_edge && i == X.length - 1) {
            ++result.excluded;
            continue;
          }
          ++result.checked;
          if (X.at(a, b, i, t) != expected_update(rule, X, a, b, i, t))
            result.cells.push_back({a, b, i, t});
        }
  return result;
}

}  // namespace latgas
