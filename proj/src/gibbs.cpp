#include "latgas/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latgas {

namespace {

void validate_rate(double epsilon) {
  if (!(epsilon > 0.0) || epsilon >= 1.0)
    throw std::invalid_argument("interaction: epsilon must lie in (0, 1)");
}

}  // namespace

void validate_interaction(const InteractionParams& p) {
  if (p.alphabet_size < 2)
    throw std::invalid_argument("interaction: alphabet must have >= 2 symbols");
  if (!(p.beta > 0.0))
    throw std::invalid_argument("interaction: beta must be positive");
  validate_rate(p.epsilon0);
  const double k = p.alphabet_size - 1;
  if (p.epsilon0 >= k / (k + 1.0))
    throw std::invalid_argument(
        "interaction: epsilon0 must stay below (m-1)/m for the temperature "
        "map to be monotone");
}

double phi_match(double epsilon) {
  validate_rate(epsilon);
  return -std::log1p(-epsilon);
}

double phi_mismatch(double epsilon, int alphabet_size) {
  validate_rate(epsilon);
  if (alphabet_size < 2)
    throw std::invalid_argument("interaction: alphabet must have >= 2 symbols");
  return -std::log(epsilon / (alphabet_size - 1));
}

double phi(const CaRule& rule, double epsilon,
           const std::array<Symbol, 7>& pattern) {
  NeighborhoodPattern inputs;
  std::copy_n(pattern.begin(), 6, inputs.begin());
  const Symbol expected = stacked_rule(rule, inputs);
  return pattern[6] == expected
             ? phi_match(epsilon)
             : phi_mismatch(epsilon, rule.alphabet().size());
}

TemperatureMap beta_to_epsilon(double epsilon0, double beta, int alphabet_size) {
  if (!(beta > 0.0))
    throw std::invalid_argument("beta_to_epsilon: beta must be positive");
  if (alphabet_size < 2)
    throw std::invalid_argument("beta_to_epsilon: alphabet must have >= 2 symbols");
  validate_rate(epsilon0);

  // With k = m - 1 and r = eps0 / (k (1 - eps0)), the scaled Boltzmann
  // weights are (1-eps0)^beta for a match and (eps0/k)^beta for each of
  // the k mismatches. Normalizing per cell gives
  //   s = k r^beta,  eps(beta) = s / (1 + s),
  //   alpha = -beta log(1-eps0) - log(1 + s).
  // The log1p form stays accurate for s near 0 and s huge alike.
  const double k = alphabet_size - 1;
  const double log_r = std::log(epsilon0) - std::log(k) - std::log1p(-epsilon0);
  const double log_s = std::log(k) + beta * log_r;
  const double s = std::exp(log_s);

  TemperatureMap map;
  if (std::isfinite(s)) {
    map.epsilon = s / (1.0 + s);
    map.alpha = -beta * std::log1p(-epsilon0) - std::log1p(s);
  } else {
    // Only reachable in the non-monotone regime epsilon0 > k/(k+1).
    map.epsilon = 1.0;
    map.alpha = -beta * std::log1p(-epsilon0) - log_s;
  }
  return map;
}

TemperatureMap beta_to_epsilon(const InteractionParams& p) {
  return beta_to_epsilon(p.epsilon0, p.beta, p.alphabet_size);
}

std::vector<Cell4> full_support_region(const SpaceTimeConfig& X) {
  std::vector<Cell4> region;
  const bool unresolved_edge = X.boundary_i.kind == BoundaryKindI::Unspecified;
  const int last_i = unresolved_edge ? X.length - 1 : X.length;
  region.reserve(static_cast<std::size_t>(X.steps) * X.extent_a * X.extent_b *
                 last_i);
  for (int t = 1; t <= X.steps; ++t)
    for (int a = 0; a < X.extent_a; ++a)
      for (int b = 0; b < X.extent_b; ++b)
        for (int i = 0; i < last_i; ++i) region.push_back({a, b, i, t});
  return region;
}

namespace {

// Energy contribution of the factor anchored at `k`: the two-level
// interaction term, evaluated by re-deriving the deterministic update.
double factor_energy(const CaRule& rule, const SpaceTimeConfig& X,
                     const Cell4& k, double epsilon) {
  const Symbol expected = expected_update(rule, X, k.a, k.b, k.i, k.t);
  return X.at(k) == expected ? phi_match(epsilon)
                             : phi_mismatch(epsilon, rule.alphabet().size());
}

}  // namespace

double window_energy(const CaRule& rule, const SpaceTimeConfig& X,
                     double epsilon, double mu_blank,
                     const std::vector<Cell4>& region) {
  const Symbol blank = rule.blank();
  double energy = 0.0;
  for (const Cell4& k : region) {
    energy += factor_energy(rule, X, k, epsilon);
    if (X.at(k) == blank) energy += mu_blank;
  }
  return energy;
}

std::vector<double> gibbs_conditional(const CaRule& rule,
                                      const SpaceTimeConfig& X, Cell4 cell,
                                      double epsilon, double mu_blank) {
  if (cell.a < 0 || cell.a >= X.extent_a || cell.b < 0 ||
      cell.b >= X.extent_b || cell.i < 0 || cell.i >= X.length || cell.t < 0 ||
      cell.t > X.steps)
    throw std::out_of_range("gibbs_conditional: cell outside the window");
  if (cell.t == 0)
    throw TruncatedSupport(
        "gibbs_conditional: cells in slice 0 have no factor inside the "
        "window");

  const bool wrap_i = X.boundary_i.kind == BoundaryKindI::Periodic;

  // Factors whose support reads `cell`: its own, plus -- one slice later
  // -- the factors anchored at cell - n for each input offset n, when
  // that anchor lies inside the window. Wrapped axes can make several
  // offsets land on one anchor; each factor enters the energy once.
  std::vector<Cell4> anchors{cell};
  if (cell.t + 1 <= X.steps) {
    for (const auto& n : kNeighborhood) {
      Cell4 j{(cell.a - n[0] + X.extent_a) % X.extent_a,
              (cell.b - n[1] + X.extent_b) % X.extent_b, cell.i - n[2],
              cell.t + 1};
      if (j.i < 0) {
        if (!wrap_i) continue;
        j.i += X.length;
      }
      anchors.push_back(j);
    }
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  }

  const int m = rule.alphabet().size();
  SpaceTimeConfig Y = X;  // scratch copy; only `cell` is mutated
  std::vector<double> neg_energy(m);
  for (int sigma = 0; sigma < m; ++sigma) {
    Y.at(cell.a, cell.b, cell.i, cell.t) = static_cast<Symbol>(sigma);
    double e = 0.0;
    for (const Cell4& j : anchors) e += factor_energy(rule, Y, j, epsilon);
    if (sigma == rule.blank()) e += mu_blank;
    neg_energy[sigma] = -e;
  }

  // Softmax in log space.
  const double peak = *std::max_element(neg_energy.begin(), neg_energy.end());
  double z = 0.0;
  for (double& v : neg_energy) {
    v = std::exp(v - peak);
    z += v;
  }
  for (double& v : neg_energy) v /= z;
  return neg_energy;
}

}  // namespace latgas
