#pragma once

// The Gibbs/DLR view of the noisy automaton: the path measure of the PCA
// is a Gibbs measure for a nearest-slice interaction with exactly two
// energy levels per cell, and scaling the inverse temperature beta maps
// back onto the PCA family at a new noise rate.

#include <array>
#include <vector>

#include "latgas/ca1d.hpp"
#include "latgas/common.hpp"
#include "latgas/pca.hpp"

namespace latgas {

// Support of the single-cell interaction: the six input offsets one
// slice back, plus the cell itself.
inline constexpr std::array<Cell4, 7> kInteractionSupport = {{
    {0, 0, 0, -1},
    {1, 0, 0, -1},
    {0, 1, 0, -1},
    {0, 0, 1, -1},
    {1, 0, 1, -1},
    {0, 1, 1, -1},
    {0, 0, 0, 0},
}};

struct InteractionParams {
  double epsilon0 = 0.0;   // reference noise rate
  double beta = 1.0;       // inverse temperature
  double mu_blank = 0.0;   // chemical potential on blank cells
  int alphabet_size = 0;   // m = n_tiles + 1
};

// The physical parameter range: beta > 0 and 0 < epsilon0 < (m-1)/m,
// the regime where raising beta lowers the mapped noise rate. Throws
// std::invalid_argument outside it.
void validate_interaction(const InteractionParams& p);

// The two energy levels. A pattern whose cell value matches its
// deterministic update costs -log(1 - eps); any mismatch costs
// -log(eps / (m - 1)).
double phi_match(double epsilon);
double phi_mismatch(double epsilon, int alphabet_size);

// Interaction energy of one 7-symbol pattern laid out in
// kInteractionSupport order.
double phi(const CaRule& rule, double epsilon,
           const std::array<Symbol, 7>& pattern);

// ---------------------------------------------------------------------------
// Temperature scaling

struct TemperatureMap {
  double alpha = 0.0;    // per-cell free-energy shift
  double epsilon = 0.0;  // mapped noise rate epsilon(beta)
};

// Solve beta * phi_eps0 = alpha + phi_eps(beta) for (alpha, epsilon):
// scaling the interaction by beta is, up to the constant alpha per cell,
// the same two-level interaction at a new rate. Requires beta > 0 and
// 0 < epsilon0 < 1; monotonicity in beta additionally needs
// epsilon0 < (m-1)/m, which is *not* enforced here so the exceptional
// regime stays observable.
TemperatureMap beta_to_epsilon(double epsilon0, double beta, int alphabet_size);
TemperatureMap beta_to_epsilon(const InteractionParams& p);

// ---------------------------------------------------------------------------
// Energies and conditionals on sampled windows

// Cells of X whose own factor has fully resolvable support: every slice
// except t = 0, minus the i = L-1 layer when the boundary is
// Unspecified. In (t, a, b, i) order.
std::vector<Cell4> full_support_region(const SpaceTimeConfig& X);

// Total energy of the region: for each cell, its interaction term plus
// mu_blank if the cell holds blank. Throws TruncatedSupport if a cell's
// support cannot be resolved.
double window_energy(const CaRule& rule, const SpaceTimeConfig& X,
                     double epsilon, double mu_blank,
                     const std::vector<Cell4>& region);

// Single-site conditional of the Gibbs measure: the distribution of the
// symbol at `cell` given every other cell of X, i.e. the softmax of
// -(own factor + factors one slice later whose support reads the cell
// + the blank potential). Factors anchored outside the window do not
// exist and are correctly absent. Throws TruncatedSupport when t = 0 or
// an Unspecified boundary truncates a factor's support.
std::vector<double> gibbs_conditional(const CaRule& rule,
                                      const SpaceTimeConfig& X, Cell4 cell,
                                      double epsilon, double mu_blank = 0.0);

}  // namespace latgas
