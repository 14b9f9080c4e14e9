#pragma once

#include "ergokit/weight.hpp"

namespace ergokit {

struct BoundReport {
  double bound = 0.0;
  double achieved = 0.0;  // sigma_E of the state
  double slack = 0.0;     // achieved - bound
  double maximizer = 0.0; // omega at which the bound was evaluated or maximised
  double grid_slack = 0.0;
  bool masked = false;    // g(t) reaches the wrap point, so gamma is aliased
  bool converged = true;  // false when the maximiser sits on the search boundary
};

// 2 sqrt2 (sqrt2 - sqrt(1 - cos x)) / (1 + cos x), evaluated in the
// equivalent pole-free form 2 sqrt2 / (sqrt2 + sqrt(1 - cos x)).
double chur_beta(double x);

// 3 spacing (1 + sigma_t / dt): tolerance for lattice uncertainty inequalities.
double grid_slack(const WeightState& w);

// pi / dt, the highest frequency resolved by the time lattice.
double nyquist_frequency(const EnergyGrid& grid);

BoundReport lemma1_bound(const WeightState& w, double omega);
// Maximises omega |gamma(omega)| / pi over (0, omega_max] by a uniform scan
// refined with golden-section search; omega_max <= 0 selects the Nyquist frequency.
BoundReport theorem2_bound(const WeightState& w, double omega_max = 0.0, int scan_points = 2048);

// sqrt((omega/x)^2 (1 - beta(x) + |gamma(omega)|^2)), clamped at 0.
double pre_lemma_bound(const WeightState& w, double omega, double x);

// 1 / (2 sqrt(log(alpha^2 / (4 R_C (R_C + |z|))))) on 0 < R_C < (sqrt(alpha^2 + z^2) - |z|) / 2.
double qubit_coherent_bound(double coherent_ergotropy, double z, double alpha);
double coherent_ergotropy_limit(double z, double alpha);
// sqrt(1 - R_I^2) for R_I in [0, 1].
double qubit_incoherent_bound(double incoherent_ergotropy);

}  // namespace ergokit
