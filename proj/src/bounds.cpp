#include "ergokit/bounds.hpp"

#include <cmath>
#include <string>

#include "ergokit/errors.hpp"

namespace ergokit {

namespace {

struct TimeProfile {
  EnergyGrid grid;
  RVector g;
  DispersionStats stats;

  explicit TimeProfile(const WeightState& w)
      : grid(w.grid()), g(time_distribution(w)), stats(dispersion_from_distributions(grid, energy_distribution(w), g)) {}

  double modulus(double omega) const { return std::abs(time_characteristic(grid, g, omega)); }
  double slack() const { return 3.0 * grid.spacing() * (1.0 + stats.sigma_time / grid.time_spacing()); }
};

BoundReport make_report(const TimeProfile& profile, double bound, double omega) {
  BoundReport r;
  r.bound = bound;
  r.achieved = profile.stats.sigma_energy;
  r.slack = r.achieved - bound;
  r.maximizer = omega;
  r.grid_slack = profile.slack();
  r.masked = profile.stats.time_unreliable;
  return r;
}

}  // namespace

double chur_beta(double x) {
  const double root2 = std::sqrt(2.0);
  return 2.0 * root2 / (root2 + std::sqrt(std::max(0.0, 1.0 - std::cos(x))));
}

double grid_slack(const WeightState& w) { return TimeProfile(w).slack(); }

double nyquist_frequency(const EnergyGrid& grid) { return kPi / grid.time_spacing(); }

BoundReport lemma1_bound(const WeightState& w, double omega) {
  if (!(omega > 0.0)) throw DomainError("lemma1_bound: omega must be positive");
  const TimeProfile profile(w);
  return make_report(profile, omega * profile.modulus(omega) / kPi, omega);
}

BoundReport theorem2_bound(const WeightState& w, double omega_max, int scan_points) {
  const TimeProfile profile(w);
  if (omega_max <= 0.0) omega_max = nyquist_frequency(w.grid());
  if (scan_points < 8) throw DomainError("theorem2_bound: scan needs at least 8 points");
  const double step = omega_max / scan_points;
  auto objective = [&](double omega) { return omega * profile.modulus(omega); };
  int best = 1;
  double best_value = objective(step);
  for (int k = 2; k <= scan_points; ++k) {
    const double v = objective(k * step);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  // Golden-section refinement on the bracket around the best scan point.
  double lo = (best - 1) * step;
  double hi = std::min(omega_max, (best + 1) * step);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - ratio * (hi - lo);
  double b = lo + ratio * (hi - lo);
  double fa = objective(a);
  double fb = objective(b);
  for (int it = 0; it < 80 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + ratio * (hi - lo);
      fb = objective(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - ratio * (hi - lo);
      fa = objective(a);
    }
  }
  double omega_star = 0.5 * (lo + hi);
  double value = objective(omega_star);
  if (best_value > value) {
    omega_star = best * step;
    value = best_value;
  }
  BoundReport r = make_report(profile, value / kPi, omega_star);
  r.converged = best < scan_points;
  return r;
}

double pre_lemma_bound(const WeightState& w, double omega, double x) {
  if (!(x > 0.0) || x > kPi + 1e-12) throw DomainError("pre_lemma_bound: x must lie in (0, pi]");
  const TimeProfile profile(w);
  const double mod = profile.modulus(omega);
  const double squared = (omega * omega) / (x * x) * (1.0 - chur_beta(x) + mod * mod);
  return std::sqrt(std::max(0.0, squared));
}

double coherent_ergotropy_limit(double z, double alpha) {
  return 0.5 * (std::sqrt(alpha * alpha + z * z) - std::abs(z));
}

double qubit_coherent_bound(double coherent_ergotropy, double z, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("qubit_coherent_bound: alpha must be positive");
  const double limit = coherent_ergotropy_limit(z, alpha);
  if (!(coherent_ergotropy > 0.0) || !(coherent_ergotropy < limit)) {
    throw DomainError("qubit_coherent_bound: R_C = " + std::to_string(coherent_ergotropy) + " outside (0, " +
                      std::to_string(limit) + ")");
  }
  const double arg = alpha * alpha / (4.0 * coherent_ergotropy * (coherent_ergotropy + std::abs(z)));
  if (!(arg > 1.0)) throw DomainError("qubit_coherent_bound: logarithm argument not above 1");
  return 1.0 / (2.0 * std::sqrt(std::log(arg)));
}

double qubit_incoherent_bound(double incoherent_ergotropy) {
  if (incoherent_ergotropy < 0.0 || incoherent_ergotropy > 1.0) {
    throw DomainError("qubit_incoherent_bound: R_I must lie in [0, 1]");
  }
  return std::sqrt(1.0 - incoherent_ergotropy * incoherent_ergotropy);
}

}  // namespace ergokit
