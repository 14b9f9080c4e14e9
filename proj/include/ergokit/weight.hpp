#pragma once

#include <vector>

#include "ergokit/hilbert.hpp"

namespace ergokit {

// Uniform energy lattice E_k = origin + k * spacing, k in [0, n), and its
// conjugate time lattice t_j = (j - n/2) * dt, dt = 2 pi / (n * spacing).
class EnergyGrid {
 public:
  EnergyGrid(int n, double spacing, double origin);
  // 1024 points, spacing 1/32, spanning [-16, 16).
  static EnergyGrid standard();

  int size() const { return n_; }
  double spacing() const { return spacing_; }
  double origin() const { return origin_; }
  double energy(int k) const { return origin_ + k * spacing_; }
  double last_energy() const { return energy(n_ - 1); }
  double time_spacing() const;
  double time(int j) const { return (j - n_ / 2) * time_spacing(); }
  // Half of the time window; |t| beyond this aliases.
  double time_half_width() const { return (n_ / 2) * time_spacing(); }
  RVector energies() const;
  RVector times() const;

  // energy / spacing as an exact integer; throws CommensurabilityError.
  int bins_for(double energy) const;
  // Same lattice with the origin moved by -shift (energies relabelled).
  EnergyGrid recentred(double shift) const { return EnergyGrid(n_, spacing_, origin_ - shift); }

  bool operator==(const EnergyGrid& other) const = default;

 private:
  int n_;
  double spacing_;
  double origin_;
};

// Amplitudes psi(E_k) with sum |psi|^2 * spacing = 1 (checked to 1e-10).
class WeightWavefunction {
 public:
  WeightWavefunction(EnergyGrid grid, CVector amplitudes);
  // Rescales to unit norm first; throws on a zero vector.
  static WeightWavefunction normalised(EnergyGrid grid, CVector amplitudes);

  const EnergyGrid& grid() const { return grid_; }
  const CVector& amplitudes() const { return amps_; }

 private:
  EnergyGrid grid_;
  CVector amps_;
};

struct WeightBranch {
  double weight;
  CVector amplitudes;  // unit norm under the grid measure
};

// Weight state as a weighted list of pure branches or as a grid density
// matrix rho(E_k, E_l) with trace * spacing = 1. Density-form states also
// carry their spectral branches (eigenvalues kept above the cutoff).
class WeightState {
 public:
  static WeightState pure(const WeightWavefunction& psi);
  static WeightState mixture(const EnergyGrid& grid, std::vector<WeightBranch> branches);
  static WeightState density(const EnergyGrid& grid, const Matrix& rho, double cutoff = 1e-10);

  const EnergyGrid& grid() const { return grid_; }
  bool is_density() const { return has_density_; }
  const std::vector<WeightBranch>& branches() const { return branches_; }
  // Probability discarded by the spectral cutoff (density form only).
  double truncated_mass() const { return truncated_; }
  Matrix density_matrix() const;
  double purity() const;
  WeightState with_truncated_mass(double mass) const;
  // Same amplitudes on a relabelled lattice.
  WeightState recentred(double shift) const;

 private:
  WeightState(EnergyGrid grid, std::vector<WeightBranch> branches);
  EnergyGrid grid_;
  std::vector<WeightBranch> branches_;
  Matrix density_;
  bool has_density_ = false;
  double truncated_ = 0.0;
};

// Re-decomposes a mixture of (possibly non-orthogonal) branches into its
// eigen-branches through the branch Gram matrix; eigenvalues at or below
// `cutoff` are dropped and the remainder renormalised.
WeightState compress(const EnergyGrid& grid, const std::vector<WeightBranch>& branches,
                     double cutoff = 1e-10);

// <t|psi> = (2 pi)^(-1/2) sum_k spacing e^{-i t E_k} psi(E_k) on the time lattice.
CVector to_time_domain(const EnergyGrid& grid, const CVector& psi);
CVector to_energy_domain(const EnergyGrid& grid, const CVector& phi);

RVector energy_distribution(const WeightState& w);
RVector time_distribution(const WeightState& w);

// Discrete Wigner function on the half-step energy lattice E_h = origin +
// h * spacing / 2 (2n points) times the full conjugate time lattice:
//   W(E_h, t) = (spacing / 2 pi) sum_m e^{i m spacing t} rho(E_h - m spacing/2, E_h + m spacing/2).
// Quadrature: every (E_h, t_j) cell carries spacing * dt. Marginals are exact:
// sum_j dt W(E_k, t_j) = f(E_k) on integer points and 0 on half points,
// sum_h spacing W(E_h, t_j) = g(t_j).
// Integer points repeat with period pi / spacing in t and half points flip
// sign, so within |t| < pi / (2 spacing) the continuum density is 2 W.
struct WignerFunction {
  EnergyGrid grid;
  RVector energies;        // 2n half-step energies
  RVector times;           // n conjugate times
  Eigen::MatrixXd values;  // values(h, j)
  double imaginary_residue = 0.0;

  RVector energy_marginal() const;
  RVector time_marginal() const;
  // Continuum-normalised value; only meaningful inside the principal window.
  double density(int h, int j) const { return 2.0 * values(h, j); }
  bool in_principal_window(int j) const;
};

WignerFunction wigner(const WeightState& w);

// (2 pi sigma^2)^(-1/4) exp(-(E - mu)^2 / (4 sigma^2) + i nu E)
WeightWavefunction gaussian_packet(double mu, double nu, double sigma, const EnergyGrid& grid);
// Normalised superposition of the (mu, nu) and (-mu, -nu) packets at sigma = 1/sqrt 2.
WeightWavefunction cat_state(double mu, double nu, const EnergyGrid& grid);
// Flat modulus over [center - width/2, center + width/2] times e^{i nu E}.
WeightWavefunction uniform_packet(double center, double width, double nu, const EnergyGrid& grid);

struct DispersionStats {
  double mean_energy;
  double sigma_energy;
  double mean_time;
  double sigma_time;
  bool time_unreliable;  // g(t) has non-negligible mass near the wrap point
};

DispersionStats dispersion_stats(const WeightState& w);
DispersionStats dispersion_from_distributions(const EnergyGrid& grid, const RVector& f, const RVector& g);

// lambda(omega) = sum_k f(E_k) e^{i omega E_k} spacing
cplx energy_characteristic(const EnergyGrid& grid, const RVector& f, double omega);
// gamma(omega) = sum_j g(t_j) e^{i omega t_j} dt
cplx time_characteristic(const EnergyGrid& grid, const RVector& g, double omega);

// Probability within `margin` of either grid edge.
double edge_mass(const EnergyGrid& grid, const RVector& f, double margin);
// Throws GuardBandViolation when more than 1e-12 sits within 2 units of an edge.
void check_guard_band(const EnergyGrid& grid, const RVector& f, double margin = 2.0);

}  // namespace ergokit
