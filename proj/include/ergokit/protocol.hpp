#pragma once

#include <vector>

#include "ergokit/hilbert.hpp"
#include "ergokit/weight.hpp"

namespace ergokit {

struct CompositeBranch {
  double weight;
  Matrix amplitudes;  // sys_dim x n, sum |.|^2 * spacing = 1
};

// Joint system-weight state as a weighted list of pure branches.
class CompositeState {
 public:
  CompositeState(int sys_dim, EnergyGrid grid, std::vector<CompositeBranch> branches);
  // Eigen-branches of rho_S (eigenvalues above 1e-14) times the weight branches.
  static CompositeState product(const SystemState& rho, const WeightState& w);

  int sys_dim() const { return sys_dim_; }
  const EnergyGrid& grid() const { return grid_; }
  const std::vector<CompositeBranch>& branches() const { return branches_; }

 private:
  int sys_dim_;
  EnergyGrid grid_;
  std::vector<CompositeBranch> branches_;
};

// Per-level shift in grid bins, e_i / spacing. H must be diagonal in the
// computational basis; throws CommensurabilityError otherwise.
std::vector<int> level_shifts(const SystemObservable& h, const EnergyGrid& grid);

// S|e_i, E> = |e_i, E + e_i>: row i moves by e_i / spacing bins (circularly;
// throws GuardBandViolation if more than 1e-12 would wrap).
CompositeState s_transform(const CompositeState& state, const SystemObservable& h, bool inverse = false);
CompositeState apply_system_unitary(const CompositeState& state, const SystemUnitary& v);
// U = S^dagger V S applied to a composite.
CompositeState evolve(const CompositeState& state, const SystemObservable& h, const SystemUnitary& v);
CompositeState evolve(const SystemState& rho, const WeightState& w, const SystemObservable& h, const SystemUnitary& v);

// Partial trace over the system as an n x n density matrix.
WeightState reduced_weight(const CompositeState& state);
// Same state re-decomposed into eigen-branches (cheap route, no n x n eigensolve).
WeightState reduced_weight_branches(const CompositeState& state, double cutoff = 1e-10);
SystemState reduced_system(const CompositeState& state);
RVector weight_energy_distribution(const CompositeState& state);
RVector weight_time_distribution(const CompositeState& state);
double composite_norm(const CompositeState& state);
// <H_S + H_W> on the composite.
double total_energy(const CompositeState& state, const SystemObservable& h);

// gamma(omega) = sum_j g(t_j) e^{i omega t_j} dt.
cplx dephasing_factor(const WeightState& w, double omega);
// sigma_ij = gamma(e_j - e_i) rho_ij, with gamma taken from the exact
// lattice correlation sum_k psi(E_k) psi*(E_k - omega) spacing.
SystemState control_marginal(const SystemState& rho, const WeightState& w, const SystemObservable& h);

struct ErgotropyResult {
  double value;
  SystemUnitary optimal;  // maps rho's eigenbasis onto the passive arrangement
};

ErgotropyResult ergotropy(const SystemState& rho, const SystemObservable& h);

struct ErgotropySplit {
  double total;
  double incoherent;
  double coherent;
};

ErgotropySplit ergotropy_split(const SystemState& rho, const SystemObservable& h);

struct OracleMoments {
  double delta_energy;
  double delta_variance;
  double sigma_initial;
  double sigma_final;
};

// Brute force: evolve the composite, then compare moments of f(E).
OracleMoments oracle_two_point(const SystemState& rho, const WeightState& w, const SystemObservable& h,
                               const SystemUnitary& v);

struct ProtocolReport {
  double delta_energy = 0.0;    // <W>_sigma
  double delta_variance = 0.0;  // Var_sigma[W] + 2 F (F from the xi' route)
  double work_variance = 0.0;   // Var_sigma[W]
  double f_covariance = 0.0;
  double f_xi = 0.0;
  double f_wigner = 0.0;
  double f_imaginary_residue = 0.0;
  ErgotropySplit ergotropy{0.0, 0.0, 0.0};  // of rho_S
  double ergotropy_sigma = 0.0;             // of the control marginal
  double sigma_e_initial = 0.0;
  double sigma_e_final = 0.0;
  double oracle_delta_energy = 0.0;
  double oracle_delta_variance = 0.0;
  double work_mean_check = 0.0;  // |closed - oracle|
  double variance_check = 0.0;
};

// V-independent pieces of the closed forms for one (rho_S, rho_W, H_S)
// triple; evaluation for a given V is then cheap.
class PreparedProtocol {
 public:
  struct Options {
    // Negative control only: conjugates the phase of every dephasing factor.
    bool corrupt_dephasing_phase = false;
    // The Wigner grid is the expensive part; skip it when only the fast
    // closed form is needed.
    bool with_wigner = true;
  };

  PreparedProtocol(SystemState rho, WeightState w, SystemObservable h);
  PreparedProtocol(SystemState rho, WeightState w, SystemObservable h, Options options);

  struct ClosedForm {
    double delta_energy;
    double delta_variance;
    double work_variance;
    double f_term;
  };

  ClosedForm closed_form(const SystemUnitary& v) const;
  ProtocolReport report(const SystemUnitary& v, bool with_oracle = true) const;

  const SystemState& system_state() const { return rho_; }
  const WeightState& weight_state() const { return w_; }
  const SystemObservable& hamiltonian() const { return h_; }
  const SystemState& control_state() const { return sigma_; }
  double mean_weight_energy() const { return mean_hw_; }
  double sigma_e_initial() const { return sigma_e_; }
  // <E - <H_W>> correlation coefficients C_ij (xi' route).
  const Matrix& xi_coefficients() const { return c_xi_; }

  double f_covariance(const SystemUnitary& v) const;
  cplx f_xi(const SystemUnitary& v) const;
  cplx f_wigner(const SystemUnitary& v) const;

 private:
  SystemState rho_;
  WeightState w_;
  SystemObservable h_;
  Options options_;
  SystemState sigma_;
  double mean_hw_ = 0.0;
  double sigma_e_ = 0.0;
  Matrix c_xi_;
  // S-transformed composite moments: s0(i,j) = <|j><i|>, s1(i,j) = <H_W |j><i|>.
  Matrix s0_;
  Matrix s1_;
  double mean_hw_sigma_ = 0.0;
  // Wigner route: k(t_j) = sum_h spacing (E_h - <H_W>) W(E_h, t_j).
  RVector wigner_profile_;
  bool has_wigner_ = false;
};

ProtocolReport theorem1_report(const SystemState& rho, const WeightState& w, const SystemObservable& h,
                               const SystemUnitary& v);

}  // namespace ergokit
