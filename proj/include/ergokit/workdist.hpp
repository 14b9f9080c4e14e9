#pragma once

#include <string>
#include <vector>

#include "ergokit/hilbert.hpp"
#include "ergokit/weight.hpp"

namespace ergokit {

enum class WorkKind { work_operator, tpm, quasi, energy };

std::string to_string(WorkKind kind);
WorkKind work_kind_from_string(const std::string& name);

struct Atom {
  double w;
  double q;
};

// Atoms are sorted by w and merged within 1e-9; weights sum to 1.
// Sampled densities keep a w-grid with signed values.
class WorkDistribution {
 public:
  static WorkDistribution atoms(WorkKind kind, std::vector<Atom> atoms);
  static WorkDistribution sampled(WorkKind kind, RVector w_grid, RVector values);

  WorkKind kind() const { return kind_; }
  bool is_atomic() const { return atomic_; }
  const std::vector<Atom>& atom_list() const { return atoms_; }
  const RVector& w_grid() const { return w_grid_; }
  const RVector& values() const { return values_; }

  double moment(int order) const;
  cplx characteristic(double s) const;

 private:
  WorkDistribution() = default;
  WorkKind kind_ = WorkKind::quasi;
  bool atomic_ = true;
  std::vector<Atom> atoms_;
  RVector w_grid_;
  RVector values_;
};

// Sorted, merged atom list (|w_a - w_b| < tol merged, |q| < drop removed).
std::vector<Atom> merge_atoms(std::vector<Atom> atoms, double tol = 1e-9, double drop = 1e-15);

double total_variation(const WorkDistribution& a, const WorkDistribution& b);

struct CharacteristicFunction {
  RVector s;
  CVector values;
  std::vector<bool> masked;  // denominator below the floor at this sample
  double masked_fraction = 0.0;
};

// W = H_i - V^dagger H_f V.
SystemObservable work_operator(const SystemObservable& h_initial, const SystemObservable& h_final,
                               const SystemUnitary& v);
SystemObservable work_operator(const SystemObservable& h, const SystemUnitary& v);

WorkDistribution work_operator_distribution(const SystemObservable& work, const SystemState& rho);
// Atoms at w = e_n - e_m with weight |<e_m|V|e_n>|^2 <e_n|rho|e_n>; eigenspaces
// are measured projectively when H is degenerate.
WorkDistribution tpm_distribution(const SystemObservable& h, const SystemUnitary& v, const SystemState& rho);
// One-point energy statistics of rho under H.
WorkDistribution energy_distribution(const SystemObservable& h, const SystemState& rho);

// Uniform s-grid k * step for k in [-half_count, half_count].
RVector symmetric_s_grid(double step = 1e-3, int half_count = 8);

// chi(s) = Tr[e^{i H_i s} rho_i] / Tr[e^{i H_f s} rho_f]; samples whose
// denominator magnitude falls below 1e-8 are masked, never regularised.
CharacteristicFunction qp_general(const SystemObservable& h_initial, const SystemObservable& h_final,
                                  const SystemState& rho_initial, const SystemState& rho_final, const RVector& s_grid);

// Same ratio for weight energy densities: final over initial, so that its
// cumulants are the changes in the weight's energy cumulants.
CharacteristicFunction qp_weight_densities(const EnergyGrid& grid, const RVector& f_initial, const RVector& f_final,
                                           const RVector& s_grid);

// Constant-xi quasi-distribution: atoms at (a_j + a_l)/2 - b_k with
// A = H, B = V^dagger H V. Throws ImaginaryResidue if grouped weights are not real.
WorkDistribution qp_weight_atoms(const SystemObservable& h, const SystemUnitary& v, const SystemState& xi);

struct Cumulants {
  std::vector<double> values;  // kappa_1 .. kappa_order
  bool unstable = false;       // step-h and step-2h estimates disagree beyond 1e-4 relative
  double max_disagreement = 0.0;
};

Cumulants cumulants(const WorkDistribution& dist, int order);
// Central differences of log chi at step h = grid spacing, Richardson-combined
// with step 2h. Requires a uniform grid containing 0 and +-2 * order steps.
Cumulants cumulants(const CharacteristicFunction& cf, int order);

// Moment list m_1..m_order to cumulants.
std::vector<double> moments_to_cumulants(const std::vector<double>& moments);

std::string to_csv(const WorkDistribution& dist);

}  // namespace ergokit
