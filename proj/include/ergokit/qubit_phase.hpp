#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ergokit/hilbert.hpp"
#include "ergokit/weight.hpp"

namespace ergokit {

// diag(0, 1): the qubit Hamiltonian with unit gap.
SystemObservable qubit_hamiltonian();

// Spectral data of the control marginal and the weight integrals that fix
// the reachable (work, variance change) region for a qubit. All values are
// in the frame where the weight's mean energy is zero.
struct QubitPhaseSpace {
  double p = 0.0;     // smaller eigenvalue of sigma_S
  double eps0 = 0.0;  // <psi_0|H|psi_0>
  double eps1 = 0.0;
  double eta = 0.0;
  cplx xi{0.0};
  cplx gamma{1.0};
  double radius = 1.0;  // |1 - 2 (1 - 2p) xi|
  CVector psi0;         // eigenvector for p, <0|psi0> real and >= 0
  CVector psi1;

  double contrast() const { return 1.0 - 2.0 * p; }
  double work_min() const { return -eps0 * contrast(); }
  double work_max() const { return eps1 * contrast(); }
};

// Builds a phase space from its scalar parameters (eigenvectors left empty).
QubitPhaseSpace make_phase_space(double p, double eps0, double eps1, double eta, cplx xi, cplx gamma);

// Throws DegenerateSigma when |1 - 2p| < 1e-8.
QubitPhaseSpace phase_space_from_states(const SystemState& rho, const WeightState& w);

struct Band {
  double lower;
  double upper;
};

double band_centre(const QubitPhaseSpace& ps, double w);     // f(w)
double band_halfwidth(const QubitPhaseSpace& ps, double w);  // h(w)
// (f - h, f + h); throws WorkOutOfRange outside [work_min, work_max].
Band boundary(const QubitPhaseSpace& ps, double w);

// Solutions of f(w) = h(w) on the work interval, ascending and deduplicated.
std::vector<double> zero_variance_roots(const QubitPhaseSpace& ps);

// Radius for the plus state with the (mu, nu) cat weight in closed form.
double cat_radius(double mu, double nu, double p);

// Band for rho_S = |+><+|, where eps0 = eps1 = 1/2.
Band plus_state_boundary(const WeightState& w, double work);

enum class Provenance { sampled, boundary, extremal };
std::string to_string(Provenance p);

struct PhaseSpacePoint {
  double w;
  double dvar;
  Provenance provenance;
};

// V = |0><v_perp| + |1><v|, so that V^dagger H V = |v><v|.
SystemUnitary unitary_for_direction(const CVector& v);

// Haar-random unitaries (item i uses stream_rng(seed, i)) evaluated in closed
// form, followed by the identity and the two work-extremal protocols.
std::vector<PhaseSpacePoint> sample_phase_space(const SystemState& rho, const WeightState& w, std::size_t n_samples,
                                                std::uint64_t seed);

struct VarianceMinimum {
  SystemUnitary v;
  double dvar;
  double work;
  double lower_bound;  // f - h at the target, NaN when the band is unavailable
  bool converged;      // dvar within 1e-3 of lower_bound
};

// Minimises the variance change at fixed work. The work fixes the polar
// angle of V^dagger|1> in sigma_S's eigenbasis; the azimuth is scanned and
// refined. With a maximally mixed sigma_S the whole sphere is scanned.
VarianceMinimum minimize_variance(const SystemState& rho, const WeightState& w, double target_w,
                                  std::uint64_t seed = 0);

struct RealizedPoint {
  SystemUnitary v;
  double w;
  double dvar;
};

// Protocol that reaches (target_w, target_dvar) inside the band: the polar
// angle from the work, then bisection on the azimuth.
RealizedPoint realize_point(const SystemState& rho, const WeightState& w, double target_w, double target_dvar);

struct ReductionStep {
  int step = 0;
  WeightState weight;
  RVector energy_density;
  double sigma_energy = 0.0;
  double predicted_dvar = 0.0;
  double radius = std::numeric_limits<double>::quiet_NaN();  // NaN when sigma_S is maximally mixed
  double truncated_mass = 0.0;
  std::optional<SystemUnitary> unitary;  // absent for step 0
};

struct ReductionOptions {
  std::uint64_t seed = 0;
  // When non-empty, step k applies replay[k-1] instead of minimising.
  std::vector<SystemUnitary> replay;
};

// Step 0 is the input. Each later step picks the variance-minimising V at
// zero work (or the replayed one), evolves, traces out the system and
// re-decomposes the weight.
std::vector<ReductionStep> iterate_reduction(const SystemState& rho, const WeightState& w0, int n_steps,
                                             const ReductionOptions& options = {});

struct QubitErgotropies {
  double total;
  double incoherent;
  double coherent;
  double coherent_sigma;  // coherent part after damping coherences by gamma_abs
};

QubitErgotropies qubit_ergotropies(double x, double y, double z, double gamma_abs);

}  // namespace ergokit
