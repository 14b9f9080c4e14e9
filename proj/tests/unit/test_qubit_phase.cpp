#include <gtest/gtest.h>

#include <cmath>

#include "ergokit/errors.hpp"
#include "ergokit/protocol.hpp"
#include "ergokit/qubit_phase.hpp"

namespace ergokit {
namespace {

const EnergyGrid kGrid = EnergyGrid::standard();
constexpr double kInvRoot2 = 0.70710678118654752;

SystemState plus_state() { return SystemState::bloch(1.0, 0.0, 0.0); }

// rho proportional to (|0> + 5|1>)(<0| + 5<1|).
SystemState tilted_state() {
  CVector a(2);
  a << 1.0, 5.0;
  return SystemState::pure(a);
}

TEST(PhaseSpace, GaussianIsSemiClassical) {
  for (const SystemState& rho : {plus_state(), tilted_state(), SystemState::bloch(0.2, 0.3, -0.4)}) {
    const QubitPhaseSpace ps = phase_space_from_states(rho, WeightState::pure(gaussian_packet(0.7, 1.0, 0.6, kGrid)));
    EXPECT_NEAR(ps.eta, 0.0, 1e-8);
    EXPECT_NEAR(std::abs(ps.xi), 0.0, 1e-8);
    EXPECT_NEAR(ps.radius, 1.0, 1e-8);
    EXPECT_NEAR(ps.eps0 + ps.eps1, 1.0, 1e-10);
    EXPECT_LE(ps.p, 0.5);
    EXPECT_LE(std::abs(ps.gamma), 1.0 + 1e-10);
  }
}

TEST(PhaseSpace, IncoherentStateUsesEnergyBasis) {
  // Population inversion keeps the smaller eigenvalue on the ground state.
  const SystemState rho(Matrix(RVector{{0.2, 0.8}}.cast<cplx>().asDiagonal()));
  const QubitPhaseSpace ps = phase_space_from_states(rho, WeightState::pure(cat_state(2.0, 1.0, kGrid)));
  EXPECT_NEAR(ps.eps0, 0.0, 1e-12);
  EXPECT_NEAR(ps.eps1, 1.0, 1e-12);
  EXPECT_NEAR(ps.p, 0.2, 1e-12);
  // Band collapses onto the parabola w / (1 - 2p) - w^2.
  for (double w = 0.0; w <= ps.work_max(); w += 0.05) {
    const Band b = boundary(ps, w);
    EXPECT_NEAR(b.lower, w / ps.contrast() - w * w, 1e-10);
    EXPECT_NEAR(b.upper, b.lower, 1e-10);
  }
}

TEST(PhaseSpace, PlusStateForcesEqualEnergies) {
  for (const WeightWavefunction& psi : {cat_state(2.0, 1.0, kGrid), cat_state(1.0, -0.3, kGrid),
                                        uniform_packet(0.5, 3.0, 0.4, kGrid), gaussian_packet(-1.0, 2.0, 0.5, kGrid)}) {
    const QubitPhaseSpace ps = phase_space_from_states(plus_state(), WeightState::pure(psi));
    EXPECT_NEAR(ps.eps0, 0.5, 1e-8);
    EXPECT_NEAR(ps.eps1, 0.5, 1e-8);
    EXPECT_GE(ps.psi0(0).real(), 0.0);
    EXPECT_NEAR(ps.psi0(0).imag(), 0.0, 1e-15);
  }
}

TEST(PhaseSpace, MaximallyMixedControlRejected) {
  EXPECT_THROW(phase_space_from_states(SystemState::maximally_mixed(2), WeightState::pure(cat_state(2.0, 1.0, kGrid))),
               DegenerateSigma);
  EXPECT_THROW(phase_space_from_states(SystemState::maximally_mixed(3), WeightState::pure(cat_state(2.0, 1.0, kGrid))),
               DimensionMismatch);
}

TEST(CatRadius, UnitWhenEitherParameterVanishes) {
  for (double x : {0.0, 0.5, 1.7, 3.0}) {
    EXPECT_DOUBLE_EQ(cat_radius(0.0, x, 0.2), 1.0);
    EXPECT_DOUBLE_EQ(cat_radius(x, 0.0, 0.2), 1.0);
  }
}

TEST(CatRadius, MatchesQuadratureRoute) {
  for (auto [mu, nu] : {std::pair{2.0, 1.0}, std::pair{3.0, 1.0}, std::pair{1.0, 0.7}, std::pair{2.5, -1.3}}) {
    const QubitPhaseSpace ps = phase_space_from_states(plus_state(), WeightState::pure(cat_state(mu, nu, kGrid)));
    EXPECT_NEAR(cat_radius(mu, nu, ps.p), ps.radius, 1e-6) << mu << " " << nu;
    // Reflection-symmetric weight: no linear term.
    EXPECT_NEAR(ps.eta, 0.0, 1e-10);
  }
  // Frozen from the two routes above.
  const QubitPhaseSpace ps = phase_space_from_states(plus_state(), WeightState::pure(cat_state(2.0, 1.0, kGrid)));
  EXPECT_NEAR(ps.radius, 2.824561143348, 1e-8);
  EXPECT_NEAR(ps.p, 0.281209, 1e-6);
}

TEST(Boundary, PinchesAtEndpoints) {
  const QubitPhaseSpace ps = phase_space_from_states(tilted_state(), WeightState::pure(cat_state(2.0, 1.0, kGrid)));
  EXPECT_NEAR(band_halfwidth(ps, ps.work_min()), 0.0, 1e-12);
  EXPECT_NEAR(band_halfwidth(ps, ps.work_max()), 0.0, 1e-12);
  EXPECT_THROW(boundary(ps, ps.work_max() + 0.01), WorkOutOfRange);
  EXPECT_THROW(boundary(ps, ps.work_min() - 0.01), WorkOutOfRange);
}

TEST(Boundary, SemiClassicalMaximumWork) {
  const QubitPhaseSpace ps = make_phase_space(0.2, 0.3, 0.7, 0.0, 0.0, 1.0);
  const double q = ps.contrast();
  const Band b = boundary(ps, ps.work_max());
  EXPECT_NEAR(b.lower, 4.0 * 0.2 * 0.8 * 0.49 + 0.21, 1e-12);
  EXPECT_NEAR(b.upper, b.lower, 1e-12);
  EXPECT_NEAR(ps.work_max(), 0.7 * q, 1e-15);
}

TEST(ZeroVarianceRoots, ClosedForms) {
  const auto mixed = zero_variance_roots(make_phase_space(0.2, 0.3, 0.7, 0.0, 0.0, 1.0));
  ASSERT_EQ(mixed.size(), 1u);
  EXPECT_EQ(mixed[0], 0.0);
  const auto pure = zero_variance_roots(make_phase_space(0.0, 0.3, 0.7, 0.0, 0.0, 1.0));
  ASSERT_EQ(pure.size(), 2u);
  EXPECT_NEAR(pure[0], 0.0, 1e-9);
  EXPECT_NEAR(pure[1], 0.4, 1e-6);
  const auto even = zero_variance_roots(make_phase_space(0.0, 0.5, 0.5, 0.0, 0.0, 1.0));
  ASSERT_EQ(even.size(), 1u);
  EXPECT_NEAR(even[0], 0.0, 1e-7);
}

TEST(PlusStateBoundary, MinimumAtZeroWork) {
  const Band gauss = plus_state_boundary(WeightState::pure(gaussian_packet(0.0, 0.0, kInvRoot2, kGrid)), 0.0);
  EXPECT_NEAR(gauss.lower, 0.0, 1e-10);
  const WeightState cat = WeightState::pure(cat_state(3.0, 1.0, kGrid));
  const QubitPhaseSpace ps = phase_space_from_states(plus_state(), cat);
  const Band b = plus_state_boundary(cat, 0.0);
  EXPECT_NEAR(b.lower, 0.5 * (1.0 - ps.radius), 1e-12);
  EXPECT_LT(b.lower, 0.0);
  // Frozen: R = 4.0577116468 for this pair.
  EXPECT_NEAR(ps.radius, 4.0577116468, 1e-8);
  EXPECT_NEAR(b.lower, -1.5288558234, 1e-8);
  // Agrees with the general boundary at eps0 = eps1 = 1/2.
  const Band general = boundary(ps, 0.1);
  const Band special = plus_state_boundary(cat, 0.1);
  EXPECT_NEAR(general.lower, special.lower, 1e-8);
  EXPECT_NEAR(general.upper, special.upper, 1e-8);
}

TEST(UnitaryForDirection, MapsExcitedProjector) {
  CVector v(2);
  v << cplx(0.6, 0.0), cplx(0.0, 0.8);
  const SystemUnitary u = unitary_for_direction(v);
  const Matrix top = u.matrix().adjoint() * qubit_hamiltonian().matrix() * u.matrix();
  EXPECT_LE(max_abs(top - v * v.adjoint()), 1e-14);
}

TEST(SamplePhaseSpace, PointsStayInsideBand) {
  for (const WeightWavefunction& psi : {gaussian_packet(0.0, 0.0, kInvRoot2, kGrid), cat_state(2.0, 1.0, kGrid)}) {
    const WeightState w = WeightState::pure(psi);
    const QubitPhaseSpace ps = phase_space_from_states(tilted_state(), w);
    const auto points = sample_phase_space(tilted_state(), w, 1500, 7);
    ASSERT_EQ(points.size(), 1503u);
    for (const auto& pt : points) {
      const Band b = boundary(ps, std::clamp(pt.w, ps.work_min(), ps.work_max()));
      EXPECT_GE(pt.dvar, b.lower - 1e-6);
      EXPECT_LE(pt.dvar, b.upper + 1e-6);
    }
    // Identity protocol is the origin.
    EXPECT_NEAR(points[1500].w, 0.0, 1e-12);
    EXPECT_NEAR(points[1500].dvar, 0.0, 1e-10);
    EXPECT_EQ(points[1501].provenance, Provenance::extremal);
    EXPECT_NEAR(std::min(points[1501].w, points[1502].w), ps.work_min(), 1e-8);
    EXPECT_NEAR(std::max(points[1501].w, points[1502].w), ps.work_max(), 1e-8);
  }
}

TEST(SamplePhaseSpace, CatReachesNegativeVariance) {
  const auto points = sample_phase_space(tilted_state(), WeightState::pure(cat_state(2.0, 1.0, kGrid)), 2000, 8);
  double lowest = 0.0;
  for (const auto& pt : points) lowest = std::min(lowest, pt.dvar);
  EXPECT_LT(lowest, -0.01);
  const auto gauss = sample_phase_space(tilted_state(), WeightState::pure(gaussian_packet(0.0, 0.0, kInvRoot2, kGrid)), 2000, 8);
  for (const auto& pt : gauss) EXPECT_GE(pt.dvar, -1e-8);
}

TEST(SamplePhaseSpace, DeterministicForSeed) {
  const WeightState w = WeightState::pure(cat_state(2.0, 1.0, kGrid));
  const auto a = sample_phase_space(plus_state(), w, 64, 3);
  const auto b = sample_phase_space(plus_state(), w, 64, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].w, b[i].w);
    EXPECT_EQ(a[i].dvar, b[i].dvar);
  }
}

TEST(MinimizeVariance, PlusCatReachesRadiusMinimum) {
  const WeightState w = WeightState::pure(cat_state(3.0, 1.0, kGrid));
  const VarianceMinimum vm = minimize_variance(plus_state(), w, 0.0);
  EXPECT_TRUE(vm.converged);
  EXPECT_NEAR(vm.work, 0.0, 1e-8);
  EXPECT_NEAR(vm.dvar, -1.5288558234, 1e-4);
  EXPECT_NEAR(vm.dvar, vm.lower_bound, 1e-4);
}

TEST(MinimizeVariance, GaussianMinimumIsZero) {
  const VarianceMinimum vm =
      minimize_variance(plus_state(), WeightState::pure(gaussian_packet(0.0, 0.0, kInvRoot2, kGrid)), 0.0);
  EXPECT_NEAR(vm.dvar, 0.0, 1e-6);
}

TEST(MinimizeVariance, IncoherentStateHasUniqueValue) {
  const SystemState rho(Matrix(RVector{{0.3, 0.7}}.cast<cplx>().asDiagonal()));
  const WeightState w = WeightState::pure(cat_state(2.0, 1.0, kGrid));
  const VarianceMinimum vm = minimize_variance(rho, w, 0.2);
  const double q = 0.4;
  EXPECT_NEAR(vm.dvar, 0.2 / q - 0.04, 1e-6);
}

TEST(MinimizeVariance, MaximallyMixedScansSphere) {
  const VarianceMinimum vm =
      minimize_variance(SystemState::maximally_mixed(2), WeightState::pure(cat_state(2.0, 1.0, kGrid)), 0.0);
  EXPECT_TRUE(std::isnan(vm.lower_bound));
  EXPECT_NEAR(vm.work, 0.0, 1e-8);
}

TEST(RealizePoint, HitsInteriorTargets) {
  const WeightState w = WeightState::pure(cat_state(2.0, 1.0, kGrid));
  const SystemState rho = tilted_state();
  const QubitPhaseSpace ps = phase_space_from_states(rho, w);
  for (double frac : {0.2, 0.5, 0.8}) {
    const double target_w = ps.work_min() + frac * (ps.work_max() - ps.work_min());
    const Band b = boundary(ps, target_w);
    const double target_dvar = b.lower + 0.3 * (b.upper - b.lower);
    const RealizedPoint pt = realize_point(rho, w, target_w, target_dvar);
    EXPECT_NEAR(pt.w, target_w, 1e-3);
    EXPECT_NEAR(pt.dvar, target_dvar, 1e-3);
  }
}

TEST(IterateReduction, CoherentShrinksIncoherentBroadens) {
  const WeightState w = WeightState::pure(cat_state(3.0, 1.0, kGrid));
  const auto coherent = iterate_reduction(plus_state(), w, 2);
  ASSERT_EQ(coherent.size(), 3u);
  EXPECT_FALSE(coherent[0].unitary.has_value());
  EXPECT_LT(coherent[1].sigma_energy, coherent[0].sigma_energy);
  EXPECT_LT(coherent[2].sigma_energy, coherent[1].sigma_energy);
  const auto mixed = iterate_reduction(SystemState::maximally_mixed(2), w, 2);
  EXPECT_GE(mixed[1].sigma_energy, mixed[0].sigma_energy);
  EXPECT_GE(mixed[2].sigma_energy, mixed[1].sigma_energy);
  EXPECT_TRUE(std::isnan(mixed[1].radius));
  const auto none = iterate_reduction(plus_state(), w, 0);
  ASSERT_EQ(none.size(), 1u);
  EXPECT_LE(max_abs(none[0].weight.density_matrix() - w.density_matrix()), 0.0);
}

TEST(QubitErgotropies, Examples) {
  const QubitErgotropies excited = qubit_ergotropies(0.0, 0.0, -1.0, 1.0);
  EXPECT_DOUBLE_EQ(excited.incoherent, 1.0);
  EXPECT_DOUBLE_EQ(excited.coherent, 0.0);
  EXPECT_DOUBLE_EQ(qubit_ergotropies(1.0, 0.0, 0.0, 1.0).coherent, 0.5);
  const double damp = std::exp(-0.25);
  const QubitErgotropies damped = qubit_ergotropies(1.0, 0.0, 0.0, damp);
  EXPECT_NEAR(damped.coherent_sigma, damp / 2.0, 1e-15);
  const SystemState sigma =
      control_marginal(plus_state(), WeightState::pure(gaussian_packet(0.0, 0.0, kInvRoot2, kGrid)), qubit_hamiltonian());
  EXPECT_NEAR(ergotropy_split(sigma, qubit_hamiltonian()).coherent, damped.coherent_sigma, 1e-8);
  EXPECT_THROW(qubit_ergotropies(1.0, 1.0, 0.0, 1.0), DomainError);
}

TEST(Provenance, Names) {
  EXPECT_EQ(to_string(Provenance::sampled), "sampled");
  EXPECT_EQ(to_string(Provenance::boundary), "boundary");
  EXPECT_EQ(to_string(Provenance::extremal), "extremal");
}

}  // namespace
}  // namespace ergokit
