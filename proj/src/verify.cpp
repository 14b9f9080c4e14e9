#include "ergokit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "ergokit/bounds.hpp"
#include "ergokit/errors.hpp"
#include "ergokit/instances.hpp"
#include "ergokit/parallel.hpp"
#include "ergokit/protocol.hpp"
#include "ergokit/qubit_phase.hpp"
#include "ergokit/workdist.hpp"

namespace ergokit {

namespace {

// Tracks the worst residual of one invariant. NaN always counts as worst.
class Tally {
 public:
  Tally(std::string name, double tolerance) : name_(std::move(name)), tolerance_(tolerance) {}

  void observe(double residual, const std::string& label) {
    ++cases_;
    if (std::isnan(worst_)) return;
    if (std::isnan(residual) || cases_ == 1 || residual > worst_) {
      worst_ = residual;
      label_ = label;
    }
  }

  CheckResult result() const {
    CheckResult r;
    r.name = name_;
    r.residual = worst_;
    r.tolerance = tolerance_;
    r.cases = cases_;
    r.passed = cases_ > 0 && !std::isnan(worst_) && worst_ <= tolerance_;
    r.detail = label_;
    return r;
  }

 private:
  std::string name_;
  double tolerance_;
  double worst_ = 0.0;
  std::size_t cases_ = 0;
  std::string label_;
};

// Per-suite stream offsets keep suites independent of each other.
std::mt19937_64 suite_rng(const VerifyOptions& o, std::uint64_t suite, std::uint64_t index) {
  return stream_rng(o.seed, suite * 1000003ULL + index);
}

SystemUnitary rotation_y(double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  Matrix u(2, 2);
  u << c, -s, s, c;
  return SystemUnitary(u);
}

// Random permutation with random phases: commutes with any diagonal H up to
// relabelling, so the work operator is incoherent.
SystemUnitary random_permutation(int dim, std::mt19937_64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  Matrix u = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) u(perm[static_cast<std::size_t>(i)], i) = std::polar(1.0, phase(rng));
  return SystemUnitary(u);
}

double energy_mean(const EnergyGrid& g, const RVector& f) { return (g.energies().array() * f.array()).sum() * g.spacing(); }

double energy_variance(const EnergyGrid& g, const RVector& f) {
  const double m = energy_mean(g, f);
  return ((g.energies().array() - m).square() * f.array()).sum() * g.spacing();
}

SuiteResult hilbert_suite(const VerifyOptions& o) {
  Tally unitarity("haar_unitarity", 1e-10);
  Tally idempotent("dephase_idempotent", 1e-12);
  Tally traceless("work_operator_traceless", 1e-12);
  Tally split("ergotropy_split_nonnegative", 1e-10);
  for (std::uint64_t i = 0; i < 60; ++i) {
    auto rng = suite_rng(o, 1, i);
    const int dim = 2 + static_cast<int>(i % 3);
    const RVector levels = RVector::LinSpaced(dim, 0.0, dim - 1.0);
    const auto h = SystemObservable::diagonal(levels);
    const SystemUnitary u = haar_unitary(dim, rng);
    const SystemState rho = random_state(dim, rng);
    const std::string label = fmt::format("case {} (d={})", i, dim);
    unitarity.observe(max_abs(u.matrix().adjoint() * u.matrix() - Matrix::Identity(dim, dim)), label);
    const Matrix once = dephase_matrix(rho.matrix(), h);
    idempotent.observe(max_abs(dephase_matrix(once, h) - once), label);
    traceless.observe(std::abs(work_operator(h, u).matrix().trace()), label);
    const ErgotropySplit s = ergotropy_split(rho, h);
    split.observe(std::max({0.0, -s.incoherent, -s.coherent}), label);
  }
  return {"hilbert", {unitarity.result(), idempotent.result(), traceless.result(), split.result()}};
}

SuiteResult weight_suite(const VerifyOptions& o) {
  const EnergyGrid grid = EnergyGrid::standard();
  Tally norm("energy_norm", 1e-10);
  Tally round_trip("fourier_round_trip", 1e-10);
  Tally marginals("wigner_marginals", 1e-10);
  Tally gaussian_gamma("gaussian_dephasing_modulus", 1e-8);
  Tally hur("heisenberg_uncertainty", 0.0);
  for (std::uint64_t i = 0; i < 9; ++i) {
    auto rng = suite_rng(o, 2, i);
    const auto family = static_cast<WeightFamily>(i % 3);
    const WeightState w = random_weight(rng, grid, family);
    const std::string label = fmt::format("case {} ({})", i, to_string(family));
    const RVector f = energy_distribution(w);
    const RVector g = time_distribution(w);
    norm.observe(std::abs(f.sum() * grid.spacing() - 1.0), label);
    const CVector& psi = w.branches().front().amplitudes;
    round_trip.observe((to_energy_domain(grid, to_time_domain(grid, psi)) - psi).cwiseAbs().maxCoeff(), label);
    const WignerFunction wf = wigner(w);
    double e_err = (wf.energy_marginal() - f).cwiseAbs().maxCoeff();
    for (int k = 0; k < grid.size(); ++k) {
      e_err = std::max(e_err, std::abs(wf.values.row(2 * k + 1).sum() * grid.time_spacing()));
    }
    marginals.observe(std::max(e_err, (wf.time_marginal() - g).cwiseAbs().maxCoeff()), label);
    const DispersionStats st = dispersion_from_distributions(grid, f, g);
    hur.observe(0.5 - st.sigma_time * st.sigma_energy - 3.0 * grid.spacing() * st.sigma_time, label);
  }
  // sigma = 2 needs a wider window than the standard grid to keep its tails
  // out of the guard band.
  const EnergyGrid wide(2048, grid.spacing(), -32.0);
  for (double sigma : {0.25, 0.5, 1.0, 2.0}) {
    const WeightState w = WeightState::pure(gaussian_packet(0.0, 0.7, sigma, wide));
    for (double omega : {0.5, 1.0, 2.0, 3.0}) {
      const double expected = std::exp(-omega * omega / (8.0 * sigma * sigma));
      gaussian_gamma.observe(std::abs(std::abs(dephasing_factor(w, omega)) - expected),
                             fmt::format("sigma={} omega={}", sigma, omega));
    }
  }
  return {"weight", {norm.result(), round_trip.result(), marginals.result(), gaussian_gamma.result(), hur.result()}};
}

SuiteResult workdist_suite(const VerifyOptions& o) {
  const EnergyGrid grid = EnergyGrid::standard();
  Tally dephased("prop1_dephased_qp_equals_tpm", 1e-8);
  Tally incoherent("prop1_incoherent_work_all_equal", 1e-8);
  Tally cum_system("cumulant_difference_system", 1e-6);
  Tally cum_weight("cumulant_difference_weight", 1e-6);
  Tally first("qp_first_cumulant_equals_work_mean", 1e-6);
  Tally witness("tpm_mean_differs_from_work_mean", 0.0);
  const RVector s_grid = symmetric_s_grid();
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto rng = suite_rng(o, 3, i);
    const int dim = 2 + static_cast<int>(i % 2);
    const SystemObservable h = level_hamiltonian(dim);
    const SystemState rho = random_state(dim, rng);
    const SystemUnitary v = haar_unitary(dim, rng);
    const std::string label = fmt::format("case {} (d={})", i, dim);

    const SystemState rho_d = dephase(rho, h);
    dephased.observe(total_variation(qp_weight_atoms(h, v, rho_d), tpm_distribution(h, v, rho_d)), label);

    const SystemUnitary perm = random_permutation(dim, rng);
    const WeightState gauss = random_weight(rng, grid, WeightFamily::gaussian);
    const SystemState sigma = control_marginal(rho, gauss, h);
    const WorkDistribution qp = qp_weight_atoms(h, perm, sigma);
    const WorkDistribution tpm = tpm_distribution(h, perm, rho);
    const WorkDistribution pw = work_operator_distribution(work_operator(h, perm), rho);
    incoherent.observe(std::max(total_variation(qp, tpm), total_variation(qp, pw)), label);

    const SystemState rho_f = conjugate(v, rho);
    const Cumulants c_qp = cumulants(qp_general(h, h, rho, rho_f, s_grid), 2);
    const Cumulants c_i = cumulants(energy_distribution(h, rho), 2);
    const Cumulants c_f = cumulants(energy_distribution(h, rho_f), 2);
    double err = 0.0;
    for (int k = 0; k < 2; ++k) err = std::max(err, std::abs(c_qp.values[k] - (c_i.values[k] - c_f.values[k])));
    cum_system.observe(err, label);
    first.observe(std::abs(c_qp.values[0] - expectation(work_operator(h, v), rho)), label);

    const auto family = static_cast<WeightFamily>(i % 3);
    const WeightState w = random_weight(rng, grid, family);
    PreparedProtocol::Options fast;
    fast.with_wigner = false;
    const PreparedProtocol prepared(rho, w, h, fast);
    const auto closed = prepared.closed_form(v);
    const RVector f_i = energy_distribution(w);
    const RVector f_f = weight_energy_distribution(evolve(rho, w, h, v));
    const Cumulants c_w = cumulants(qp_weight_densities(grid, f_i, f_f, s_grid), 2);
    cum_weight.observe(std::max(std::abs(c_w.values[0] - closed.delta_energy), std::abs(c_w.values[1] - closed.delta_variance)),
                       label + " " + to_string(family));
  }
  // |+> with a pi/2 rotation about y: TPM sees the dephased state only.
  const SystemObservable h = level_hamiltonian(2);
  const SystemState plus = SystemState::bloch(1.0, 0.0, 0.0);
  const SystemUnitary ry = rotation_y(kPi / 2.0);
  const double tpm_mean = tpm_distribution(h, ry, plus).moment(1);
  const double w_mean = expectation(work_operator(h, ry), plus);
  witness.observe(1e-3 - std::abs(tpm_mean - w_mean), "plus state, Ry(pi/2)");
  return {"workdist",
          {dephased.result(), incoherent.result(), cum_system.result(), cum_weight.result(), first.result(), witness.result()}};
}

SuiteResult protocol_suite(const VerifyOptions& o) {
  const EnergyGrid grid = EnergyGrid::standard();
  Tally energy("theorem1_delta_energy_vs_oracle", 1e-6);
  Tally variance("theorem1_delta_variance_vs_oracle", 1e-6);
  Tally f_forms("theorem1_f_forms_agree", 1e-6);
  Tally conservation("total_energy_conserved", 1e-10);
  Tally semi("semi_classical_variance_nonnegative", 1e-8);
  Tally independence("incoherent_weight_independence", 1e-8);
  Tally work_bound("work_below_control_ergotropy", 1e-8);
  PreparedProtocol::Options options;
  options.corrupt_dephasing_phase = o.corrupt_gamma;
  constexpr std::size_t kInstances = 24;
  std::vector<ProtocolReport> reports(kInstances);
  std::vector<double> energy_drift(kInstances);
  std::vector<std::string> labels(kInstances);
  parallel_for(kInstances, [&](std::size_t i) {
    const RandomInstance inst = indexed_instance(o.seed, i, grid);
    labels[i] = inst.label;
    reports[i] = PreparedProtocol(inst.rho, inst.w, inst.h, options).report(inst.v);
    const CompositeState before = CompositeState::product(inst.rho, inst.w);
    const CompositeState after = evolve(before, inst.h, inst.v);
    energy_drift[i] = std::abs(total_energy(after, inst.h) - total_energy(before, inst.h));
  });
  for (std::size_t i = 0; i < kInstances; ++i) {
    const auto& r = reports[i];
    energy.observe(r.work_mean_check, labels[i]);
    variance.observe(r.variance_check, labels[i]);
    f_forms.observe(std::max({std::abs(r.f_covariance - r.f_xi), std::abs(r.f_covariance - r.f_wigner),
                              std::abs(r.f_xi - r.f_wigner)}),
                    labels[i]);
    conservation.observe(energy_drift[i], labels[i]);
    work_bound.observe(r.delta_energy - r.ergotropy_sigma, labels[i]);
  }
  PreparedProtocol::Options fast;
  fast.with_wigner = false;
  for (std::uint64_t i = 0; i < 6; ++i) {
    auto rng = suite_rng(o, 4, i);
    const int dim = 2 + static_cast<int>(i % 2);
    const SystemObservable h = level_hamiltonian(dim);
    const SystemState rho = random_state(dim, rng);
    const auto family = i % 2 == 0 ? WeightFamily::gaussian : WeightFamily::uniform;
    const PreparedProtocol prepared(rho, random_weight(rng, grid, family), h, fast);
    for (int k = 0; k < 200; ++k) {
      semi.observe(-prepared.closed_form(haar_unitary(dim, rng)).delta_variance, fmt::format("case {} {}", i, to_string(family)));
    }
    const SystemState rho_d = dephase(rho, h);
    const PreparedProtocol a(rho_d, random_weight(rng, grid, WeightFamily::cat), h, fast);
    const PreparedProtocol b(rho_d, random_weight(rng, grid, WeightFamily::uniform), h, fast);
    const SystemUnitary v = haar_unitary(dim, rng);
    const auto ca = a.closed_form(v);
    const auto cb = b.closed_form(v);
    independence.observe(std::max(std::abs(ca.delta_energy - cb.delta_energy), std::abs(ca.delta_variance - cb.delta_variance)),
                         fmt::format("case {}", i));
  }
  return {"protocol",
          {energy.result(), variance.result(), f_forms.result(), conservation.result(), semi.result(),
           independence.result(), work_bound.result()}};
}

SuiteResult bounds_suite(const VerifyOptions& o) {
  const EnergyGrid grid = EnergyGrid::standard();
  Tally hur("heisenberg_uncertainty", 0.0);
  Tally chur("characteristic_uncertainty", 1e-8);
  Tally lemma("lemma1_all_frequencies", 0.0);
  Tally theorem("theorem2_below_dispersions", 0.0);
  Tally invariance("dephasing_invariant_under_protocol", 1e-8);
  Tally monotone("coherent_bound_increasing", 0.0);
  const double nyquist = nyquist_frequency(grid);
  constexpr std::size_t kInstances = 18;
  for (std::size_t i = 0; i < kInstances; ++i) {
    const RandomInstance inst = indexed_instance(o.seed + 7, i, grid);
    const RVector f = energy_distribution(inst.w);
    const RVector g = time_distribution(inst.w);
    const DispersionStats st = dispersion_from_distributions(grid, f, g);
    const double slack = grid_slack(inst.w);
    hur.observe(0.5 - st.sigma_time * st.sigma_energy - slack, inst.label);
    for (int k = 1; k <= 64; ++k) {
      const BoundReport r = lemma1_bound(inst.w, nyquist * k / 64.0);
      lemma.observe(-(r.slack + r.grid_slack), inst.label);
    }
    const CompositeState after = evolve(inst.rho, inst.w, inst.h, inst.v);
    const RVector f_final = weight_energy_distribution(after);
    const double sigma_final = std::sqrt(energy_variance(grid, f_final));
    const BoundReport t2 = theorem2_bound(inst.w);
    theorem.observe(t2.bound - std::min(st.sigma_energy, sigma_final) - slack, inst.label);
    invariance.observe((weight_time_distribution(after) - g).cwiseAbs().maxCoeff(), inst.label);
  }
  std::vector<WeightState> states;
  for (std::uint64_t i = 0; i < 12; ++i) {
    auto rng = suite_rng(o, 5, i);
    states.push_back(random_weight(rng, grid, static_cast<WeightFamily>(i % 3)));
  }
  std::vector<RVector> f_list;
  std::vector<RVector> g_list;
  for (const auto& w : states) {
    f_list.push_back(energy_distribution(w));
    g_list.push_back(time_distribution(w));
  }
  auto rng = suite_rng(o, 5, 999);
  std::uniform_int_distribution<std::size_t> pick(0, states.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t s = pick(rng);
    // x in (0, pi]; omega_E kept below a quarter of the energy-lattice period.
    const double x = kPi * (1.0 - unit(rng));
    const double log_lo = std::log(x / 50.0);
    const double log_hi = std::log(nyquist / 2.0);
    const double omega_t = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
    const double omega_e = x / omega_t;
    const double lhs = std::norm(time_characteristic(grid, g_list[s], omega_t)) +
                       std::norm(energy_characteristic(grid, f_list[s], omega_e));
    chur.observe(lhs - chur_beta(x), fmt::format("state {} x={:.4f} omega_t={:.4f}", s, x, omega_t));
  }
  const double limit = coherent_ergotropy_limit(0.0, 1.0);
  double prev = 0.0;
  int non_increasing = 0;
  for (int k = 1; k <= 100; ++k) {
    const double b = qubit_coherent_bound(limit * k / 101.0, 0.0, 1.0);
    if (k > 1 && !(b > prev)) ++non_increasing;
    prev = b;
  }
  monotone.observe(non_increasing, "100 points on (0, R_C max)");
  return {"bounds", {hur.result(), chur.result(), lemma.result(), theorem.result(), invariance.result(), monotone.result()}};
}

SuiteResult qubit_suite(const VerifyOptions& o) {
  const EnergyGrid grid = EnergyGrid::standard();
  Tally containment("band_contains_samples", 1e-6);
  Tally collapse("semi_classical_collapse", 1e-8);
  Tally forcing("plus_state_forcing", 1e-8);
  Tally radius("cat_radius_matches_quadrature", 1e-6);
  Tally minimum("variance_minimum_plus_cat31", 1e-4);
  Tally ergo("qubit_ergotropies_vs_control_marginal", 1e-8);
  const SystemState plus = SystemState::bloch(1.0, 0.0, 0.0);
  const std::vector<std::pair<std::string, SystemState>> systems{
      {"pure", SystemState::pure(CVector{{cplx(1.0), cplx(5.0)}}.normalized())},
      {"mixed", SystemState::bloch(0.5, 0.3, -0.4)},
      {"incoherent", SystemState::bloch(0.0, 0.0, 0.6)}};
  for (std::uint64_t i = 0; i < 3; ++i) {
    auto rng = suite_rng(o, 6, i);
    const auto family = static_cast<WeightFamily>(i);
    const WeightState w = random_weight(rng, grid, family);
    for (const auto& [name, rho] : systems) {
      const QubitPhaseSpace ps = phase_space_from_states(rho, w);
      for (const auto& pt : sample_phase_space(rho, w, 500, o.seed + i)) {
        const Band band = boundary(ps, std::clamp(pt.w, ps.work_min(), ps.work_max()));
        containment.observe(std::max(band.lower - pt.dvar, pt.dvar - band.upper), name + " " + to_string(family));
      }
    }
    const QubitPhaseSpace pp = phase_space_from_states(plus, w);
    forcing.observe(std::max(std::abs(pp.eps0 - 0.5), std::abs(pp.eps1 - 0.5)), to_string(family));
    if (family == WeightFamily::gaussian) {
      const QubitPhaseSpace ps = phase_space_from_states(systems[0].second, w);
      collapse.observe(std::max({std::abs(ps.radius - 1.0), std::abs(ps.eta), std::abs(ps.xi)}), "gaussian");
    }
  }
  for (auto [mu, nu] : {std::pair{2.0, 1.0}, std::pair{3.0, 1.0}, std::pair{1.0, 2.0}}) {
    const WeightState cat = WeightState::pure(cat_state(mu, nu, grid));
    const QubitPhaseSpace ps = phase_space_from_states(plus, cat);
    radius.observe(std::abs(ps.radius - cat_radius(mu, nu, ps.p)), fmt::format("cat({}, {})", mu, nu));
  }
  {
    const WeightState cat = WeightState::pure(cat_state(3.0, 1.0, grid));
    const QubitPhaseSpace ps = phase_space_from_states(plus, cat);
    const VarianceMinimum m = minimize_variance(plus, cat, 0.0, o.seed);
    minimum.observe(std::abs(m.dvar - 0.5 * (1.0 - cat_radius(3.0, 1.0, ps.p))), "plus, cat(3, 1)");
  }
  const WeightState g = WeightState::pure(gaussian_packet(0.0, 0.0, std::sqrt(0.5), grid));
  const double damping = std::abs(dephasing_factor(g, 1.0));
  for (auto [x, y, z] : {std::tuple{1.0, 0.0, 0.0}, std::tuple{0.3, -0.5, 0.2}, std::tuple{0.0, 0.6, -0.7}}) {
    const QubitErgotropies q = qubit_ergotropies(x, y, z, damping);
    const SystemState rho = SystemState::bloch(x, y, z);
    const ErgotropySplit s = ergotropy_split(control_marginal(rho, g, qubit_hamiltonian()), qubit_hamiltonian());
    ergo.observe(std::abs(q.coherent_sigma - s.coherent), fmt::format("bloch ({}, {}, {})", x, y, z));
  }
  return {"qubit", {containment.result(), collapse.result(), forcing.result(), radius.result(), minimum.result(), ergo.result()}};
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"hilbert", "weight", "workdist", "protocol", "bounds", "qubit"};
  return names;
}

std::vector<SuiteResult> run_verification(const VerifyOptions& options) {
  static const std::map<std::string, std::function<SuiteResult(const VerifyOptions&)>> table{
      {"hilbert", hilbert_suite}, {"weight", weight_suite}, {"workdist", workdist_suite},
      {"protocol", protocol_suite}, {"bounds", bounds_suite}, {"qubit", qubit_suite}};
  std::vector<SuiteResult> out;
  if (options.suite != "all" && !table.contains(options.suite)) {
    throw ConfigError("unknown suite '" + options.suite + "'");
  }
  for (const auto& name : suite_names()) {
    if (options.suite == "all" || options.suite == name) out.push_back(table.at(name)(options));
  }
  return out;
}

bool all_passed(const std::vector<SuiteResult>& suites) {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

Json verification_report(const std::vector<SuiteResult>& suites, const VerifyOptions& options) {
  Json out{{"passed", all_passed(suites)}, {"seed", options.seed}, {"suite", options.suite}};
  if (options.corrupt_gamma) out["corrupt_gamma"] = true;
  Json list = Json::array();
  for (const auto& s : suites) {
    Json checks = Json::array();
    for (const auto& c : s.checks) {
      // JSON has no NaN; a missing residual reads as null.
      Json residual = std::isfinite(c.residual) ? Json(c.residual) : Json(nullptr);
      checks.push_back({{"name", c.name},
                        {"residual", residual},
                        {"tolerance", c.tolerance},
                        {"cases", c.cases},
                        {"passed", c.passed},
                        {"detail", c.detail}});
    }
    list.push_back({{"name", s.name}, {"passed", s.passed()}, {"checks", std::move(checks)}});
  }
  out["suites"] = std::move(list);
  return out;
}

}  // namespace ergokit
