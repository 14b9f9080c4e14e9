#include "ergokit/qubit_phase.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/Polynomials>

#include "ergokit/errors.hpp"
#include "ergokit/parallel.hpp"
#include "ergokit/protocol.hpp"

namespace ergokit {

namespace {

constexpr double kDegenerateContrast = 1e-8;

struct SigmaBasis {
  double p;
  CVector psi0;
  CVector psi1;
  double mean_h;  // <H>_sigma
};

// Eigenvectors phased so that <0|psi> is real and non-negative (or <1|psi>
// when the first component vanishes).
CVector phased(CVector v) {
  const cplx lead = std::abs(v(0)) > 1e-12 ? v(0) : v(1);
  return v * (std::abs(lead) / lead);
}

SigmaBasis sigma_basis(const SystemState& sigma) {
  const Eigensystem es = eigensystem(sigma);
  return {es.values(0), phased(es.vectors.col(0)), phased(es.vectors.col(1)), sigma.matrix()(1, 1).real()};
}

CVector direction(const SigmaBasis& b, double theta, double phi) {
  return std::cos(0.5 * theta) * b.psi0 + std::polar(std::sin(0.5 * theta), phi) * b.psi1;
}

// Polar angle of V^dagger|1> fixed by <v|sigma|v> = <H>_sigma - w.
double polar_for_work(const SigmaBasis& b, double w) {
  const double contrast = 1.0 - 2.0 * b.p;
  const double s2 = (b.mean_h - w - b.p) / contrast;
  if (s2 < -1e-10 || s2 > 1.0 + 1e-10) {
    throw WorkOutOfRange("work " + std::to_string(w) + " outside [" + std::to_string(b.mean_h - (1.0 - b.p)) + ", " +
                         std::to_string(b.mean_h - b.p) + "]");
  }
  return 2.0 * std::asin(std::sqrt(std::clamp(s2, 0.0, 1.0)));
}

template <class F>
double golden_minimum(F&& f, double lo, double hi, double& arg) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - ratio * (hi - lo);
  double b = lo + ratio * (hi - lo);
  double fa = f(a);
  double fb = f(b);
  for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - ratio * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + ratio * (hi - lo);
      fb = f(b);
    }
  }
  arg = 0.5 * (lo + hi);
  return f(arg);
}

PreparedProtocol::Options fast_options() {
  PreparedProtocol::Options o;
  o.with_wigner = false;
  return o;
}

}  // namespace

SystemObservable qubit_hamiltonian() { return SystemObservable::diagonal(RVector::LinSpaced(2, 0.0, 1.0)); }

QubitPhaseSpace make_phase_space(double p, double eps0, double eps1, double eta, cplx xi, cplx gamma) {
  QubitPhaseSpace ps;
  ps.p = p;
  ps.eps0 = eps0;
  ps.eps1 = eps1;
  ps.eta = eta;
  ps.xi = xi;
  ps.gamma = gamma;
  ps.radius = std::abs(1.0 - 2.0 * (1.0 - 2.0 * p) * xi);
  return ps;
}

QubitPhaseSpace phase_space_from_states(const SystemState& rho, const WeightState& w) {
  if (rho.dim() != 2) throw DimensionMismatch("phase space: qubit systems only");
  const SystemObservable h = qubit_hamiltonian();
  const double mean = energy_distribution(w).dot(w.grid().energies()) * w.grid().spacing();
  const WeightState centred = w.recentred(mean);
  const SystemState sigma = control_marginal(rho, centred, h);
  const SigmaBasis basis = sigma_basis(sigma);
  if (std::abs(1.0 - 2.0 * basis.p) < kDegenerateContrast) {
    throw DegenerateSigma("control marginal is maximally mixed; the band parametrisation is singular");
  }

  // gamma = <<e^{it}>>, a = <<E e^{it}>> over the Wigner grid (mean energy 0 here).
  const WignerFunction wf = wigner(centred);
  const EnergyGrid& g = centred.grid();
  cplx gamma(0.0);
  cplx a(0.0);
  for (int j = 0; j < g.size(); ++j) {
    const cplx phase = std::polar(1.0, g.time(j));
    const double col = wf.values.col(j).sum();
    const double col_e = wf.values.col(j).dot(wf.energies);
    gamma += phase * col;
    a += phase * col_e;
  }
  const double cell = g.spacing() * g.time_spacing();
  gamma *= cell;
  a *= cell;

  const double eps0 = std::norm(basis.psi0(1));
  const double eps1 = std::norm(basis.psi1(1));
  const cplx ratio = a / gamma;
  const double eta = 2.0 * ratio.real();
  const cplx xi = eps1 * ratio - eps0 * std::conj(ratio);
  QubitPhaseSpace ps = make_phase_space(basis.p, eps0, eps1, eta, xi, gamma);
  ps.psi0 = basis.psi0;
  ps.psi1 = basis.psi1;
  return ps;
}

double band_centre(const QubitPhaseSpace& ps, double w) {
  const double q = ps.contrast();
  const double e0 = ps.eps0;
  const double e1 = ps.eps1;
  return -w * w + ((e1 - e0) / q + 4.0 * e0 * e1 * ps.eta) * w + 2.0 * e0 * e1 * (1.0 - q * (e1 - e0) * ps.eta);
}

double band_halfwidth(const QubitPhaseSpace& ps, double w) {
  const double q = ps.contrast();
  const double radicand = ps.eps0 * ps.eps1 * (ps.eps0 + w / q) * (ps.eps1 - w / q);
  return 2.0 * ps.radius * std::sqrt(std::max(0.0, radicand));
}

Band boundary(const QubitPhaseSpace& ps, double w) {
  if (std::abs(ps.contrast()) < kDegenerateContrast) throw DegenerateSigma("boundary: 1 - 2p vanishes");
  const double tol = 1e-12;
  if (w < ps.work_min() - tol || w > ps.work_max() + tol) {
    throw WorkOutOfRange("work " + std::to_string(w) + " outside [" + std::to_string(ps.work_min()) + ", " +
                         std::to_string(ps.work_max()) + "]");
  }
  const double f = band_centre(ps, w);
  const double h = band_halfwidth(ps, w);
  return {f - h, f + h};
}

std::vector<double> zero_variance_roots(const QubitPhaseSpace& ps) {
  const double q = ps.contrast();
  const double e0 = ps.eps0;
  const double e1 = ps.eps1;
  const double b = (e1 - e0) / q + 4.0 * e0 * e1 * ps.eta;
  const double c = 2.0 * e0 * e1 * (1.0 - q * (e1 - e0) * ps.eta);
  const double k = 4.0 * ps.radius * ps.radius * e0 * e1;
  // f^2 - h^2 as a quartic in w, ascending coefficients.
  Eigen::Matrix<double, 5, 1> poly;
  poly << c * c - k * e0 * e1, 2.0 * b * c - k * (e1 - e0) / q, b * b - 2.0 * c + k / (q * q), -2.0 * b, 1.0;
  Eigen::PolynomialSolver<double, 4> solver;
  solver.compute(poly);
  std::vector<double> roots;
  for (const auto& r : solver.roots()) {
    if (std::abs(r.imag()) > 1e-5) continue;
    const double w = r.real();
    if (w < ps.work_min() - 1e-7 || w > ps.work_max() + 1e-7) continue;
    const double wc = std::clamp(w, ps.work_min(), ps.work_max());
    if (std::abs(band_centre(ps, wc) - band_halfwidth(ps, wc)) > 1e-6) continue;
    roots.push_back(wc);
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || r - unique.back() > 1e-6) {
      unique.push_back(r);
    } else {
      unique.back() = 0.5 * (unique.back() + r);
    }
  }
  for (double& r : unique) {
    if (std::abs(r) < 1e-7) r = 0.0;
  }
  return unique;
}

double cat_radius(double mu, double nu, double p) {
  // Numerator and denominator divided by kappa = e^{nu^2 + mu^2 + mu} to stay finite.
  const double log_kappa = nu * nu + mu * mu + mu;
  const double a = std::exp(-log_kappa);
  const double b = std::exp(2.0 * mu - log_kappa);
  const double num = nu * (a - b) - 2.0 * mu * std::sin(nu);
  const double den = a + b + 2.0 * std::cos(nu);
  const double q = 1.0 - 2.0 * p;
  return std::sqrt(1.0 + 4.0 * q * q * num * num / (den * den));
}

Band plus_state_boundary(const WeightState& w, double work) {
  const QubitPhaseSpace ps = phase_space_from_states(SystemState::bloch(1.0, 0.0, 0.0), w);
  const double q = ps.contrast();
  const double limit = 0.5 * q;
  if (std::abs(work) > limit + 1e-12) throw WorkOutOfRange("plus-state work outside [-(1-2p)/2, (1-2p)/2]");
  const double f = -work * work + ps.eta * work + 0.5;
  const double h = ps.radius * std::sqrt(std::max(0.0, 0.25 - work * work / (q * q)));
  return {f - h, f + h};
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::sampled:
      return "sampled";
    case Provenance::boundary:
      return "boundary";
    case Provenance::extremal:
      return "extremal";
  }
  return "sampled";
}

SystemUnitary unitary_for_direction(const CVector& v) {
  const CVector u = v / v.norm();
  Matrix m(2, 2);
  // Row 0 is v_perp^dagger, row 1 is v^dagger.
  m(0, 0) = -u(1);
  m(0, 1) = u(0);
  m(1, 0) = std::conj(u(0));
  m(1, 1) = std::conj(u(1));
  return SystemUnitary(m);
}

std::vector<PhaseSpacePoint> sample_phase_space(const SystemState& rho, const WeightState& w, std::size_t n_samples,
                                                std::uint64_t seed) {
  if (rho.dim() != 2) throw DimensionMismatch("sample_phase_space: qubit systems only");
  const PreparedProtocol prep(rho, w, qubit_hamiltonian(), fast_options());
  std::vector<PhaseSpacePoint> points(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    auto rng = stream_rng(seed, i);
    const auto cf = prep.closed_form(haar_unitary(2, rng));
    points[i] = {cf.delta_energy, cf.delta_variance, Provenance::sampled};
  });
  const auto identity = prep.closed_form(SystemUnitary::identity(2));
  points.push_back({identity.delta_energy, identity.delta_variance, Provenance::sampled});
  const SigmaBasis basis = sigma_basis(prep.control_state());
  for (const CVector& v : {basis.psi0, basis.psi1}) {
    const auto cf = prep.closed_form(unitary_for_direction(v));
    points.push_back({cf.delta_energy, cf.delta_variance, Provenance::extremal});
  }
  return points;
}

VarianceMinimum minimize_variance(const SystemState& rho, const WeightState& w, double target_w, std::uint64_t seed) {
  if (rho.dim() != 2) throw DimensionMismatch("minimize_variance: qubit systems only");
  const PreparedProtocol prep(rho, w, qubit_hamiltonian(), fast_options());
  const SigmaBasis basis = sigma_basis(prep.control_state());
  auto rng = stream_rng(seed, 0);
  const double offset = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(rng);
  auto dvar_at = [&](double theta, double phi) {
    return prep.closed_form(unitary_for_direction(direction(basis, theta, phi))).delta_variance;
  };

  double best_theta = 0.0;
  double best_phi = offset;
  double best = 0.0;
  const bool degenerate = std::abs(1.0 - 2.0 * basis.p) < kDegenerateContrast;
  if (!degenerate) {
    best_theta = polar_for_work(basis, target_w);
    constexpr int kAzimuths = 720;
    const double step = 2.0 * kPi / kAzimuths;
    best = dvar_at(best_theta, offset);
    for (int k = 1; k < kAzimuths; ++k) {
      const double phi = offset + k * step;
      const double v = dvar_at(best_theta, phi);
      if (v < best) {
        best = v;
        best_phi = phi;
      }
    }
    best = golden_minimum([&](double phi) { return dvar_at(best_theta, phi); }, best_phi - step, best_phi + step,
                          best_phi);
  } else {
    if (std::abs(target_w - (basis.mean_h - 0.5)) > 1e-8) {
      throw WorkOutOfRange("maximally mixed control marginal admits only work " + std::to_string(basis.mean_h - 0.5));
    }
    constexpr int kPolar = 48;
    constexpr int kAzimuths = 96;
    best = dvar_at(0.0, offset);
    for (int i = 0; i <= kPolar; ++i) {
      const double theta = kPi * i / kPolar;
      for (int k = 0; k < kAzimuths; ++k) {
        const double phi = offset + 2.0 * kPi * k / kAzimuths;
        const double v = dvar_at(theta, phi);
        if (v < best) {
          best = v;
          best_theta = theta;
          best_phi = phi;
        }
      }
    }
    for (int sweep = 0; sweep < 20; ++sweep) {
      const double dt = kPi / kPolar;
      const double dp = 2.0 * kPi / kAzimuths;
      golden_minimum([&](double th) { return dvar_at(th, best_phi); }, std::max(0.0, best_theta - dt),
                     std::min(kPi, best_theta + dt), best_theta);
      best = golden_minimum([&](double ph) { return dvar_at(best_theta, ph); }, best_phi - dp, best_phi + dp, best_phi);
    }
  }
  const SystemUnitary v = unitary_for_direction(direction(basis, best_theta, best_phi));
  const auto cf = prep.closed_form(v);
  double lower = std::numeric_limits<double>::quiet_NaN();
  bool converged = true;
  if (!degenerate) {
    const QubitPhaseSpace ps = phase_space_from_states(rho, w);
    lower = boundary(ps, std::clamp(target_w, ps.work_min(), ps.work_max())).lower;
    converged = cf.delta_variance - lower <= 1e-3;
  }
  return {v, cf.delta_variance, cf.delta_energy, lower, converged};
}

RealizedPoint realize_point(const SystemState& rho, const WeightState& w, double target_w, double target_dvar) {
  const PreparedProtocol prep(rho, w, qubit_hamiltonian(), fast_options());
  const SigmaBasis basis = sigma_basis(prep.control_state());
  if (std::abs(1.0 - 2.0 * basis.p) < kDegenerateContrast) throw DegenerateSigma("realize_point: 1 - 2p vanishes");
  const double theta = polar_for_work(basis, target_w);
  auto dvar_at = [&](double phi) {
    return prep.closed_form(unitary_for_direction(direction(basis, theta, phi))).delta_variance;
  };
  constexpr int kAzimuths = 720;
  const double step = 2.0 * kPi / kAzimuths;
  double phi_min = 0.0;
  double phi_max = 0.0;
  double lo_val = dvar_at(0.0);
  double hi_val = lo_val;
  for (int k = 1; k < kAzimuths; ++k) {
    const double v = dvar_at(k * step);
    if (v < lo_val) {
      lo_val = v;
      phi_min = k * step;
    }
    if (v > hi_val) {
      hi_val = v;
      phi_max = k * step;
    }
  }
  lo_val = golden_minimum(dvar_at, phi_min - step, phi_min + step, phi_min);
  hi_val = -golden_minimum([&](double phi) { return -dvar_at(phi); }, phi_max - step, phi_max + step, phi_max);
  if (target_dvar < lo_val - 1e-9 || target_dvar > hi_val + 1e-9) {
    throw DomainError("realize_point: variance change outside the reachable interval at this work");
  }
  // dvar is monotone along the arc from phi_min to phi_max.
  if (phi_max < phi_min) phi_max += 2.0 * kPi;
  double a = phi_min;
  double b = phi_max;
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    const double mid = 0.5 * (a + b);
    (dvar_at(mid) < target_dvar ? a : b) = mid;
  }
  const SystemUnitary v = unitary_for_direction(direction(basis, theta, 0.5 * (a + b)));
  const auto cf = prep.closed_form(v);
  return {v, cf.delta_energy, cf.delta_variance};
}

std::vector<ReductionStep> iterate_reduction(const SystemState& rho, const WeightState& w0, int n_steps,
                                             const ReductionOptions& options) {
  if (rho.dim() != 2) throw DimensionMismatch("iterate_reduction: qubit systems only");
  if (n_steps < 0) throw DomainError("iterate_reduction: negative step count");
  if (!options.replay.empty() && static_cast<int>(options.replay.size()) < n_steps) {
    throw DomainError("iterate_reduction: replay list shorter than the step count");
  }
  const SystemObservable h = qubit_hamiltonian();
  auto radius_of = [&](const WeightState& w) {
    try {
      return phase_space_from_states(rho, w).radius;
    } catch (const DegenerateSigma&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  std::vector<ReductionStep> steps;
  {
    ReductionStep s0{0, w0, energy_distribution(w0), dispersion_stats(w0).sigma_energy, 0.0, radius_of(w0), 0.0, {}};
    steps.push_back(std::move(s0));
  }
  for (int k = 1; k <= n_steps; ++k) {
    const WeightState& prev = steps.back().weight;
    SystemUnitary v = SystemUnitary::identity(2);
    double predicted = 0.0;
    if (options.replay.empty()) {
      const VarianceMinimum m = minimize_variance(rho, prev, 0.0, options.seed + static_cast<std::uint64_t>(k));
      v = m.v;
      predicted = m.dvar;
    } else {
      v = options.replay[k - 1];
      predicted = PreparedProtocol(rho, prev, h, fast_options()).closed_form(v).delta_variance;
    }
    WeightState next = [&] {
      try {
        const CompositeState out = evolve(rho, prev, h, v);
        WeightState reduced = reduced_weight_branches(out);
        check_guard_band(reduced.grid(), energy_distribution(reduced));
        return reduced;
      } catch (const GuardBandViolation& e) {
        throw GuardBandViolation("step " + std::to_string(k) + ": " + e.what());
      }
    }();
    RVector f = energy_distribution(next);
    const double sigma = dispersion_stats(next).sigma_energy;
    const double radius = radius_of(next);
    const double truncated = next.truncated_mass();
    steps.push_back({k, std::move(next), std::move(f), sigma, predicted, radius, truncated, v});
  }
  return steps;
}

QubitErgotropies qubit_ergotropies(double x, double y, double z, double gamma_abs) {
  const double length = std::sqrt(x * x + y * y + z * z);
  if (length > 1.0 + 1e-10) throw DomainError("qubit_ergotropies: Bloch vector longer than 1");
  if (gamma_abs < 0.0 || gamma_abs > 1.0 + 1e-10) throw DomainError("qubit_ergotropies: |gamma| outside [0, 1]");
  const double alpha2 = x * x + y * y;
  const double total = 0.5 * (length - z);
  const double incoherent = 0.5 * (std::abs(z) - z);
  const double coherent = 0.5 * (std::sqrt(alpha2 + z * z) - std::abs(z));
  const double coherent_sigma = 0.5 * (std::sqrt(gamma_abs * gamma_abs * alpha2 + z * z) - std::abs(z));
  return {total, incoherent, coherent, coherent_sigma};
}

}  // namespace ergokit
