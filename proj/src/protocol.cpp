#include "ergokit/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ergokit/errors.hpp"

namespace ergokit {

namespace {

double row_mass(const Matrix& amps, double spacing) { return amps.cwiseAbs2().sum() * spacing; }

// Shifts every row i by shifts[i] bins: out(i, k) = in(i, k - shift).
Matrix shift_rows(const Matrix& in, const std::vector<int>& shifts, int sign, double spacing) {
  const auto n = in.cols();
  Matrix out(in.rows(), n);
  for (Eigen::Index i = 0; i < in.rows(); ++i) {
    const int m = sign * shifts[i];
    const int mod = static_cast<int>(((m % n) + n) % n);
    // Bins that cross the edge: the last m (m > 0) or first |m| (m < 0).
    double wrapped = 0.0;
    if (m > 0) wrapped = in.row(i).tail(m).cwiseAbs2().sum();
    if (m < 0) wrapped = in.row(i).head(-m).cwiseAbs2().sum();
    if (wrapped * spacing > 1e-12) {
      throw GuardBandViolation("S-transform would wrap probability " + std::to_string(wrapped * spacing) +
                               " around the grid edge");
    }
    for (Eigen::Index k = 0; k < n; ++k) out(i, (k + mod) % n) = in(i, k);
  }
  return out;
}

// Weighted lattice correlations over the weight's branches:
// corr(l) = sum_k psi_k psi*_{k-l} spacing, and the same weighted by
// (E_k - l spacing / 2 - offset).
struct Correlation {
  cplx plain;
  cplx centred;
};

Correlation correlation(const WeightState& w, int lag, double offset) {
  const EnergyGrid& g = w.grid();
  const int n = g.size();
  Correlation c{0.0, 0.0};
  const int lo = std::max(0, lag);
  const int hi = std::min(n, n + lag);
  for (const auto& b : w.branches()) {
    cplx plain(0.0);
    cplx centred(0.0);
    for (int k = lo; k < hi; ++k) {
      const cplx prod = b.amplitudes(k) * std::conj(b.amplitudes(k - lag));
      plain += prod;
      centred += (g.energy(k) - 0.5 * lag * g.spacing() - offset) * prod;
    }
    c.plain += b.weight * plain;
    c.centred += b.weight * centred;
  }
  c.plain *= g.spacing();
  c.centred *= g.spacing();
  return c;
}

double mean_energy(const EnergyGrid& grid, const RVector& f) { return f.dot(grid.energies()) * grid.spacing(); }

double variance_energy(const EnergyGrid& grid, const RVector& f) {
  const double m = mean_energy(grid, f);
  return f.dot((grid.energies().array() - m).square().matrix()) * grid.spacing();
}

void phase_fix_columns(Matrix& vecs) {
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    Eigen::Index idx = 0;
    vecs.col(c).cwiseAbs().maxCoeff(&idx);
    const cplx v = vecs(idx, c);
    vecs.col(c) *= std::abs(v) / v;
  }
}

}  // namespace

CompositeState::CompositeState(int sys_dim, EnergyGrid grid, std::vector<CompositeBranch> branches)
    : sys_dim_(sys_dim), grid_(grid), branches_(std::move(branches)) {
  double total = 0.0;
  for (const auto& b : branches_) {
    if (b.amplitudes.rows() != sys_dim_ || b.amplitudes.cols() != grid_.size()) {
      throw DimensionMismatch("composite: branch shape");
    }
    const double nrm = row_mass(b.amplitudes, grid_.spacing());
    if (std::abs(nrm - 1.0) > 1e-10) throw InvalidState("composite: branch norm " + std::to_string(nrm));
    total += b.weight;
  }
  if (std::abs(total - 1.0) > 1e-10) throw InvalidState("composite: weights sum to " + std::to_string(total));
}

CompositeState CompositeState::product(const SystemState& rho, const WeightState& w) {
  const Eigensystem es = eigensystem(rho);
  std::vector<CompositeBranch> branches;
  double total = 0.0;
  for (Eigen::Index a = 0; a < es.values.size(); ++a) {
    const double lam = es.values(a);
    if (lam <= 1e-14) continue;
    for (const auto& b : w.branches()) {
      branches.push_back({lam * b.weight, es.vectors.col(a) * b.amplitudes.transpose()});
      total += lam * b.weight;
    }
  }
  for (auto& b : branches) b.weight /= total;
  return CompositeState(rho.dim(), w.grid(), std::move(branches));
}

std::vector<int> level_shifts(const SystemObservable& h, const EnergyGrid& grid) {
  if (!h.is_diagonal()) throw DomainError("system Hamiltonian must be diagonal in the computational basis");
  std::vector<int> shifts;
  for (int i = 0; i < h.dim(); ++i) shifts.push_back(grid.bins_for(h.matrix()(i, i).real()));
  return shifts;
}

CompositeState s_transform(const CompositeState& state, const SystemObservable& h, bool inverse) {
  check_same_dim(state.sys_dim(), h.dim(), "s_transform");
  const auto shifts = level_shifts(h, state.grid());
  std::vector<CompositeBranch> out;
  out.reserve(state.branches().size());
  for (const auto& b : state.branches()) {
    out.push_back({b.weight, shift_rows(b.amplitudes, shifts, inverse ? -1 : 1, state.grid().spacing())});
  }
  return CompositeState(state.sys_dim(), state.grid(), std::move(out));
}

CompositeState apply_system_unitary(const CompositeState& state, const SystemUnitary& v) {
  check_same_dim(state.sys_dim(), v.dim(), "apply_system_unitary");
  std::vector<CompositeBranch> out;
  out.reserve(state.branches().size());
  for (const auto& b : state.branches()) out.push_back({b.weight, v.matrix() * b.amplitudes});
  return CompositeState(state.sys_dim(), state.grid(), std::move(out));
}

CompositeState evolve(const CompositeState& state, const SystemObservable& h, const SystemUnitary& v) {
  return s_transform(apply_system_unitary(s_transform(state, h), v), h, true);
}

CompositeState evolve(const SystemState& rho, const WeightState& w, const SystemObservable& h,
                      const SystemUnitary& v) {
  return evolve(CompositeState::product(rho, w), h, v);
}

WeightState reduced_weight(const CompositeState& state) {
  const int n = state.grid().size();
  Matrix rho = Matrix::Zero(n, n);
  for (const auto& b : state.branches()) {
    rho.noalias() += b.weight * (b.amplitudes.transpose() * b.amplitudes.conjugate());
  }
  return WeightState::density(state.grid(), rho);
}

WeightState reduced_weight_branches(const CompositeState& state, double cutoff) {
  std::vector<WeightBranch> rows;
  const double dE = state.grid().spacing();
  for (const auto& b : state.branches()) {
    for (Eigen::Index i = 0; i < b.amplitudes.rows(); ++i) {
      const double mass = b.amplitudes.row(i).squaredNorm() * dE;
      if (mass <= 1e-300) continue;
      rows.push_back({b.weight * mass, b.amplitudes.row(i).transpose() / std::sqrt(mass)});
    }
  }
  return compress(state.grid(), rows, cutoff);
}

SystemState reduced_system(const CompositeState& state) {
  Matrix rho = Matrix::Zero(state.sys_dim(), state.sys_dim());
  for (const auto& b : state.branches()) rho += b.weight * b.amplitudes * b.amplitudes.adjoint();
  rho *= state.grid().spacing();
  return SystemState(rho / rho.trace().real());
}

RVector weight_energy_distribution(const CompositeState& state) {
  RVector f = RVector::Zero(state.grid().size());
  for (const auto& b : state.branches()) f += b.weight * b.amplitudes.cwiseAbs2().colwise().sum().transpose();
  return f;
}

RVector weight_time_distribution(const CompositeState& state) {
  RVector g = RVector::Zero(state.grid().size());
  for (const auto& b : state.branches()) {
    for (Eigen::Index i = 0; i < b.amplitudes.rows(); ++i) {
      g += b.weight * to_time_domain(state.grid(), b.amplitudes.row(i).transpose()).cwiseAbs2();
    }
  }
  return g;
}

double composite_norm(const CompositeState& state) {
  double total = 0.0;
  for (const auto& b : state.branches()) total += b.weight * row_mass(b.amplitudes, state.grid().spacing());
  return total;
}

double total_energy(const CompositeState& state, const SystemObservable& h) {
  const EnergyGrid& g = state.grid();
  const double weight_part = mean_energy(g, weight_energy_distribution(state));
  const SystemState sys = reduced_system(state);
  return weight_part + expectation(h, sys);
}

cplx dephasing_factor(const WeightState& w, double omega) {
  return time_characteristic(w.grid(), time_distribution(w), omega);
}

SystemState control_marginal(const SystemState& rho, const WeightState& w, const SystemObservable& h) {
  check_same_dim(rho.dim(), h.dim(), "control_marginal");
  const auto shifts = level_shifts(h, w.grid());
  Matrix sigma = rho.matrix();
  for (int i = 0; i < rho.dim(); ++i) {
    for (int j = 0; j < rho.dim(); ++j) {
      if (i != j) sigma(i, j) *= correlation(w, shifts[j] - shifts[i], 0.0).plain;
    }
  }
  return SystemState(sigma);
}

ErgotropyResult ergotropy(const SystemState& rho, const SystemObservable& h) {
  check_same_dim(rho.dim(), h.dim(), "ergotropy");
  Eigensystem state = eigensystem(rho);
  Eigensystem energy = eigensystem(h);
  phase_fix_columns(state.vectors);
  phase_fix_columns(energy.vectors);
  const int d = rho.dim();
  double passive = 0.0;
  Matrix v = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const int desc = d - 1 - k;
    passive += state.values(desc) * energy.values(k);
    v += energy.vectors.col(k) * state.vectors.col(desc).adjoint();
  }
  const double value = std::max(0.0, expectation(h, rho) - passive);
  return {value, SystemUnitary(v)};
}

ErgotropySplit ergotropy_split(const SystemState& rho, const SystemObservable& h) {
  const double total = ergotropy(rho, h).value;
  const double incoherent = ergotropy(dephase(rho, h), h).value;
  return {total, incoherent, total - incoherent};
}

OracleMoments oracle_two_point(const SystemState& rho, const WeightState& w, const SystemObservable& h,
                               const SystemUnitary& v) {
  const EnergyGrid& g = w.grid();
  const RVector f_initial = energy_distribution(w);
  const RVector f_final = weight_energy_distribution(evolve(rho, w, h, v));
  const double var_i = variance_energy(g, f_initial);
  const double var_f = variance_energy(g, f_final);
  return {mean_energy(g, f_final) - mean_energy(g, f_initial), var_f - var_i, std::sqrt(std::max(0.0, var_i)),
          std::sqrt(std::max(0.0, var_f))};
}

PreparedProtocol::PreparedProtocol(SystemState rho, WeightState w, SystemObservable h)
    : PreparedProtocol(std::move(rho), std::move(w), std::move(h), Options{}) {}

PreparedProtocol::PreparedProtocol(SystemState rho, WeightState w, SystemObservable h, Options options)
    : rho_(std::move(rho)), w_(std::move(w)), h_(std::move(h)), options_(options), sigma_(rho_) {
  check_same_dim(rho_.dim(), h_.dim(), "protocol");
  const EnergyGrid& g = w_.grid();
  const auto shifts = level_shifts(h_, g);
  const RVector f = energy_distribution(w_);
  mean_hw_ = mean_energy(g, f);
  sigma_e_ = std::sqrt(std::max(0.0, variance_energy(g, f)));

  const int d = rho_.dim();
  Matrix g0(d, d);
  c_xi_ = Matrix(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Correlation c = correlation(w_, shifts[j] - shifts[i], mean_hw_);
      g0(i, j) = options_.corrupt_dephasing_phase ? std::conj(c.plain) : c.plain;
      c_xi_(i, j) = options_.corrupt_dephasing_phase ? std::conj(c.centred) : c.centred;
    }
  }
  sigma_ = SystemState(rho_.matrix().cwiseProduct(g0));

  // Covariance route: explicit S-transformed composite.
  const CompositeState controlled = s_transform(CompositeState::product(rho_, w_), h_);
  s0_ = Matrix::Zero(d, d);
  s1_ = Matrix::Zero(d, d);
  const RVector e = g.energies();
  for (const auto& b : controlled.branches()) {
    s0_ += b.weight * b.amplitudes * b.amplitudes.adjoint();
    s1_ += b.weight * b.amplitudes * e.cast<cplx>().asDiagonal() * b.amplitudes.adjoint();
  }
  s0_ *= g.spacing();
  s1_ *= g.spacing();
  mean_hw_sigma_ = s1_.trace().real();

  if (options_.with_wigner) {
    const WignerFunction wf = wigner(w_);
    const RVector centred = wf.energies.array() - mean_hw_;
    wigner_profile_ = (wf.values.transpose() * centred) * g.spacing();
    has_wigner_ = true;
  }
}

PreparedProtocol::ClosedForm PreparedProtocol::closed_form(const SystemUnitary& v) const {
  const SystemObservable work = SystemObservable(h_.matrix() - v.matrix().adjoint() * h_.matrix() * v.matrix());
  const double mean = expectation(work, sigma_);
  const double var = variance(work, sigma_);
  const double f = f_xi(v).real();
  return {mean, var + 2.0 * f, var, f};
}

double PreparedProtocol::f_covariance(const SystemUnitary& v) const {
  const Matrix& hs = h_.matrix();
  const Matrix hp = v.matrix().adjoint() * hs * v.matrix();
  const double sym = 0.5 * ((hs * hp + hp * hs) * s0_).trace().real();
  const double hw_hp = (hp * s1_).trace().real();
  const double mean_hs = (hs * s0_).trace().real();
  const double mean_hp = (hp * s0_).trace().real();
  return sym - hw_hp - (mean_hs - mean_hw_sigma_) * mean_hp;
}

cplx PreparedProtocol::f_xi(const SystemUnitary& v) const {
  const Matrix work = h_.matrix() - v.matrix().adjoint() * h_.matrix() * v.matrix();
  // -i Tr[W xi'(0)] with xi'(0)_ij = i rho_ij C_ij.
  return (work.transpose().cwiseProduct(rho_.matrix()).cwiseProduct(c_xi_)).sum();
}

cplx PreparedProtocol::f_wigner(const SystemUnitary& v) const {
  if (!has_wigner_) throw DomainError("protocol prepared without the Wigner grid");
  const EnergyGrid& g = w_.grid();
  const Matrix work = h_.matrix() - v.matrix().adjoint() * h_.matrix() * v.matrix();
  const RVector levels = h_.diagonal_values();
  const int d = rho_.dim();
  // Tr[W(t) rho] with W(t) = e^{iHt} W e^{-iHt}.
  const Matrix weighted = work.transpose().cwiseProduct(rho_.matrix());
  cplx acc(0.0);
  for (int j = 0; j < g.size(); ++j) {
    const double t = g.time(j);
    cplx tr(0.0);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) tr += weighted(a, b) * std::polar(1.0, -(levels(a) - levels(b)) * t);
    }
    acc += wigner_profile_(j) * tr;
  }
  return acc * g.time_spacing();
}

ProtocolReport PreparedProtocol::report(const SystemUnitary& v, bool with_oracle) const {
  ProtocolReport r;
  const ClosedForm cf = closed_form(v);
  r.delta_energy = cf.delta_energy;
  r.delta_variance = cf.delta_variance;
  r.work_variance = cf.work_variance;
  const cplx fx = f_xi(v);
  r.f_xi = fx.real();
  r.f_covariance = f_covariance(v);
  r.f_imaginary_residue = std::abs(fx.imag());
  if (has_wigner_) {
    const cplx fw = f_wigner(v);
    r.f_wigner = fw.real();
    r.f_imaginary_residue = std::max(r.f_imaginary_residue, std::abs(fw.imag()));
  }
  r.ergotropy = ergotropy_split(rho_, h_);
  r.ergotropy_sigma = ergotropy(sigma_, h_).value;
  r.sigma_e_initial = sigma_e_;
  if (with_oracle) {
    const OracleMoments o = oracle_two_point(rho_, w_, h_, v);
    r.sigma_e_final = o.sigma_final;
    r.oracle_delta_energy = o.delta_energy;
    r.oracle_delta_variance = o.delta_variance;
    r.work_mean_check = std::abs(r.delta_energy - o.delta_energy);
    r.variance_check = std::abs(r.delta_variance - o.delta_variance);
  } else {
    r.sigma_e_final = std::sqrt(std::max(0.0, sigma_e_ * sigma_e_ + r.delta_variance));
  }
  return r;
}

ProtocolReport theorem1_report(const SystemState& rho, const WeightState& w, const SystemObservable& h,
                               const SystemUnitary& v) {
  return PreparedProtocol(rho, w, h).report(v);
}

}  // namespace ergokit
