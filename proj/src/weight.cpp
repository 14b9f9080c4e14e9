#include "ergokit/weight.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

#include <fmt/format.h>

#include "ergokit/errors.hpp"

namespace ergokit {

namespace {

double grid_norm(const EnergyGrid& grid, const CVector& psi) { return psi.squaredNorm() * grid.spacing(); }

void check_size(const EnergyGrid& grid, Eigen::Index size, const char* what) {
  if (size != grid.size()) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(size) + " amplitudes on a " +
                            std::to_string(grid.size()) + "-point grid");
  }
}

}  // namespace

EnergyGrid::EnergyGrid(int n, double spacing, double origin) : n_(n), spacing_(spacing), origin_(origin) {
  if (n < 2 || !std::has_single_bit(static_cast<unsigned>(n))) {
    throw DomainError("grid: point count must be a power of two, got " + std::to_string(n));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw DomainError("grid: spacing must be positive");
  if (!std::isfinite(origin)) throw DomainError("grid: origin must be finite");
}

EnergyGrid EnergyGrid::standard() { return EnergyGrid(1024, 1.0 / 32.0, -16.0); }

double EnergyGrid::time_spacing() const { return 2.0 * kPi / (n_ * spacing_); }

RVector EnergyGrid::energies() const {
  RVector e(n_);
  for (int k = 0; k < n_; ++k) e(k) = energy(k);
  return e;
}

RVector EnergyGrid::times() const {
  RVector t(n_);
  for (int j = 0; j < n_; ++j) t(j) = time(j);
  return t;
}

int EnergyGrid::bins_for(double energy) const {
  const double ratio = energy / spacing_;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 || std::abs(rounded) >= n_) {
    throw CommensurabilityError("energy " + std::to_string(energy) + " is not an integer multiple of the grid spacing " +
                                std::to_string(spacing_));
  }
  return static_cast<int>(rounded);
}

WeightWavefunction::WeightWavefunction(EnergyGrid grid, CVector amplitudes)
    : grid_(grid), amps_(std::move(amplitudes)) {
  check_size(grid_, amps_.size(), "wavefunction");
  const double nrm = grid_norm(grid_, amps_);
  if (std::abs(nrm - 1.0) > 1e-10) throw InvalidState("wavefunction: norm " + std::to_string(nrm));
}

WeightWavefunction WeightWavefunction::normalised(EnergyGrid grid, CVector amplitudes) {
  check_size(grid, amplitudes.size(), "wavefunction");
  const double nrm = grid_norm(grid, amplitudes);
  if (!(nrm > 0.0)) throw InvalidState("wavefunction: zero vector");
  amplitudes /= std::sqrt(nrm);
  return WeightWavefunction(grid, std::move(amplitudes));
}

WeightState::WeightState(EnergyGrid grid, std::vector<WeightBranch> branches)
    : grid_(grid), branches_(std::move(branches)) {}

WeightState WeightState::pure(const WeightWavefunction& psi) {
  return WeightState(psi.grid(), {WeightBranch{1.0, psi.amplitudes()}});
}

WeightState WeightState::mixture(const EnergyGrid& grid, std::vector<WeightBranch> branches) {
  if (branches.empty()) throw InvalidState("weight mixture: no branches");
  double total = 0.0;
  for (const auto& b : branches) {
    check_size(grid, b.amplitudes.size(), "weight mixture");
    if (b.weight < -1e-10) throw InvalidState("weight mixture: negative branch weight");
    const double nrm = grid_norm(grid, b.amplitudes);
    if (std::abs(nrm - 1.0) > 1e-10) throw InvalidState("weight mixture: branch norm " + std::to_string(nrm));
    total += b.weight;
  }
  if (std::abs(total - 1.0) > 1e-10) throw InvalidState("weight mixture: weights sum to " + std::to_string(total));
  return WeightState(grid, std::move(branches));
}

WeightState WeightState::density(const EnergyGrid& grid, const Matrix& rho, double cutoff) {
  if (rho.rows() != grid.size() || rho.cols() != grid.size()) throw DimensionMismatch("weight density: shape");
  if (max_abs(rho - rho.adjoint()) > 1e-10 * std::max(1.0, max_abs(rho))) {
    throw NotHermitian("weight density: not Hermitian");
  }
  const double dE = grid.spacing();
  const double tr = rho.trace().real() * dE;
  if (std::abs(tr - 1.0) > 1e-10) throw InvalidState("weight density: trace " + std::to_string(tr));
  // The operator with kernel rho has matrix rho * dE in the orthonormal bin basis.
  const Matrix op = (rho + rho.adjoint()) * (0.5 * dE);
  Eigen::SelfAdjointEigenSolver<Matrix> es(op);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw InvalidState("weight density: negative eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
  std::vector<WeightBranch> branches;
  double kept = 0.0;
  for (Eigen::Index k = op.rows() - 1; k >= 0; --k) {
    const double lam = es.eigenvalues()(k);
    if (lam <= cutoff) break;
    branches.push_back({lam, es.eigenvectors().col(k) / std::sqrt(dE)});
    kept += lam;
  }
  for (auto& b : branches) b.weight /= kept;
  WeightState out(grid, std::move(branches));
  out.density_ = (rho + rho.adjoint()) * 0.5;
  out.has_density_ = true;
  out.truncated_ = std::max(0.0, 1.0 - kept);
  return out;
}

Matrix WeightState::density_matrix() const {
  if (has_density_) return density_;
  const int n = grid_.size();
  Matrix rho = Matrix::Zero(n, n);
  for (const auto& b : branches_) rho.noalias() += b.weight * (b.amplitudes * b.amplitudes.adjoint());
  return rho;
}

double WeightState::purity() const {
  // Tr(rho^2) in operator normalisation = sum_ab w_a w_b |<a|b>|^2.
  const double dE = grid_.spacing();
  double p = 0.0;
  for (const auto& a : branches_) {
    for (const auto& b : branches_) {
      p += a.weight * b.weight * std::norm(a.amplitudes.dot(b.amplitudes) * dE);
    }
  }
  return p;
}

WeightState WeightState::with_truncated_mass(double mass) const {
  WeightState out = *this;
  out.truncated_ = mass;
  return out;
}

WeightState WeightState::recentred(double shift) const {
  WeightState out = *this;
  out.grid_ = grid_.recentred(shift);
  return out;
}

WeightState compress(const EnergyGrid& grid, const std::vector<WeightBranch>& branches, double cutoff) {
  if (branches.empty()) throw InvalidState("compress: no branches");
  const int n = grid.size();
  const auto count = static_cast<Eigen::Index>(branches.size());
  Matrix x(n, count);
  for (Eigen::Index b = 0; b < count; ++b) {
    check_size(grid, branches[b].amplitudes.size(), "compress");
    x.col(b) = std::sqrt(std::max(0.0, branches[b].weight)) * branches[b].amplitudes;
  }
  const Matrix gram = x.adjoint() * x * grid.spacing();
  Eigen::SelfAdjointEigenSolver<Matrix> es((gram + gram.adjoint()) * 0.5);
  std::vector<WeightBranch> out;
  double kept = 0.0;
  const double total = std::max(es.eigenvalues().sum(), 0.0);
  for (Eigen::Index k = count - 1; k >= 0; --k) {
    const double mu = es.eigenvalues()(k);
    if (mu <= cutoff) continue;
    CVector v = x * es.eigenvectors().col(k) / std::sqrt(mu);
    v /= std::sqrt(grid_norm(grid, v));
    out.push_back({mu, std::move(v)});
    kept += mu;
  }
  if (out.empty()) throw InvalidState("compress: all branches below cutoff");
  for (auto& b : out) b.weight /= kept;
  return WeightState::mixture(grid, std::move(out)).with_truncated_mass(std::max(0.0, total - kept) / total);
}

CVector to_time_domain(const EnergyGrid& grid, const CVector& psi) {
  check_size(grid, psi.size(), "time transform");
  const int n = grid.size();
  Eigen::FFT<double> fft;
  std::vector<cplx> in(psi.data(), psi.data() + n);
  std::vector<cplx> spec;
  fft.fwd(spec, in);
  const double scale = grid.spacing() / std::sqrt(2.0 * kPi);
  CVector phi(n);
  for (int j = 0; j < n; ++j) {
    const int idx = (j + n / 2) % n;  // (j - n/2) mod n
    phi(j) = scale * std::polar(1.0, -grid.time(j) * grid.origin()) * spec[idx];
  }
  return phi;
}

CVector to_energy_domain(const EnergyGrid& grid, const CVector& phi) {
  check_size(grid, phi.size(), "energy transform");
  const int n = grid.size();
  std::vector<cplx> spec(n);
  for (int j = 0; j < n; ++j) spec[(j + n / 2) % n] = phi(j) * std::polar(1.0, grid.time(j) * grid.origin());
  Eigen::FFT<double> fft;
  std::vector<cplx> out;
  fft.inv(out, spec);  // includes 1/n
  const double scale = grid.time_spacing() * n / std::sqrt(2.0 * kPi);
  CVector psi(n);
  for (int k = 0; k < n; ++k) psi(k) = scale * out[k];
  return psi;
}

RVector energy_distribution(const WeightState& w) {
  if (w.is_density()) return w.density_matrix().diagonal().real();
  RVector f = RVector::Zero(w.grid().size());
  for (const auto& b : w.branches()) f += b.weight * b.amplitudes.cwiseAbs2();
  return f;
}

RVector time_distribution(const WeightState& w) {
  if (w.is_density()) {
    // g(t) = <t| rho |t>: transform columns, then rows of the conjugated result.
    const int n = w.grid().size();
    const Matrix rho = w.density_matrix();
    Matrix half(n, n);
    for (int c = 0; c < n; ++c) half.col(c) = to_time_domain(w.grid(), rho.col(c));
    RVector g(n);
    const Matrix half_adj = half.adjoint();
    for (int j = 0; j < n; ++j) {
      // Row j of half is <t_j| rho |E_l>; transforming its conjugate gives <t_j|rho|t_j>^*.
      g(j) = to_time_domain(w.grid(), half_adj.col(j))(j).real();
    }
    return g;
  }
  RVector g = RVector::Zero(w.grid().size());
  for (const auto& b : w.branches()) g += b.weight * to_time_domain(w.grid(), b.amplitudes).cwiseAbs2();
  return g;
}

RVector WignerFunction::energy_marginal() const {
  const int n = grid.size();
  RVector f(n);
  for (int k = 0; k < n; ++k) f(k) = values.row(2 * k).sum() * grid.time_spacing();
  return f;
}

RVector WignerFunction::time_marginal() const { return values.colwise().sum().transpose() * grid.spacing(); }

bool WignerFunction::in_principal_window(int j) const {
  return std::abs(times(j)) < 0.5 * grid.time_half_width();
}

WignerFunction wigner(const WeightState& w) {
  const EnergyGrid& grid = w.grid();
  const int n = grid.size();
  const int half_points = 2 * n;
  WignerFunction out{grid, RVector(half_points), grid.times(), Eigen::MatrixXd(half_points, n), 0.0};
  Eigen::FFT<double> fft;
  std::vector<cplx> folded(n);
  std::vector<cplx> row;
  const double scale = grid.spacing() / (2.0 * kPi) * n;
  // Prefer the full kernel for density-form states; their branches are truncated.
  const Matrix dens_storage = w.is_density() ? w.density_matrix() : Matrix();
  const Matrix* dens = w.is_density() ? &dens_storage : nullptr;
  for (int h = 0; h < half_points; ++h) {
    out.energies(h) = grid.origin() + 0.5 * h * grid.spacing();
    std::fill(folded.begin(), folded.end(), cplx(0.0));
    // Pairs (a, b) = ((h - m)/2, (h + m)/2) inside the grid.
    const int reach = std::min(h, half_points - 2 - h);
    for (int m = -reach; m <= reach; ++m) {
      if (((h - m) & 1) != 0) continue;
      const int a = (h - m) / 2;
      const int b = (h + m) / 2;
      cplx rho(0.0);
      if (dens) {
        rho = (*dens)(a, b);
      } else {
        for (const auto& br : w.branches()) rho += br.weight * br.amplitudes(a) * std::conj(br.amplitudes(b));
      }
      folded[((m % n) + n) % n] += rho;
    }
    fft.inv(row, folded);
    for (int j = 0; j < n; ++j) {
      const cplx v = scale * row[(j + n / 2) % n];
      out.values(h, j) = v.real();
      out.imaginary_residue = std::max(out.imaginary_residue, std::abs(v.imag()));
    }
  }
  return out;
}

namespace {

void check_fits(const EnergyGrid& grid, double lo, double hi, const char* what) {
  constexpr double guard = 2.0;
  if (lo < grid.origin() + guard || hi > grid.last_energy() - guard) {
    throw OffGridError(std::string(what) + ": support [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "] leaves the usable grid");
  }
}

CVector gaussian_amplitudes(double mu, double nu, double sigma, const EnergyGrid& grid) {
  const int n = grid.size();
  CVector psi(n);
  const double pref = std::pow(2.0 * kPi * sigma * sigma, -0.25);
  for (int k = 0; k < n; ++k) {
    const double e = grid.energy(k);
    const double x = (e - mu) / sigma;
    psi(k) = pref * std::exp(-0.25 * x * x) * std::polar(1.0, nu * e);
  }
  return psi;
}

void check_time_fit(const EnergyGrid& grid, double nu, double sigma_t, const char* what) {
  if (std::abs(nu) + 6.0 * sigma_t > 0.5 * grid.time_half_width()) {
    throw OffGridError(std::string(what) + ": time profile leaves the principal window");
  }
}

WeightWavefunction checked(const EnergyGrid& grid, CVector amps) {
  auto psi = WeightWavefunction::normalised(grid, std::move(amps));
  check_guard_band(grid, psi.amplitudes().cwiseAbs2(), 2.0);
  return psi;
}

}  // namespace

WeightWavefunction gaussian_packet(double mu, double nu, double sigma, const EnergyGrid& grid) {
  if (!(sigma >= 2.0 * grid.spacing())) throw DomainError("gaussian_packet: sigma below two grid spacings");
  check_fits(grid, mu - 6.0 * sigma, mu + 6.0 * sigma, "gaussian_packet");
  check_time_fit(grid, nu, 0.5 / sigma, "gaussian_packet");
  return checked(grid, gaussian_amplitudes(mu, nu, sigma, grid));
}

WeightWavefunction cat_state(double mu, double nu, const EnergyGrid& grid) {
  const double sigma = 1.0 / std::sqrt(2.0);
  const double reach = std::abs(mu) + 6.0 * sigma;
  check_fits(grid, -reach, reach, "cat_state");
  check_time_fit(grid, std::abs(nu), 0.5 / sigma, "cat_state");
  CVector sum = gaussian_amplitudes(mu, nu, sigma, grid) + gaussian_amplitudes(-mu, -nu, sigma, grid);
  return checked(grid, std::move(sum));
}

WeightWavefunction uniform_packet(double center, double width, double nu, const EnergyGrid& grid) {
  if (!(width >= 2.0 * grid.spacing())) throw DomainError("uniform_packet: width below two grid spacings");
  check_fits(grid, center - 0.5 * width, center + 0.5 * width, "uniform_packet");
  const int n = grid.size();
  CVector psi = CVector::Zero(n);
  for (int k = 0; k < n; ++k) {
    const double e = grid.energy(k);
    if (std::abs(e - center) <= 0.5 * width + 1e-12) psi(k) = std::polar(1.0, nu * e);
  }
  return checked(grid, std::move(psi));
}

DispersionStats dispersion_from_distributions(const EnergyGrid& grid, const RVector& f, const RVector& g) {
  const RVector e = grid.energies();
  const RVector t = grid.times();
  const double dE = grid.spacing();
  const double dt = grid.time_spacing();
  const double mass_e = f.sum() * dE;
  const double mean_e = f.dot(e) * dE / mass_e;
  const double var_e = f.dot((e.array() - mean_e).square().matrix()) * dE / mass_e;
  const double mass_t = g.sum() * dt;
  const double mean_t = g.dot(t) * dt / mass_t;
  const double var_t = g.dot((t.array() - mean_t).square().matrix()) * dt / mass_t;
  const int n = grid.size();
  const int edge = n / 16;
  const double wrap_mass = (g.head(edge).sum() + g.tail(edge).sum()) * dt;
  return {mean_e, std::sqrt(std::max(0.0, var_e)), mean_t, std::sqrt(std::max(0.0, var_t)), wrap_mass > 1e-6};
}

DispersionStats dispersion_stats(const WeightState& w) {
  return dispersion_from_distributions(w.grid(), energy_distribution(w), time_distribution(w));
}

cplx energy_characteristic(const EnergyGrid& grid, const RVector& f, double omega) {
  cplx acc(0.0);
  for (int k = 0; k < grid.size(); ++k) acc += f(k) * std::polar(1.0, omega * grid.energy(k));
  return acc * grid.spacing();
}

cplx time_characteristic(const EnergyGrid& grid, const RVector& g, double omega) {
  cplx acc(0.0);
  for (int j = 0; j < grid.size(); ++j) acc += g(j) * std::polar(1.0, omega * grid.time(j));
  return acc * grid.time_spacing();
}

double edge_mass(const EnergyGrid& grid, const RVector& f, double margin) {
  double mass = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    const double e = grid.energy(k);
    if (e < grid.origin() + margin || e > grid.last_energy() - margin) mass += f(k);
  }
  return mass * grid.spacing();
}

void check_guard_band(const EnergyGrid& grid, const RVector& f, double margin) {
  const double mass = edge_mass(grid, f, margin);
  if (mass > 1e-12) {
    throw GuardBandViolation(fmt::format("probability {:.3g} within {} of the grid edge", mass, margin));
  }
}

}  // namespace ergokit
