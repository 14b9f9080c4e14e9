#include "ergokit/workdist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "ergokit/errors.hpp"

namespace ergokit {

namespace {

// Groups eigenvectors of H into eigenspaces (eigenvalues within tol).
struct Eigenspace {
  double energy;
  Matrix projector;
};

std::vector<Eigenspace> eigenspaces(const SystemObservable& h, double tol = 1e-9) {
  const Eigensystem es = eigensystem(h);
  std::vector<Eigenspace> out;
  const auto d = es.values.size();
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && es.values(end) - es.values(start) <= tol) ++end;
    const Matrix cols = es.vectors.middleCols(start, end - start);
    out.push_back({es.values.segment(start, end - start).mean(), cols * cols.adjoint()});
    start = end;
  }
  return out;
}

bool nonnegative_kind(WorkKind kind) { return kind != WorkKind::quasi; }

}  // namespace

std::string to_string(WorkKind kind) {
  switch (kind) {
    case WorkKind::work_operator:
      return "work_operator";
    case WorkKind::tpm:
      return "tpm";
    case WorkKind::quasi:
      return "quasi";
    case WorkKind::energy:
      return "energy";
  }
  return "quasi";
}

WorkKind work_kind_from_string(const std::string& name) {
  if (name == "work_operator") return WorkKind::work_operator;
  if (name == "tpm") return WorkKind::tpm;
  if (name == "quasi") return WorkKind::quasi;
  if (name == "energy") return WorkKind::energy;
  throw DomainError("unknown distribution kind '" + name + "'");
}

std::vector<Atom> merge_atoms(std::vector<Atom> atoms, double tol, double drop) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.w < b.w; });
  std::vector<Atom> merged;
  // Cluster on the running first member so merging is not transitive across a long chain.
  double anchor = 0.0;
  for (const auto& a : atoms) {
    if (!merged.empty() && std::abs(a.w - anchor) < tol) {
      merged.back().q += a.q;
    } else {
      merged.push_back(a);
      anchor = a.w;
    }
  }
  std::erase_if(merged, [drop](const Atom& a) { return std::abs(a.q) < drop; });
  return merged;
}

WorkDistribution WorkDistribution::atoms(WorkKind kind, std::vector<Atom> atoms) {
  WorkDistribution d;
  d.kind_ = kind;
  d.atomic_ = true;
  d.atoms_ = merge_atoms(std::move(atoms));
  double total = 0.0;
  for (const auto& a : d.atoms_) {
    total += a.q;
    if (nonnegative_kind(kind) && a.q < -1e-10) {
      throw InvalidState(to_string(kind) + " distribution has negative weight " + std::to_string(a.q));
    }
  }
  if (std::abs(total - 1.0) > 1e-8) throw InvalidState("distribution weights sum to " + std::to_string(total));
  return d;
}

WorkDistribution WorkDistribution::sampled(WorkKind kind, RVector w_grid, RVector values) {
  if (w_grid.size() != values.size() || w_grid.size() < 2) throw DimensionMismatch("sampled distribution: sizes");
  WorkDistribution d;
  d.kind_ = kind;
  d.atomic_ = false;
  d.w_grid_ = std::move(w_grid);
  d.values_ = std::move(values);
  return d;
}

double WorkDistribution::moment(int order) const {
  double acc = 0.0;
  if (atomic_) {
    for (const auto& a : atoms_) acc += a.q * std::pow(a.w, order);
    return acc;
  }
  const double dw = w_grid_(1) - w_grid_(0);
  for (Eigen::Index k = 0; k < w_grid_.size(); ++k) acc += values_(k) * std::pow(w_grid_(k), order);
  return acc * dw;
}

cplx WorkDistribution::characteristic(double s) const {
  cplx acc(0.0);
  if (atomic_) {
    for (const auto& a : atoms_) acc += a.q * std::polar(1.0, a.w * s);
    return acc;
  }
  const double dw = w_grid_(1) - w_grid_(0);
  for (Eigen::Index k = 0; k < w_grid_.size(); ++k) acc += values_(k) * std::polar(1.0, w_grid_(k) * s);
  return acc * dw;
}

double total_variation(const WorkDistribution& a, const WorkDistribution& b) {
  if (!a.is_atomic() || !b.is_atomic()) throw DomainError("total_variation: atomic distributions only");
  std::vector<Atom> diff = a.atom_list();
  for (const auto& x : b.atom_list()) diff.push_back({x.w, -x.q});
  double tv = 0.0;
  for (const auto& x : merge_atoms(std::move(diff), 1e-9, 0.0)) tv += std::abs(x.q);
  return 0.5 * tv;
}

SystemObservable work_operator(const SystemObservable& h_initial, const SystemObservable& h_final,
                               const SystemUnitary& v) {
  check_same_dim(h_initial.dim(), h_final.dim(), "work_operator");
  check_same_dim(h_initial.dim(), v.dim(), "work_operator");
  return SystemObservable(h_initial.matrix() - v.matrix().adjoint() * h_final.matrix() * v.matrix());
}

SystemObservable work_operator(const SystemObservable& h, const SystemUnitary& v) { return work_operator(h, h, v); }

WorkDistribution work_operator_distribution(const SystemObservable& work, const SystemState& rho) {
  check_same_dim(work.dim(), rho.dim(), "work_operator_distribution");
  const Eigensystem es = eigensystem(work);
  std::vector<Atom> atoms;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const CVector v = es.vectors.col(i);
    atoms.push_back({es.values(i), v.dot(rho.matrix() * v).real()});
  }
  return WorkDistribution::atoms(WorkKind::work_operator, std::move(atoms));
}

WorkDistribution tpm_distribution(const SystemObservable& h, const SystemUnitary& v, const SystemState& rho) {
  check_same_dim(h.dim(), v.dim(), "tpm_distribution");
  check_same_dim(h.dim(), rho.dim(), "tpm_distribution");
  const auto spaces = eigenspaces(h);
  std::vector<Atom> atoms;
  for (const auto& initial : spaces) {
    const Matrix post = initial.projector * rho.matrix() * initial.projector;
    const Matrix evolved = v.matrix() * post * v.matrix().adjoint();
    for (const auto& final_space : spaces) {
      atoms.push_back({initial.energy - final_space.energy, (final_space.projector * evolved).trace().real()});
    }
  }
  return WorkDistribution::atoms(WorkKind::tpm, std::move(atoms));
}

WorkDistribution energy_distribution(const SystemObservable& h, const SystemState& rho) {
  check_same_dim(h.dim(), rho.dim(), "energy_distribution");
  std::vector<Atom> atoms;
  for (const auto& space : eigenspaces(h)) {
    atoms.push_back({space.energy, (space.projector * rho.matrix()).trace().real()});
  }
  return WorkDistribution::atoms(WorkKind::energy, std::move(atoms));
}

RVector symmetric_s_grid(double step, int half_count) {
  RVector s(2 * half_count + 1);
  for (int k = -half_count; k <= half_count; ++k) s(k + half_count) = k * step;
  return s;
}

namespace {

constexpr double kDenominatorFloor = 1e-8;

CharacteristicFunction ratio_cf(const RVector& s_grid, const auto& numerator, const auto& denominator) {
  CharacteristicFunction cf{s_grid, CVector(s_grid.size()), std::vector<bool>(s_grid.size(), false), 0.0};
  int masked = 0;
  for (Eigen::Index k = 0; k < s_grid.size(); ++k) {
    const cplx den = denominator(s_grid(k));
    if (std::abs(den) < kDenominatorFloor) {
      cf.masked[k] = true;
      cf.values(k) = cplx(std::nan(""), std::nan(""));
      ++masked;
    } else {
      cf.values(k) = numerator(s_grid(k)) / den;
    }
  }
  cf.masked_fraction = s_grid.size() > 0 ? static_cast<double>(masked) / s_grid.size() : 0.0;
  return cf;
}

}  // namespace

CharacteristicFunction qp_general(const SystemObservable& h_initial, const SystemObservable& h_final,
                                  const SystemState& rho_initial, const SystemState& rho_final, const RVector& s_grid) {
  const auto p_initial = energy_distribution(h_initial, rho_initial);
  const auto p_final = energy_distribution(h_final, rho_final);
  return ratio_cf(
      s_grid, [&](double s) { return p_initial.characteristic(s); },
      [&](double s) { return p_final.characteristic(s); });
}

CharacteristicFunction qp_weight_densities(const EnergyGrid& grid, const RVector& f_initial, const RVector& f_final,
                                           const RVector& s_grid) {
  return ratio_cf(
      s_grid, [&](double s) { return energy_characteristic(grid, f_final, s); },
      [&](double s) { return energy_characteristic(grid, f_initial, s); });
}

WorkDistribution qp_weight_atoms(const SystemObservable& h, const SystemUnitary& v, const SystemState& xi) {
  check_same_dim(h.dim(), v.dim(), "qp_weight_atoms");
  check_same_dim(h.dim(), xi.dim(), "qp_weight_atoms");
  const Eigensystem a = eigensystem(h);
  // Eigenvectors of V^dagger H V are V^dagger |e_k> with the same energies.
  const Matrix beta = v.matrix().adjoint() * a.vectors;
  const Matrix overlap = a.vectors.adjoint() * beta;                      // <a_j|beta_k>
  const Matrix xi_a = a.vectors.adjoint() * xi.matrix() * a.vectors;      // <a_l|xi|a_j> at (l, j)
  const auto d = h.dim();
  struct Group {
    double w;
    cplx q;
  };
  std::vector<Group> groups;
  for (int j = 0; j < d; ++j) {
    for (int l = 0; l < d; ++l) {
      for (int k = 0; k < d; ++k) {
        const double w = 0.5 * (a.values(j) + a.values(l)) - a.values(k);
        const cplx q = overlap(j, k) * std::conj(overlap(l, k)) * xi_a(l, j);
        groups.push_back({w, q});
      }
    }
  }
  std::sort(groups.begin(), groups.end(), [](const Group& x, const Group& y) { return x.w < y.w; });
  std::vector<Atom> atoms;
  std::size_t i = 0;
  while (i < groups.size()) {
    std::size_t end = i;
    cplx q(0.0);
    while (end < groups.size() && groups[end].w - groups[i].w < 1e-9) q += groups[end++].q;
    if (std::abs(q.imag()) > 1e-8) {
      throw ImaginaryResidue(fmt::format("qp_weight_atoms: grouped weight at w={} has imaginary part {}",
                                         groups[i].w, q.imag()));
    }
    atoms.push_back({groups[i].w, q.real()});
    i = end;
  }
  return WorkDistribution::atoms(WorkKind::quasi, std::move(atoms));
}

std::vector<double> moments_to_cumulants(const std::vector<double>& m) {
  const auto order = m.size();
  std::vector<double> k(order, 0.0);
  if (order >= 1) k[0] = m[0];
  if (order >= 2) k[1] = m[1] - m[0] * m[0];
  if (order >= 3) k[2] = m[2] - 3 * m[1] * m[0] + 2 * std::pow(m[0], 3);
  if (order >= 4) {
    k[3] = m[3] - 4 * m[2] * m[0] - 3 * m[1] * m[1] + 12 * m[1] * m[0] * m[0] - 6 * std::pow(m[0], 4);
  }
  return k;
}

Cumulants cumulants(const WorkDistribution& dist, int order) {
  if (order < 1 || order > 4) throw DomainError("cumulants: order must be in [1, 4]");
  std::vector<double> moments(order);
  for (int r = 1; r <= order; ++r) moments[r - 1] = dist.moment(r);
  return {moments_to_cumulants(moments), false, 0.0};
}

Cumulants cumulants(const CharacteristicFunction& cf, int order) {
  if (order < 1 || order > 4) throw DomainError("cumulants: order must be in [1, 4]");
  const auto size = cf.s.size();
  Eigen::Index zero = -1;
  for (Eigen::Index k = 0; k < size; ++k) {
    if (cf.s(k) == 0.0) zero = k;
  }
  if (zero < 0) throw DomainError("cumulants: s-grid must contain 0");
  const double h = cf.s(zero + 1) - cf.s(zero);
  constexpr int reach = 4;
  if (zero < reach || zero + reach >= size) throw DomainError("cumulants: s-grid needs four steps on each side of 0");
  for (Eigen::Index k = zero - reach; k <= zero + reach; ++k) {
    if (cf.masked[k]) throw DomainError("cumulants: masked sample next to s = 0");
    if (std::abs(cf.s(k) - (k - zero) * h) > 1e-12 * std::max(1.0, std::abs(cf.s(k)))) {
      throw DomainError("cumulants: s-grid must be uniform near 0");
    }
  }
  // log chi with the phase unwrapped from s = 0 outward.
  std::vector<cplx> logv(2 * reach + 1);
  auto at = [&](int offset) -> cplx& { return logv[offset + reach]; };
  at(0) = std::log(cf.values(zero));
  for (int dir : {1, -1}) {
    double phase = at(0).imag();
    for (int step = 1; step <= reach; ++step) {
      const cplx v = cf.values(zero + dir * step);
      double arg = std::arg(v);
      arg += 2.0 * kPi * std::round((phase - arg) / (2.0 * kPi));
      phase = arg;
      at(dir * step) = cplx(std::log(std::abs(v)), arg);
    }
  }
  auto derivative = [&](int n, int stride) -> cplx {
    const double hs = h * stride;
    const auto l = [&](int k) { return at(k * stride); };
    switch (n) {
      case 1:
        return (l(1) - l(-1)) / (2.0 * hs);
      case 2:
        return (l(1) - 2.0 * l(0) + l(-1)) / (hs * hs);
      case 3:
        return (l(2) - 2.0 * l(1) + 2.0 * l(-1) - l(-2)) / (2.0 * hs * hs * hs);
      default:
        return (l(2) - 4.0 * l(1) + 6.0 * l(0) - 4.0 * l(-1) + l(-2)) / (hs * hs * hs * hs);
    }
  };
  Cumulants out;
  cplx i_power(1.0);
  for (int n = 1; n <= order; ++n) {
    i_power *= cplx(0.0, 1.0);
    const cplx fine = derivative(n, 1);
    const cplx coarse = derivative(n, 2);
    const cplx refined = (4.0 * fine - coarse) / 3.0;
    const double value = (refined / i_power).real();
    const double plain = (fine / i_power).real();
    const double disagreement = std::abs(value - plain) / std::max(1.0, std::abs(value));
    out.max_disagreement = std::max(out.max_disagreement, disagreement);
    if (disagreement > 1e-4) out.unstable = true;
    out.values.push_back(value);
  }
  return out;
}

std::string to_csv(const WorkDistribution& dist) {
  std::ostringstream os;
  if (dist.is_atomic()) {
    os << "w,q\n";
    for (const auto& a : dist.atom_list()) os << fmt::format("{:.17g},{:.17g}\n", a.w, a.q);
  } else {
    os << "w,value\n";
    for (Eigen::Index k = 0; k < dist.w_grid().size(); ++k) {
      os << fmt::format("{:.17g},{:.17g}\n", dist.w_grid()(k), dist.values()(k));
    }
  }
  return os.str();
}

}  // namespace ergokit
