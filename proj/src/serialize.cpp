#include "ergokit/serialize.hpp"

#include <sstream>

#include "ergokit/errors.hpp"

namespace ergokit {

namespace {

Json grid_json(const EnergyGrid& g) { return {{"n", g.size()}, {"spacing", g.spacing()}, {"origin", g.origin()}}; }

EnergyGrid grid_from_json(const Json& j) {
  return EnergyGrid(j.at("n").get<int>(), j.at("spacing").get<double>(), j.at("origin").get<double>());
}

Json interleave(const cplx* data, Eigen::Index count) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < count; ++i) {
    out.push_back(data[i].real());
    out.push_back(data[i].imag());
  }
  return out;
}

std::vector<cplx> deinterleave(const Json& data, std::size_t expected) {
  if (!data.is_array() || data.size() != 2 * expected) {
    throw DimensionMismatch("weight json: data length does not match grid");
  }
  std::vector<cplx> out(expected);
  for (std::size_t i = 0; i < expected; ++i) out[i] = {data[2 * i].get<double>(), data[2 * i + 1].get<double>()};
  return out;
}

bool is_single_pure(const WeightState& w) {
  return !w.is_density() && w.branches().size() == 1 && std::abs(w.branches().front().weight - 1.0) < 1e-15;
}

}  // namespace

Json to_json(const WeightState& w) {
  Json out{{"grid", grid_json(w.grid())}};
  if (is_single_pure(w)) {
    const CVector& a = w.branches().front().amplitudes;
    out["form"] = "pure";
    out["data"] = interleave(a.data(), a.size());
  } else {
    // Row-major: transpose the column-major Eigen storage.
    const Matrix rho = w.density_matrix().transpose();
    out["form"] = "density";
    out["data"] = interleave(rho.data(), rho.size());
  }
  return out;
}

WeightState weight_state_from_json(const Json& j) {
  const EnergyGrid grid = grid_from_json(j.at("grid"));
  const auto form = j.at("form").get<std::string>();
  const auto n = static_cast<std::size_t>(grid.size());
  if (form == "pure") {
    const auto values = deinterleave(j.at("data"), n);
    CVector amps = Eigen::Map<const CVector>(values.data(), grid.size());
    return WeightState::pure(WeightWavefunction(grid, amps));
  }
  if (form == "density") {
    const auto values = deinterleave(j.at("data"), n * n);
    const Matrix row_major = Eigen::Map<const Matrix>(values.data(), grid.size(), grid.size());
    return WeightState::density(grid, row_major.transpose());
  }
  throw InvalidState("weight json: unknown form '" + form + "'");
}

Json to_json(const WorkDistribution& d) {
  Json out{{"kind", to_string(d.kind())}};
  if (d.is_atomic()) {
    Json atoms = Json::array();
    for (const auto& a : d.atom_list()) atoms.push_back({a.w, a.q});
    out["atoms"] = std::move(atoms);
  } else {
    out["w_grid"] = std::vector<double>(d.w_grid().begin(), d.w_grid().end());
    out["values"] = std::vector<double>(d.values().begin(), d.values().end());
  }
  return out;
}

WorkDistribution work_distribution_from_json(const Json& j) {
  const WorkKind kind = work_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("atoms")) {
    std::vector<Atom> atoms;
    for (const auto& pair : j.at("atoms")) atoms.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
    return WorkDistribution::atoms(kind, std::move(atoms));
  }
  const auto grid = j.at("w_grid").get<std::vector<double>>();
  const auto values = j.at("values").get<std::vector<double>>();
  return WorkDistribution::sampled(kind, Eigen::Map<const RVector>(grid.data(), static_cast<Eigen::Index>(grid.size())),
                                   Eigen::Map<const RVector>(values.data(), static_cast<Eigen::Index>(values.size())));
}

// Field table shared by both directions so they cannot drift apart.
#define ERGOKIT_REPORT_FIELDS(X) \
  X(delta_energy)                \
  X(delta_variance)              \
  X(work_variance)               \
  X(f_covariance)                \
  X(f_xi)                        \
  X(f_wigner)                    \
  X(f_imaginary_residue)         \
  X(ergotropy_sigma)             \
  X(sigma_e_initial)             \
  X(sigma_e_final)               \
  X(oracle_delta_energy)         \
  X(oracle_delta_variance)       \
  X(work_mean_check)             \
  X(variance_check)

Json to_json(const ProtocolReport& r) {
  Json out;
#define ERGOKIT_WRITE(name) out[#name] = r.name;
  ERGOKIT_REPORT_FIELDS(ERGOKIT_WRITE)
#undef ERGOKIT_WRITE
  out["ergotropy"] = {{"total", r.ergotropy.total},
                      {"incoherent", r.ergotropy.incoherent},
                      {"coherent", r.ergotropy.coherent}};
  return out;
}

ProtocolReport protocol_report_from_json(const Json& j) {
  ProtocolReport r;
#define ERGOKIT_READ(name) r.name = j.at(#name).get<double>();
  ERGOKIT_REPORT_FIELDS(ERGOKIT_READ)
#undef ERGOKIT_READ
  const Json& e = j.at("ergotropy");
  r.ergotropy = {e.at("total").get<double>(), e.at("incoherent").get<double>(), e.at("coherent").get<double>()};
  return r;
}

#undef ERGOKIT_REPORT_FIELDS

std::string to_json_lines(const std::vector<ProtocolReport>& reports) {
  std::string out;
  for (const auto& r : reports) out += to_json(r).dump() + '\n';
  return out;
}

std::vector<ProtocolReport> protocol_reports_from_json_lines(const std::string& text) {
  std::vector<ProtocolReport> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(protocol_report_from_json(Json::parse(line)));
  }
  return out;
}

Json to_json(const BoundReport& r) {
  return {{"bound", r.bound},         {"achieved", r.achieved}, {"slack", r.slack},         {"maximizer", r.maximizer},
          {"grid_slack", r.grid_slack}, {"masked", r.masked},   {"converged", r.converged}};
}

BoundReport bound_report_from_json(const Json& j) {
  BoundReport r;
  r.bound = j.at("bound").get<double>();
  r.achieved = j.at("achieved").get<double>();
  r.slack = j.at("slack").get<double>();
  r.maximizer = j.at("maximizer").get<double>();
  r.grid_slack = j.at("grid_slack").get<double>();
  r.masked = j.at("masked").get<bool>();
  r.converged = j.at("converged").get<bool>();
  return r;
}

}  // namespace ergokit
