#include "ergokit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "ergokit/bounds.hpp"
#include "ergokit/errors.hpp"
#include "ergokit/output.hpp"
#include "ergokit/parallel.hpp"
#include "ergokit/protocol.hpp"
#include "ergokit/qubit_phase.hpp"
#include "ergokit/verify.hpp"
#include "ergokit/workdist.hpp"

namespace ergokit {

namespace {

constexpr int kBoundarySamples = 401;

struct Panel {
  std::string name;
  double parameter = 0.0;  // sigma or mu of the sweep value
  WeightState weight;
};

struct PanelResult {
  bool band_available = false;
  std::vector<std::array<double, 3>> band;  // w, lower, upper
  std::vector<PhaseSpacePoint> points;
  Json summary;
};

PanelResult evaluate_panel(const SystemState& rho, const WeightState& w, std::size_t samples, std::uint64_t seed) {
  PanelResult r;
  r.points = sample_phase_space(rho, w, samples, seed);
  double min_dvar = std::numeric_limits<double>::infinity();
  std::size_t negative = 0;
  double w_lo = std::numeric_limits<double>::infinity();
  double w_hi = -w_lo;
  for (const auto& p : r.points) {
    if (p.provenance != Provenance::sampled) continue;
    min_dvar = std::min(min_dvar, p.dvar);
    if (p.dvar < 0.0) ++negative;
    w_lo = std::min(w_lo, p.w);
    w_hi = std::max(w_hi, p.w);
  }
  r.summary = {{"samples", samples},
               {"min_sampled_dvar", min_dvar},
               {"negative_fraction", static_cast<double>(negative) / static_cast<double>(samples + 1)},
               {"sampled_work_range", {w_lo, w_hi}}};
  try {
    const QubitPhaseSpace ps = phase_space_from_states(rho, w);
    r.band_available = true;
    for (int k = 0; k < kBoundarySamples; ++k) {
      const double wk = ps.work_min() + (ps.work_max() - ps.work_min()) * k / (kBoundarySamples - 1);
      const Band b = boundary(ps, wk);
      r.band.push_back({wk, b.lower, b.upper});
    }
    r.summary["band"] = {{"p", ps.p},
                         {"eps0", ps.eps0},
                         {"eps1", ps.eps1},
                         {"eta", ps.eta},
                         {"xi", {ps.xi.real(), ps.xi.imag()}},
                         {"gamma", {ps.gamma.real(), ps.gamma.imag()}},
                         {"radius", ps.radius},
                         {"work_range", {ps.work_min(), ps.work_max()}},
                         {"zero_variance_roots", zero_variance_roots(ps)}};
  } catch (const DegenerateSigma&) {
    r.summary["band"] = nullptr;  // sigma_S maximally mixed: no band parametrisation
  }
  return r;
}

std::string boundary_csv(const std::string& hash, const std::vector<Panel>& panels, const std::vector<PanelResult>& results,
                         const char* parameter) {
  std::vector<std::string> cols;
  if (parameter) cols.emplace_back(parameter);
  for (const char* c : {"w", "lower", "upper"}) cols.emplace_back(c);
  CsvTable t(cols);
  for (std::size_t i = 0; i < panels.size(); ++i) {
    for (const auto& row : results[i].band) {
      std::vector<CsvCell> cells;
      if (parameter) cells.emplace_back(panels[i].parameter);
      for (double v : row) cells.emplace_back(v);
      t.add_row(std::move(cells));
    }
  }
  return t.render(hash);
}

std::string points_csv(const std::string& hash, const std::vector<Panel>& panels, const std::vector<PanelResult>& results,
                       const char* parameter) {
  std::vector<std::string> cols;
  if (parameter) cols.emplace_back(parameter);
  for (const char* c : {"w", "dvar", "provenance"}) cols.emplace_back(c);
  CsvTable t(cols);
  for (std::size_t i = 0; i < panels.size(); ++i) {
    for (const auto& p : results[i].points) {
      std::vector<CsvCell> cells;
      if (parameter) cells.emplace_back(panels[i].parameter);
      cells.emplace_back(p.w);
      cells.emplace_back(p.dvar);
      cells.emplace_back(to_string(p.provenance));
      t.add_row(std::move(cells));
    }
  }
  return t.render(hash);
}

SystemState qubit_state(const ExperimentConfig& cfg, const char* command) {
  SystemState rho = cfg.system_state();
  if (rho.dim() != 2) throw ConfigError(fmt::format("{}: qubit systems only (system has dimension {})", command, rho.dim()));
  const RVector e = cfg.hamiltonian().diagonal_values();
  if (e(0) != 0.0 || e(1) != 1.0) throw ConfigError(fmt::format("{}: system.energies must be 0,1", command));
  return rho;
}

}  // namespace

ExperimentOutput run_phase_space(const ExperimentConfig& cfg) {
  const SystemState rho = qubit_state(cfg, "phase-space");
  const std::string hash = cfg.hash();
  const std::size_t samples = cfg.protocol.samples;

  struct Group {
    std::string stem;
    const char* parameter;
    std::vector<Panel> panels;
  };
  std::vector<Group> groups;
  groups.push_back({"configured", nullptr, {{"configured", 0.0, cfg.weight_state()}}});
  {
    WeightSpec cat_spec;
    cat_spec.kind = WeightSpec::Kind::cat;
    cat_spec.mu = 2.0;
    cat_spec.nu = 1.0;
    groups.push_back({"cat_mu2_nu1", nullptr, {{"cat_mu2_nu1", 2.0, cfg.weight_state(cat_spec)}}});
  }
  Group sigma_group{"sigma_sweep", "sigma", {}};
  for (double s : cfg.run.sigma_sweep) {
    WeightSpec spec;
    spec.kind = WeightSpec::Kind::gaussian;
    spec.sigma = s;
    sigma_group.panels.push_back({fmt::format("sigma={}", s), s, cfg.weight_state(spec)});
  }
  if (!sigma_group.panels.empty()) groups.push_back(std::move(sigma_group));
  Group mu_group{"mu_sweep", "mu", {}};
  for (double m : cfg.run.mu_sweep) {
    WeightSpec spec;
    spec.kind = WeightSpec::Kind::cat;
    spec.mu = m;
    spec.nu = 1.0;
    mu_group.panels.push_back({fmt::format("mu={}", m), m, cfg.weight_state(spec)});
  }
  if (!mu_group.panels.empty()) groups.push_back(std::move(mu_group));

  // Flatten for one parallel pass; every panel has its own seed offset.
  std::vector<std::pair<std::size_t, std::size_t>> index;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t p = 0; p < groups[g].panels.size(); ++p) index.emplace_back(g, p);
  }
  std::vector<PanelResult> flat(index.size());
  parallel_for(index.size(), [&](std::size_t i) {
    const auto [g, p] = index[i];
    flat[i] = evaluate_panel(rho, groups[g].panels[p].weight, samples, cfg.run.seed + 7919ULL * i);
  });

  ExperimentOutput out;
  Json panels = Json::object();
  std::size_t cursor = 0;
  for (const auto& group : groups) {
    std::vector<PanelResult> results(flat.begin() + static_cast<std::ptrdiff_t>(cursor),
                                     flat.begin() + static_cast<std::ptrdiff_t>(cursor + group.panels.size()));
    cursor += group.panels.size();
    out.files.push_back({"phase_space_" + group.stem + "_boundary.csv", boundary_csv(hash, group.panels, results, group.parameter)});
    out.files.push_back({"phase_space_" + group.stem + "_points.csv", points_csv(hash, group.panels, results, group.parameter)});
    Json entries = Json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      Json e = results[i].summary;
      e["panel"] = group.panels[i].name;
      if (group.parameter) e[group.parameter] = group.panels[i].parameter;
      entries.push_back(std::move(e));
    }
    panels[group.stem] = std::move(entries);
  }
  out.summary = {{"panels", std::move(panels)}};
  return out;
}

ExperimentOutput run_reduce_variance(const ExperimentConfig& cfg) {
  const SystemState rho = qubit_state(cfg, "reduce-variance");
  const SystemState incoherent = dephase(rho, qubit_hamiltonian());
  const WeightState w0 = cfg.weight_state();
  const std::string hash = cfg.hash();

  ReductionOptions coherent_options;
  coherent_options.seed = cfg.run.seed;
  const auto coherent = iterate_reduction(rho, w0, cfg.run.steps, coherent_options);
  ReductionOptions incoherent_options;
  incoherent_options.seed = cfg.run.seed;
  if (cfg.run.incoherent_replay) {
    for (std::size_t k = 1; k < coherent.size(); ++k) incoherent_options.replay.push_back(*coherent[k].unitary);
  }
  const auto dephased = iterate_reduction(incoherent, w0, cfg.run.steps, incoherent_options);

  auto trace_csv = [&](const std::vector<ReductionStep>& steps) {
    CsvTable t({"step", "E", "f"});
    const EnergyGrid& g = w0.grid();
    for (const auto& s : steps) {
      for (int k = 0; k < g.size(); ++k) {
        t.add_row({static_cast<long long>(s.step), g.energy(k), s.energy_density(k)});
      }
    }
    return t.render(hash);
  };
  CsvTable summary({"run", "step", "sigma_energy", "predicted_dvar", "radius", "truncated_mass"});
  Json runs = Json::object();
  bool coherent_decreasing = true;
  bool incoherent_nondecreasing = true;
  for (const auto& [name, steps] : {std::pair{std::string("coherent"), &coherent}, std::pair{std::string("incoherent"), &dephased}}) {
    std::vector<double> sigmas;
    for (const auto& s : *steps) {
      summary.add_row({name, static_cast<long long>(s.step), s.sigma_energy, s.predicted_dvar, s.radius, s.truncated_mass});
      sigmas.push_back(s.sigma_energy);
    }
    runs[name] = {{"sigma_energy", sigmas}};
    for (std::size_t k = 1; k < sigmas.size(); ++k) {
      if (name == "coherent" && k <= 2 && !(sigmas[k] < sigmas[k - 1])) coherent_decreasing = false;
      if (name == "incoherent" && sigmas[k] < sigmas[k - 1] - 1e-12) incoherent_nondecreasing = false;
    }
  }
  ExperimentOutput out;
  out.files.push_back({"reduce_coherent_trace.csv", trace_csv(coherent)});
  out.files.push_back({"reduce_incoherent_trace.csv", trace_csv(dephased)});
  out.files.push_back({"reduce_summary.csv", summary.render(hash)});
  out.summary = {{"runs", std::move(runs)},
                 {"incoherent_policy", cfg.run.incoherent_replay ? "replay" : "minimize"},
                 {"coherent_decreasing_first_two_steps", coherent_decreasing},
                 {"incoherent_nondecreasing", incoherent_nondecreasing}};
  return out;
}

ExperimentOutput run_bound_plot(const ExperimentConfig& cfg) {
  const SystemState rho = qubit_state(cfg, "bound-plot");
  const Matrix& m = rho.matrix();
  const double x = 2.0 * m(0, 1).real();
  const double y = -2.0 * m(0, 1).imag();
  const double z = (m(0, 0) - m(1, 1)).real();
  const double alpha = std::hypot(x, y);
  if (!(alpha > 1e-12)) throw ConfigError("bound-plot: the system state has no coherence, so no coherent ergotropy");
  const double rc_max = coherent_ergotropy_limit(z, alpha);
  const std::string hash = cfg.hash();

  CsvTable curve({"R_C", "bound"});
  const int n = cfg.run.bound_points;
  for (int k = 1; k <= n; ++k) {
    const double rc = rc_max * k / (n + 1.0);
    curve.add_row({rc, qubit_coherent_bound(rc, z, alpha)});
  }

  // Gaussian weights reach R_C(sigma_S) = rc when |gamma(1)| = sqrt(4 rc (rc + |z|)) / alpha,
  // i.e. sigma = 1 / sqrt(-8 log |gamma|).
  CsvTable check({"R_C", "sigma", "bound", "sigma_e_initial", "sigma_e_final", "holds"});
  const SystemObservable h = qubit_hamiltonian();
  bool all_hold = true;
  Json skipped = Json::array();
  for (double fraction : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double rc = fraction * rc_max;
    const double gamma_abs = std::sqrt(4.0 * rc * (rc + std::abs(z))) / alpha;
    const double sigma = 1.0 / std::sqrt(-8.0 * std::log(gamma_abs));
    WeightSpec spec;
    spec.kind = WeightSpec::Kind::gaussian;
    spec.sigma = sigma;
    std::optional<WeightState> w;
    try {
      w = cfg.weight_state(spec);
    } catch (const Error& e) {
      // The packet would not fit the grid at this sigma.
      skipped.push_back({{"R_C", rc}, {"sigma", sigma}, {"reason", e.what()}});
      continue;
    }
    const double bound = qubit_coherent_bound(rc, z, alpha);
    const SystemState sigma_s = control_marginal(rho, *w, h);
    const SystemUnitary v = ergotropy(sigma_s, h).optimal;
    const OracleMoments o = oracle_two_point(rho, *w, h, v);
    const double tol = 1e-9 * std::max(1.0, bound);
    const bool holds = o.sigma_final >= bound - tol && o.sigma_initial >= bound - tol;
    all_hold = all_hold && holds;
    check.add_row({rc, sigma, bound, o.sigma_initial, o.sigma_final, static_cast<long long>(holds)});
  }

  ExperimentOutput out;
  out.files.push_back({"bound_curve.csv", curve.render(hash)});
  out.files.push_back({"bound_crosscheck.csv", check.render(hash)});
  out.summary = {{"rc_max", rc_max},
                 {"alpha", alpha},
                 {"z", z},
                 {"asymptote", "bound diverges as R_C -> rc_max"},
                 {"crosscheck_holds", all_hold},
                 {"crosscheck_skipped", skipped}};
  out.ok = all_hold;
  return out;
}

ExperimentOutput run_distributions(const ExperimentConfig& cfg) {
  const SystemState rho = cfg.system_state();
  const SystemObservable h = cfg.hamiltonian();
  const WeightState w = cfg.weight_state();
  const std::string hash = cfg.hash();
  const SystemUnitary v = [&] {
    switch (cfg.protocol.mode) {
      case ProtocolSpec::Mode::unitary: return cfg.unitary();
      case ProtocolSpec::Mode::haar: {
        auto rng = stream_rng(cfg.run.seed, 0);
        return haar_unitary(rho.dim(), rng);
      }
      case ProtocolSpec::Mode::minimize:
        return minimize_variance(rho, w, cfg.protocol.target_work, cfg.run.seed).v;
    }
    throw ConfigError("unknown protocol mode");
  }();
  const SystemState sigma = control_marginal(rho, w, h);
  const SystemObservable work = work_operator(h, v);
  const std::vector<std::pair<std::string, WorkDistribution>> dists{
      {"p_w", work_operator_distribution(work, rho)},
      {"p_tpm", tpm_distribution(h, v, rho)},
      {"p_qp", qp_weight_atoms(h, v, sigma)}};
  const PreparedProtocol prepared(rho, w, h);
  const ProtocolReport report = prepared.report(v);

  ExperimentOutput out;
  Json summary = Json::object();
  for (const auto& [name, d] : dists) {
    CsvTable t({"w", "q"});
    for (const auto& a : d.atom_list()) t.add_row({a.w, a.q});
    out.files.push_back({name + ".csv", t.render(hash)});
    const Cumulants c = cumulants(d, 2);
    summary[name] = to_json(d);
    summary[name]["cumulants"] = c.values;
  }
  summary["protocol_report"] = to_json(report);
  // The atom form of P_QP assumes a constant xi, which holds when F vanishes.
  summary["semi_classical"] = std::abs(report.f_xi) < 1e-8;
  out.summary = std::move(summary);
  return out;
}

ExperimentOutput run_verify(const ExperimentConfig& cfg) {
  VerifyOptions options;
  options.seed = cfg.run.seed;
  options.suite = cfg.run.suite;
  options.corrupt_gamma = cfg.run.corrupt_gamma;
  const auto suites = run_verification(options);
  ExperimentOutput out;
  out.summary = verification_report(suites, options);
  out.files.push_back({"verify_report.json", out.summary.dump(2) + "\n"});
  out.ok = all_passed(suites);
  return out;
}

ExperimentOutput run_command(const ExperimentConfig& cfg) {
  switch (cfg.command) {
    case Command::phase_space: return run_phase_space(cfg);
    case Command::reduce_variance: return run_reduce_variance(cfg);
    case Command::bound_plot: return run_bound_plot(cfg);
    case Command::distributions: return run_distributions(cfg);
    case Command::verify: return run_verify(cfg);
  }
  throw ConfigError("unknown command");
}

void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg, const ExperimentOutput& out) {
  std::filesystem::create_directories(dir);
  for (const auto& f : out.files) write_text_file(dir / f.name, f.content);
  write_text_file(dir / "effective-config.ini", cfg.canonical());
  Json summary = out.summary;
  summary["command"] = to_string(cfg.command);
  summary["config_hash"] = cfg.hash();
  summary["ok"] = out.ok;
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace ergokit
