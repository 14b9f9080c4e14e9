#include "ergokit/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "ergokit/errors.hpp"
#include "ergokit/output.hpp"

namespace ergokit {

std::string to_string(Command c) {
  switch (c) {
    case Command::phase_space: return "phase-space";
    case Command::reduce_variance: return "reduce-variance";
    case Command::bound_plot: return "bound-plot";
    case Command::distributions: return "distributions";
    case Command::verify: return "verify";
  }
  return "unknown";
}

ExperimentConfig ExperimentConfig::defaults(Command c) {
  ExperimentConfig cfg;
  cfg.command = c;
  switch (c) {
    case Command::phase_space:
      // |0> + 5|1>, Gaussian weight at sigma = 1/sqrt 2.
      cfg.system.kind = SystemSpec::Kind::amplitudes;
      cfg.system.amplitudes = {1.0, 5.0};
      cfg.run.sigma_sweep = {0.0625, 0.125, 0.25, 0.5, 0.70710678118654752, 1.0, 1.5};
      cfg.run.mu_sweep = {0.0, 1.0, 2.0, 3.0};
      cfg.weight.nu = 0.0;
      break;
    case Command::reduce_variance:
      cfg.weight.kind = WeightSpec::Kind::cat;
      cfg.weight.mu = 3.0;
      cfg.weight.nu = 1.0;
      cfg.protocol.mode = ProtocolSpec::Mode::minimize;
      break;
    case Command::bound_plot:
      break;
    case Command::distributions:
      cfg.protocol.theta = kPi / 2.0;  // rotation by pi/2 about y
      break;
    case Command::verify:
      cfg.protocol.mode = ProtocolSpec::Mode::haar;
      cfg.protocol.samples = 200;
      break;
  }
  return cfg;
}

EnergyGrid ExperimentConfig::energy_grid() const { return EnergyGrid(grid.n, grid.spacing, grid.origin); }

SystemObservable ExperimentConfig::hamiltonian() const {
  return SystemObservable::diagonal(Eigen::Map<const RVector>(system.energies.data(),
                                                              static_cast<Eigen::Index>(system.energies.size())));
}

SystemState ExperimentConfig::system_state() const {
  switch (system.kind) {
    case SystemSpec::Kind::bloch:
      return SystemState::bloch(system.bloch[0], system.bloch[1], system.bloch[2]);
    case SystemSpec::Kind::amplitudes: {
      CVector a = Eigen::Map<const CVector>(system.amplitudes.data(), static_cast<Eigen::Index>(system.amplitudes.size()));
      if (a.norm() == 0.0) throw InvalidState("system amplitudes are all zero");
      return SystemState::pure(a.normalized());
    }
    case SystemSpec::Kind::matrix:
      return SystemState(system.matrix);
  }
  throw InvalidState("unknown system kind");
}

WeightState ExperimentConfig::weight_state() const { return weight_state(weight); }

WeightState ExperimentConfig::weight_state(const WeightSpec& spec) const {
  const EnergyGrid g = energy_grid();
  switch (spec.kind) {
    case WeightSpec::Kind::gaussian: return WeightState::pure(gaussian_packet(spec.mu, spec.nu, spec.sigma, g));
    case WeightSpec::Kind::cat: return WeightState::pure(cat_state(spec.mu, spec.nu, g));
    case WeightSpec::Kind::uniform: return WeightState::pure(uniform_packet(spec.center, spec.width, spec.nu, g));
  }
  throw InvalidState("unknown weight kind");
}

SystemUnitary ExperimentConfig::unitary() const {
  const int dim = static_cast<int>(system.energies.size());
  const auto& p = protocol;
  if (dim != 2) {
    if (p.theta == 0.0 && p.phi == 0.0 && p.lambda == 0.0) return SystemUnitary::identity(dim);
    throw ConfigError("protocol.theta/phi/lambda describe a qubit rotation; system has dimension " +
                      std::to_string(dim));
  }
  const double c = std::cos(0.5 * p.theta);
  const double s = std::sin(0.5 * p.theta);
  Matrix u(2, 2);
  u << c, -std::polar(s, p.lambda), std::polar(s, p.phi), std::polar(c, p.phi + p.lambda);
  return SystemUnitary(u);
}

namespace {

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::string format_complex(cplx z) {
  if (z.imag() == 0.0) return format_double(z.real());
  return format_double(z.real()) + ":" + format_double(z.imag());
}

std::string weight_kind_name(WeightSpec::Kind k) {
  switch (k) {
    case WeightSpec::Kind::gaussian: return "gaussian";
    case WeightSpec::Kind::cat: return "cat";
    case WeightSpec::Kind::uniform: return "uniform";
  }
  return "?";
}

std::string mode_name(ProtocolSpec::Mode m) {
  switch (m) {
    case ProtocolSpec::Mode::unitary: return "unitary";
    case ProtocolSpec::Mode::haar: return "haar";
    case ProtocolSpec::Mode::minimize: return "minimize";
  }
  return "?";
}

}  // namespace

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["grid.n"] = std::to_string(grid.n);
  kv["grid.spacing"] = format_double(grid.spacing);
  kv["grid.origin"] = format_double(grid.origin);
  kv["system.energies"] = join_doubles(system.energies);
  switch (system.kind) {
    case SystemSpec::Kind::bloch: kv["system.bloch"] = join_doubles(system.bloch); break;
    case SystemSpec::Kind::amplitudes: {
      std::string s;
      for (std::size_t i = 0; i < system.amplitudes.size(); ++i) s += (i ? "," : "") + format_complex(system.amplitudes[i]);
      kv["system.amplitudes"] = s;
      break;
    }
    case SystemSpec::Kind::matrix: {
      std::string s;
      for (Eigen::Index r = 0; r < system.matrix.rows(); ++r) {
        if (r) s += ';';
        for (Eigen::Index c = 0; c < system.matrix.cols(); ++c) s += (c ? "," : "") + format_complex(system.matrix(r, c));
      }
      kv["system.matrix"] = s;
      break;
    }
  }
  kv["weight.kind"] = weight_kind_name(weight.kind);
  kv["weight.mu"] = format_double(weight.mu);
  kv["weight.nu"] = format_double(weight.nu);
  kv["weight.sigma"] = format_double(weight.sigma);
  kv["weight.center"] = format_double(weight.center);
  kv["weight.width"] = format_double(weight.width);
  kv["protocol.mode"] = mode_name(protocol.mode);
  kv["protocol.theta"] = format_double(protocol.theta);
  kv["protocol.phi"] = format_double(protocol.phi);
  kv["protocol.lambda"] = format_double(protocol.lambda);
  kv["protocol.samples"] = std::to_string(protocol.samples);
  kv["protocol.target_work"] = format_double(protocol.target_work);
  kv["run.seed"] = std::to_string(run.seed);
  kv["run.steps"] = std::to_string(run.steps);
  kv["run.sigma_sweep"] = join_doubles(run.sigma_sweep);
  kv["run.mu_sweep"] = join_doubles(run.mu_sweep);
  kv["run.bound_points"] = std::to_string(run.bound_points);
  kv["run.incoherent"] = run.incoherent_replay ? "replay" : "minimize";
  kv["run.suite"] = run.suite;
  // INI layout, so the echo written next to the outputs loads back as-is.
  std::string out = "; command: " + to_string(command) + "\n";
  std::string section;
  for (const auto& [k, v] : kv) {
    const auto dot = k.find('.');
    if (k.substr(0, dot) != section) {
      section = k.substr(0, dot);
      out += "\n[" + section + "]\n";
    }
    out += k.substr(dot + 1) + " = " + v + "\n";
  }
  return out;
}

std::string ExperimentConfig::hash() const { return hash_hex(fnv1a64(canonical())); }

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) { throw ConfigError(key + ": " + why); };
  auto guarded = [&](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(key, e.what());
    }
  };
  guarded("grid", [&] { (void)energy_grid(); });
  const EnergyGrid g = energy_grid();
  if (system.energies.empty()) fail("system.energies", "at least one level required");
  guarded("system.energies", [&] {
    for (double e : system.energies) (void)g.bins_for(e);
  });
  guarded("system", [&] {
    const SystemState rho = system_state();
    check_same_dim(rho.dim(), static_cast<int>(system.energies.size()), "system state vs system.energies");
  });
  guarded("weight", [&] { (void)weight_state(); });
  guarded("protocol", [&] { (void)unitary(); });
  for (double s : run.sigma_sweep) {
    guarded("run.sigma_sweep", [&] {
      WeightSpec spec = weight;
      spec.kind = WeightSpec::Kind::gaussian;
      spec.mu = 0.0;
      spec.sigma = s;
      (void)weight_state(spec);
    });
  }
  for (double m : run.mu_sweep) {
    guarded("run.mu_sweep", [&] {
      WeightSpec spec = weight;
      spec.kind = WeightSpec::Kind::cat;
      spec.mu = m;
      spec.nu = 1.0;
      (void)weight_state(spec);
    });
  }
  if (run.steps < 0) fail("run.steps", "must be non-negative");
  if (run.bound_points < 2) fail("run.bound_points", "at least 2 points required");
  if (protocol.mode == ProtocolSpec::Mode::haar && protocol.samples == 0) fail("protocol.samples", "must be positive");
  static const std::vector<std::string> suites{"all", "hilbert", "weight", "workdist", "protocol", "bounds", "qubit"};
  if (std::find(suites.begin(), suites.end(), run.suite) == suites.end()) fail("run.suite", "unknown suite '" + run.suite + "'");
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  const auto e = s.find_last_not_of(" \t\r\"");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  const std::string t = trim(s);
  // from_chars rejects "pi"; allow the common fractions of pi explicitly.
  if (t == "pi") return kPi;
  if (t == "pi/2") return kPi / 2.0;
  if (t == "pi/4") return kPi / 4.0;
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("expected a number, got '" + t + "'");
  }
  return v;
}

long long parse_int(const std::string& s) {
  const std::string t = trim(s);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("expected an integer, got '" + t + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) out.push_back(parse_double(item));
  return out;
}

// "re" or "re:im"
cplx parse_complex(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() == 1) return {parse_double(parts[0]), 0.0};
  if (parts.size() == 2) return {parse_double(parts[0]), parse_double(parts[1])};
  throw ConfigError("expected re or re:im, got '" + s + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.n", [](auto& c, const auto& v) { c.grid.n = static_cast<int>(parse_int(v)); }},
      {"grid.spacing", [](auto& c, const auto& v) { c.grid.spacing = parse_double(v); }},
      {"grid.origin", [](auto& c, const auto& v) { c.grid.origin = parse_double(v); }},
      {"system.energies", [](auto& c, const auto& v) { c.system.energies = parse_list(v); }},
      {"system.bloch",
       [](auto& c, const auto& v) {
         auto b = parse_list(v);
         if (b.size() != 3) throw ConfigError("expected three components x,y,z");
         c.system.kind = SystemSpec::Kind::bloch;
         c.system.bloch = b;
       }},
      {"system.amplitudes",
       [](auto& c, const auto& v) {
         std::vector<cplx> a;
         for (const auto& item : split(v, ',')) a.push_back(parse_complex(item));
         c.system.kind = SystemSpec::Kind::amplitudes;
         c.system.amplitudes = a;
       }},
      {"system.matrix",
       [](auto& c, const auto& v) {
         const auto rows = split(v, ';');
         const auto dim = static_cast<Eigen::Index>(rows.size());
         Matrix m(dim, dim);
         for (Eigen::Index r = 0; r < dim; ++r) {
           const auto cells = split(rows[static_cast<std::size_t>(r)], ',');
           if (static_cast<Eigen::Index>(cells.size()) != dim) throw ConfigError("matrix must be square");
           for (Eigen::Index col = 0; col < dim; ++col) m(r, col) = parse_complex(cells[static_cast<std::size_t>(col)]);
         }
         c.system.kind = SystemSpec::Kind::matrix;
         c.system.matrix = m;
       }},
      {"weight.kind",
       [](auto& c, const auto& v) {
         const auto t = trim(v);
         if (t == "gaussian") c.weight.kind = WeightSpec::Kind::gaussian;
         else if (t == "cat") c.weight.kind = WeightSpec::Kind::cat;
         else if (t == "uniform") c.weight.kind = WeightSpec::Kind::uniform;
         else throw ConfigError("expected gaussian, cat or uniform, got '" + t + "'");
       }},
      {"weight.mu", [](auto& c, const auto& v) { c.weight.mu = parse_double(v); }},
      {"weight.nu", [](auto& c, const auto& v) { c.weight.nu = parse_double(v); }},
      {"weight.sigma", [](auto& c, const auto& v) { c.weight.sigma = parse_double(v); }},
      {"weight.center", [](auto& c, const auto& v) { c.weight.center = parse_double(v); }},
      {"weight.width", [](auto& c, const auto& v) { c.weight.width = parse_double(v); }},
      {"protocol.mode",
       [](auto& c, const auto& v) {
         const auto t = trim(v);
         if (t == "unitary") c.protocol.mode = ProtocolSpec::Mode::unitary;
         else if (t == "haar") c.protocol.mode = ProtocolSpec::Mode::haar;
         else if (t == "minimize") c.protocol.mode = ProtocolSpec::Mode::minimize;
         else throw ConfigError("expected unitary, haar or minimize, got '" + t + "'");
       }},
      {"protocol.theta", [](auto& c, const auto& v) { c.protocol.theta = parse_double(v); }},
      {"protocol.phi", [](auto& c, const auto& v) { c.protocol.phi = parse_double(v); }},
      {"protocol.lambda", [](auto& c, const auto& v) { c.protocol.lambda = parse_double(v); }},
      {"protocol.samples",
       [](auto& c, const auto& v) {
         const auto n = parse_int(v);
         if (n < 0) throw ConfigError("must be non-negative");
         c.protocol.samples = static_cast<std::size_t>(n);
       }},
      {"protocol.target_work", [](auto& c, const auto& v) { c.protocol.target_work = parse_double(v); }},
      {"run.seed",
       [](auto& c, const auto& v) {
         const auto n = parse_int(v);
         if (n < 0) throw ConfigError("must be non-negative");
         c.run.seed = static_cast<std::uint64_t>(n);
       }},
      {"run.out", [](auto& c, const auto& v) { c.run.out = trim(v); }},
      {"run.steps", [](auto& c, const auto& v) { c.run.steps = static_cast<int>(parse_int(v)); }},
      {"run.sigma_sweep", [](auto& c, const auto& v) { c.run.sigma_sweep = parse_list(v); }},
      {"run.mu_sweep", [](auto& c, const auto& v) { c.run.mu_sweep = parse_list(v); }},
      {"run.bound_points", [](auto& c, const auto& v) { c.run.bound_points = static_cast<int>(parse_int(v)); }},
      {"run.incoherent",
       [](auto& c, const auto& v) {
         const auto t = trim(v);
         if (t == "replay") c.run.incoherent_replay = true;
         else if (t == "minimize") c.run.incoherent_replay = false;
         else throw ConfigError("expected replay or minimize, got '" + t + "'");
       }},
      {"run.suite", [](auto& c, const auto& v) { c.run.suite = trim(v); }},
  };
  return table;
}

// Line of `key` inside `[section]`, for error messages; 0 when not found.
int line_of(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  std::string current;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.size() > 2 && t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (current == section && eq != std::string::npos && trim(t.substr(0, eq)) == key) return number;
  }
  return 0;
}

void apply(ExperimentConfig& cfg, const std::string& key, const std::string& value, const std::string& where) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
  try {
    it->second(cfg, value);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}: {}", where, key, e.what()));
  }
}

ExperimentConfig finish(ExperimentConfig cfg) {
  cfg.validate();
  return cfg;
}

void apply_ini(ExperimentConfig& cfg, const std::string& text, const std::string& source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("{}:{}: {}", source, e.line(), e.message()));
  }
  std::vector<std::string> system_forms;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(fmt::format("{}:{}: key '{}' outside any section", source, line_of(text, "", section), section));
    }
    static const std::vector<std::string> sections{"grid", "system", "weight", "protocol", "run"};
    if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
      throw ConfigError(fmt::format("{}: unknown section [{}]", source, section));
    }
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      const std::string where = fmt::format("{}:{}", source, line_of(text, section, key));
      if (full == "system.bloch" || full == "system.amplitudes" || full == "system.matrix") system_forms.push_back(full);
      apply(cfg, full, node.data(), where);
    }
  }
  if (system_forms.size() > 1) {
    throw ConfigError(fmt::format("{}: {} and {} both describe the system state", source, system_forms[0], system_forms[1]));
  }
}

}  // namespace

ConfigOverride parse_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
  return {trim(assignment.substr(0, eq)), assignment.substr(eq + 1)};
}

ExperimentConfig load_config_text(Command c, const std::string& ini_text, const std::string& source_name,
                                  const std::vector<ConfigOverride>& overrides) {
  ExperimentConfig cfg = ExperimentConfig::defaults(c);
  apply_ini(cfg, ini_text, source_name);
  for (const auto& o : overrides) apply(cfg, o.key, o.value, "command line");
  return finish(std::move(cfg));
}

ExperimentConfig load_config(Command c, const std::optional<std::filesystem::path>& file,
                             const std::vector<ConfigOverride>& overrides) {
  if (!file) {
    ExperimentConfig cfg = ExperimentConfig::defaults(c);
    for (const auto& o : overrides) apply(cfg, o.key, o.value, "command line");
    return finish(std::move(cfg));
  }
  std::ifstream in(*file);
  if (!in) throw ConfigError("cannot open config file " + file->string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config_text(c, buf.str(), file->string(), overrides);
}

}  // namespace ergokit
