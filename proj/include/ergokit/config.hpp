#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergokit/hilbert.hpp"
#include "ergokit/weight.hpp"

namespace ergokit {

enum class Command { phase_space, reduce_variance, bound_plot, distributions, verify };

std::string to_string(Command c);

struct GridSpec {
  int n = 1024;
  double spacing = 1.0 / 32.0;
  double origin = -16.0;
};

struct SystemSpec {
  enum class Kind { bloch, amplitudes, matrix };
  Kind kind = Kind::bloch;
  std::vector<double> bloch{1.0, 0.0, 0.0};
  std::vector<cplx> amplitudes;  // normalised on use
  Matrix matrix;
  std::vector<double> energies{0.0, 1.0};  // diagonal Hamiltonian
};

struct WeightSpec {
  enum class Kind { gaussian, cat, uniform };
  Kind kind = Kind::gaussian;
  double mu = 0.0;
  double nu = 0.0;
  double sigma = 0.70710678118654752;
  double center = 0.0;
  double width = 1.0;
};

struct ProtocolSpec {
  enum class Mode { unitary, haar, minimize };
  Mode mode = Mode::unitary;
  // Qubit rotation U(theta, phi, lambda); ignored for other modes.
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;
  std::size_t samples = 2000;
  double target_work = 0.0;
};

struct RunSpec {
  std::uint64_t seed = 1;
  std::string out = "out";
  int steps = 5;
  std::vector<double> sigma_sweep;
  std::vector<double> mu_sweep;
  int bound_points = 200;
  bool incoherent_replay = true;  // false: minimise the incoherent run too
  std::string suite = "all";
  bool corrupt_gamma = false;     // negative control for verify; never from a file
};

// Fully validated experiment description. Construction goes through
// load_config, which checks every key and builds every derived object once.
struct ExperimentConfig {
  Command command = Command::verify;
  GridSpec grid;
  SystemSpec system;
  WeightSpec weight;
  ProtocolSpec protocol;
  RunSpec run;

  static ExperimentConfig defaults(Command c);

  EnergyGrid energy_grid() const;
  SystemObservable hamiltonian() const;
  SystemState system_state() const;
  WeightState weight_state() const;
  WeightState weight_state(const WeightSpec& spec) const;
  SystemUnitary unitary() const;

  // Sorted INI text of every setting; excludes run.out so that the same
  // experiment written to two places hashes identically.
  std::string canonical() const;
  std::string hash() const;

  // Throws ConfigError naming the offending key.
  void validate() const;
};

struct ConfigOverride {
  std::string key;  // "section.key"
  std::string value;
};

// Defaults for the command, then the INI file, then the overrides.
ExperimentConfig load_config(Command c, const std::optional<std::filesystem::path>& file,
                             const std::vector<ConfigOverride>& overrides);
ExperimentConfig load_config_text(Command c, const std::string& ini_text, const std::string& source_name,
                                  const std::vector<ConfigOverride>& overrides = {});

// Parses "section.key=value".
ConfigOverride parse_override(const std::string& assignment);

}  // namespace ergokit
