// Command-line driver: regenerates the figure data as CSV/JSON and runs the
// verification suites.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ergokit/config.hpp"
#include "ergokit/errors.hpp"
#include "ergokit/experiments.hpp"

namespace {

// Exit codes: 0 success, 1 a check failed, 2 bad configuration, 3 runtime error.
constexpr int kChecksFailed = 1;
constexpr int kBadConfig = 2;
constexpr int kRuntimeError = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> samples;
  std::optional<std::string> suite;
  std::vector<std::string> sets;
  bool corrupt_gamma = false;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--config", flags.config, "INI config file")->check(CLI::ExistingFile);
  sub->add_option("--seed", flags.seed, "RNG seed (overrides run.seed)");
  sub->add_option("--out", flags.out, "output directory (overrides run.out)");
  sub->add_option("--samples", flags.samples, "sample count (overrides protocol.samples)");
  sub->add_option("--set", flags.sets, "override any key: section.key=value")->take_all();
}

int run(ergokit::Command command, const CommonFlags& flags) {
  using namespace ergokit;
  std::vector<ConfigOverride> overrides;
  for (const auto& s : flags.sets) overrides.push_back(parse_override(s));
  if (flags.seed) overrides.push_back({"run.seed", std::to_string(*flags.seed)});
  if (flags.out) overrides.push_back({"run.out", *flags.out});
  if (flags.samples) overrides.push_back({"protocol.samples", std::to_string(*flags.samples)});
  if (flags.suite) overrides.push_back({"run.suite", *flags.suite});
  std::optional<std::filesystem::path> file;
  if (!flags.config.empty()) file = flags.config;
  ExperimentConfig cfg = load_config(command, file, overrides);
  cfg.run.corrupt_gamma = flags.corrupt_gamma;

  const ExperimentOutput out = run_command(cfg);
  write_outputs(cfg.run.out, cfg, out);
  std::cout << to_string(command) << ": wrote " << out.files.size() + 2 << " files to " << cfg.run.out
            << " (config " << cfg.hash() << ")" << (out.ok ? "" : " -- CHECKS FAILED") << "\n";
  return out.ok ? 0 : kChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergokit: work extraction with an explicit quantum weight"};
  app.require_subcommand(1);

  struct Sub {
    ergokit::Command command;
    const char* name;
    const char* help;
  };
  const std::vector<Sub> subs{
      {ergokit::Command::phase_space, "phase-space", "reachable (work, variance change) sets for a qubit"},
      {ergokit::Command::reduce_variance, "reduce-variance", "sequential variance reduction of a cat weight"},
      {ergokit::Command::bound_plot, "bound-plot", "dispersion lower bound against coherent ergotropy"},
      {ergokit::Command::distributions, "distributions", "P_W, P_TPM and P_QP atoms for one instance"},
      {ergokit::Command::verify, "verify", "run the invariant suites and write a JSON report"},
  };
  std::vector<CommonFlags> flags(subs.size());
  std::vector<CLI::App*> handles;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    CLI::App* sub = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(sub, flags[i]);
    if (subs[i].command == ergokit::Command::verify) {
      sub->add_option("--suite", flags[i].suite, "suite to run: all, hilbert, weight, workdist, protocol, bounds, qubit");
      // Test mode only: conjugated dephasing phases must fail the Theorem-1 suite.
      sub->add_flag("--corrupt-gamma", flags[i].corrupt_gamma)->group("");
    }
    handles.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!handles[i]->parsed()) continue;
    try {
      return run(subs[i].command, flags[i]);
    } catch (const ergokit::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kBadConfig;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kRuntimeError;
    }
  }
  return kBadConfig;
}
