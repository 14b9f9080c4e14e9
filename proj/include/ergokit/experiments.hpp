#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ergokit/config.hpp"
#include "ergokit/serialize.hpp"

namespace ergokit {

struct OutputFile {
  std::string name;  // relative to the output directory
  std::string content;
};

// Everything an experiment produces, held in memory so that files are
// written once, at the end, in a fixed order.
struct ExperimentOutput {
  std::vector<OutputFile> files;
  Json summary;
  bool ok = true;
};

// Gaussian panel, sigma sweep, cat panel (mu = 2, nu = 1) and mu sweep:
// boundary CSVs (w, lower, upper) and point CSVs (w, dvar, provenance).
ExperimentOutput run_phase_space(const ExperimentConfig& cfg);
// Coherent run from the configured state and an incoherent run from its
// dephased version; traces (step, E, f) and a per-step summary.
ExperimentOutput run_reduce_variance(const ExperimentConfig& cfg);
// (R_C, bound) curve up to the divergence, plus Gaussian cross-checks
// through the brute-force oracle.
ExperimentOutput run_bound_plot(const ExperimentConfig& cfg);
// P_W, P_TPM and P_QP atoms for the configured instance.
ExperimentOutput run_distributions(const ExperimentConfig& cfg);
ExperimentOutput run_verify(const ExperimentConfig& cfg);

ExperimentOutput run_command(const ExperimentConfig& cfg);

// Writes every file plus effective-config.ini and summary.json under `dir`.
void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg, const ExperimentOutput& out);

}  // namespace ergokit
