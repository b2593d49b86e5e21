#pragma once

#include <optional>
#include <string>

#include "sv/data.hpp"
#include "sv/samplers.hpp"

namespace sv {

enum class Command { kSynth, kFit, kReport };

struct ExperimentConfig {
  Command command = Command::kFit;
  std::optional<std::string> data_path;     // price CSV to fit
  std::optional<SyntheticSpec> synthetic;   // generated input (synth / fit)
  ChainConfig chain{};
  std::string output_dir = ".";
  int max_lag = 200;                        // ACF report depth
  int n_chains = 1;                         // independently seeded chains
  std::string chain_file;                   // report input
  std::optional<std::string> compare_file;  // report comparison input
};

// Writes returns.csv and latent.csv for the synthetic spec and echoes it.
void cmd_synth(const ExperimentConfig& cfg);

// Loads (--data) or generates the return series, runs the chain(s), writes
// chain.csv and manifest.txt per chain (suffixed _<i> when n_chains > 1).
// Exactly one of data_path / synthetic must be set.
void cmd_fit(const ExperimentConfig& cfg);

// Per-quantity summary (mean, sd, se, 2 tau_int with jackknife error) of a
// chain file plus plot-ready ACF curves; side-by-side table with a 2 tau
// ratio column when compare_file is set. Writes report.txt, summary.csv,
// acf.csv and prints the text report.
void cmd_report(const ExperimentConfig& cfg);

}  // namespace sv
