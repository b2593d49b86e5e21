// svmcmc: Bayesian inference of the stochastic volatility model
//   y_t = exp(h_t/2) eps_t,  h_t = mu + phi (h_{t-1} - mu) + eta_t
// with the latent volatilities updated either globally (HMC) or site by
// site (Metropolis), and conjugate Gibbs draws for (sigma_eta2, mu, phi).

#include <cstdio>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sv/errors.hpp"
#include "sv/experiment.hpp"

namespace {

std::vector<std::size_t> parse_track(const std::string& arg) {
  std::vector<std::size_t> out;
  std::string field;
  std::stringstream ss(arg);
  while (std::getline(ss, field, ',')) {
    if (field.empty()) continue;
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(field, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("--track: bad index '" + field + "'");
    }
    if (pos != field.size() || v < 1)
      throw std::invalid_argument("--track: bad index '" + field + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "svmcmc: MCMC estimation of the standard stochastic volatility model\n"
      "(HMC or single-site Metropolis volatility updates + Gibbs parameter "
      "draws)"};
  app.require_subcommand(1);
  app.footer(
      "exit codes: 0 success, 1 usage error, 2 data error, 3 numerical "
      "degeneracy");

  // ---- synth -------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a synthetic return series");
  std::size_t synth_n = 0;
  sv::Params synth_truth;
  std::uint64_t synth_seed = 1;
  std::string synth_out = ".";
  synth->add_option("--t", synth_n, "series length")->required();
  synth->add_option("--mu", synth_truth.mu, "true mu")->capture_default_str();
  synth->add_option("--phi", synth_truth.phi, "true phi")->capture_default_str();
  synth->add_option("--sigma-eta2", synth_truth.sigma_eta2, "true sigma_eta2")
      ->capture_default_str();
  synth->add_option("--seed", synth_seed, "generator seed")->capture_default_str();
  synth->add_option("--out", synth_out, "output directory")->capture_default_str();

  // ---- fit ---------------------------------------------------------------
  auto* fit = app.add_subcommand("fit", "run an MCMC chain on a return series");
  std::string fit_data;
  std::size_t fit_n = 0;
  sv::Params fit_truth;
  std::uint64_t fit_data_seed = 1;
  std::string fit_algorithm = "hmc";
  std::uint64_t fit_seed = 1;
  long fit_burn_in = 10000;
  long fit_samples = 200000;
  long fit_thin = 1;
  double fit_length = 1.0;
  double fit_step = 0.1;
  double fit_delta = 1.0;
  double fit_target = -1.0;
  std::string fit_track = "100";
  std::string fit_preset;
  int fit_chains = 1;
  std::string fit_out = ".";
  fit->add_option("--data", fit_data, "price CSV (header; (date,close) or (close))");
  fit->add_option("--t", fit_n, "length of a synthetic series to fit instead");
  fit->add_option("--mu", fit_truth.mu, "synthetic truth mu")->capture_default_str();
  fit->add_option("--phi", fit_truth.phi, "synthetic truth phi")->capture_default_str();
  fit->add_option("--sigma-eta2", fit_truth.sigma_eta2, "synthetic truth sigma_eta2")
      ->capture_default_str();
  fit->add_option("--data-seed", fit_data_seed, "synthetic data seed")
      ->capture_default_str();
  fit->add_option("--algorithm", fit_algorithm, "volatility update scheme")
      ->check(CLI::IsMember({"hmc", "metropolis"}))
      ->capture_default_str();
  fit->add_option("--seed", fit_seed, "chain seed")->capture_default_str();
  fit->add_option("--burn-in", fit_burn_in, "adaptive burn-in iterations")
      ->capture_default_str();
  fit->add_option("--samples", fit_samples, "recorded samples")->capture_default_str();
  fit->add_option("--thin", fit_thin, "record every thin-th iteration")
      ->capture_default_str();
  fit->add_option("--trajectory-length", fit_length,
                  "HMC trajectory length (n_steps * step_size)")
      ->capture_default_str();
  fit->add_option("--step-size", fit_step, "initial HMC leapfrog step")
      ->capture_default_str();
  fit->add_option("--delta", fit_delta, "initial Metropolis proposal width")
      ->capture_default_str();
  fit->add_option("--target-accept", fit_target,
                  "tuning target (default 0.65 hmc, 0.5 metropolis)");
  fit->add_option("--track", fit_track, "comma-separated 1-based latent indices")
      ->capture_default_str();
  fit->add_option("--preset", fit_preset, "quick: burn-in 2000, samples 20000")
      ->check(CLI::IsMember({"quick"}));
  fit->add_option("--chains", fit_chains, "independently seeded chains")
      ->capture_default_str();
  fit->add_option("--out", fit_out, "output directory")->capture_default_str();

  // ---- report ------------------------------------------------------------
  auto* report = app.add_subcommand("report", "summarize chain files");
  std::string rep_chain;
  std::string rep_compare;
  int rep_max_lag = 200;
  std::string rep_out = ".";
  report->add_option("--chain", rep_chain, "chain CSV to summarize")->required();
  report->add_option("--compare", rep_compare, "second chain CSV (side-by-side)");
  report->add_option("--max-lag", rep_max_lag, "ACF depth")->capture_default_str();
  report->add_option("--out", rep_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    sv::ExperimentConfig cfg;
    if (*synth) {
      cfg.command = sv::Command::kSynth;
      cfg.synthetic = sv::SyntheticSpec{synth_truth, synth_n, synth_seed};
      cfg.output_dir = synth_out;
      sv::cmd_synth(cfg);
    } else if (*fit) {
      cfg.command = sv::Command::kFit;
      if (!fit_data.empty()) cfg.data_path = fit_data;
      if (fit->count("--t"))
        cfg.synthetic = sv::SyntheticSpec{fit_truth, fit_n, fit_data_seed};
      if (fit_preset == "quick") {
        if (!fit->count("--burn-in")) fit_burn_in = 2000;
        if (!fit->count("--samples")) fit_samples = 20000;
      }
      cfg.chain.algorithm = fit_algorithm == "hmc" ? sv::Algorithm::kHmc
                                                   : sv::Algorithm::kMetropolis;
      cfg.chain.seed = fit_seed;
      cfg.chain.burn_in = fit_burn_in;
      cfg.chain.n_record = fit_samples;
      cfg.chain.thin = fit_thin;
      cfg.chain.hmc.trajectory_length = fit_length;
      cfg.chain.hmc.step_size = fit_step;
      cfg.chain.metro.delta = fit_delta;
      if (fit_target > 0.0) {
        cfg.chain.hmc.target_acceptance = fit_target;
        cfg.chain.metro.target_acceptance = fit_target;
      }
      cfg.chain.tracked_latents = parse_track(fit_track);
      cfg.n_chains = fit_chains;
      cfg.output_dir = fit_out;
      sv::cmd_fit(cfg);
    } else if (*report) {
      cfg.command = sv::Command::kReport;
      cfg.chain_file = rep_chain;
      if (!rep_compare.empty()) cfg.compare_file = rep_compare;
      cfg.max_lag = rep_max_lag;
      cfg.output_dir = rep_out;
      sv::cmd_report(cfg);
    }
  } catch (const sv::DegeneracyError& e) {
    std::fprintf(stderr, "degeneracy: %s\n", e.what());
    return 3;
  } catch (const sv::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
