#include "sv/experiment.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "sv/diagnostics.hpp"
#include "sv/errors.hpp"

namespace sv {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory: " + dir);
}

std::uint64_t fnv1a(std::span<const double> values) {
  std::uint64_t h = 1469598103934665603ull;
  for (double v : values) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::vector<double> resolve_returns(const ExperimentConfig& cfg) {
  if (cfg.data_path.has_value() == cfg.synthetic.has_value())
    throw std::invalid_argument(
        "fit: exactly one of a data file or a synthetic spec must be given");
  if (cfg.data_path) {
    const PriceSeries prices = read_price_csv(*cfg.data_path);
    return prices_to_returns(prices);
  }
  return generate_sv_series(*cfg.synthetic).y;
}

struct QuantitySummary {
  std::string name;
  SummaryStats stats{};
  bool has_acf = false;
  AcfCurve curve{};
};

std::vector<QuantitySummary> summarize_table(const ChainTable& table,
                                             int max_lag) {
  // Report parameters first, then tracked latents, skipping bookkeeping
  // columns.
  std::vector<std::size_t> order;
  for (const char* want : {"phi", "mu", "sigma_eta2"})
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      if (table.columns[i] == want) order.push_back(i);
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    if (table.columns[i].rfind("h_", 0) == 0) order.push_back(i);
  if (order.empty())
    throw DataError("report: no phi/mu/sigma_eta2/h_* columns in chain file");

  std::vector<QuantitySummary> out;
  for (std::size_t i : order) {
    QuantitySummary q;
    q.name = table.columns[i];
    const std::vector<double>& x = table.values[i];
    q.stats = summarize(x);
    if (!q.stats.degenerate) {
      const int lag = std::min<int>(max_lag, static_cast<int>(x.size()) - 1);
      q.curve = acf(x, lag);
      q.curve.window = q.stats.window;
      q.has_acf = true;
    }
    out.push_back(std::move(q));
  }
  return out;
}

void write_report_row(FILE* f, const QuantitySummary& q) {
  if (q.stats.degenerate) {
    std::fprintf(f, "%-12s %13.6g %12s %12s %12s %10s  degenerate\n",
                 q.name.c_str(), q.stats.mean, "0", "0", "-", "-");
    return;
  }
  char tau[32], tau_err[32];
  std::snprintf(tau, sizeof tau, "%.6g", q.stats.two_tau);
  std::snprintf(tau_err, sizeof tau_err, "%.2g", q.stats.two_tau_error);
  std::fprintf(f, "%-12s %13.6g %12.6g %12.6g %12s %10s %s\n", q.name.c_str(),
               q.stats.mean, q.stats.sd, q.stats.se, tau, tau_err,
               q.stats.truncated ? " window-capped" : "");
}

void write_summary_csv_row(FILE* f, const QuantitySummary& q) {
  std::fprintf(f, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d\n",
               q.name.c_str(), q.stats.mean, q.stats.sd, q.stats.se,
               q.stats.two_tau, q.stats.two_tau_error, q.stats.window,
               q.stats.truncated ? 1 : 0, q.stats.degenerate ? 1 : 0);
}

void write_acf_csv(const std::string& path,
                   const std::vector<const QuantitySummary*>& qs,
                   const std::vector<std::string>& labels) {
  std::size_t max_rows = 0;
  for (const QuantitySummary* q : qs)
    if (q->has_acf) max_rows = std::max(max_rows, q->curve.values.size());
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw DataError("cannot open for writing: " + path);
  std::fputs("lag", f);
  for (std::size_t i = 0; i < qs.size(); ++i)
    if (qs[i]->has_acf) std::fprintf(f, ",%s", labels[i].c_str());
  std::fputc('\n', f);
  for (std::size_t row = 0; row < max_rows; ++row) {
    std::fprintf(f, "%zu", row);
    for (const QuantitySummary* q : qs) {
      if (!q->has_acf) continue;
      if (row < q->curve.values.size())
        std::fprintf(f, ",%.17g", q->curve.values[row]);
      else
        std::fputs(",", f);
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

struct FitOutcome {
  ChainResult result;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

void write_manifest(const std::string& path, const ExperimentConfig& cfg,
                    std::size_t n_data, std::uint64_t checksum,
                    const FitOutcome& fit) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw DataError("cannot open for writing: " + path);
  const ChainConfig& c = cfg.chain;
  const bool hmc = c.algorithm == Algorithm::kHmc;
  std::fprintf(f, "command fit\n");
  std::fprintf(f, "algorithm %s\n", hmc ? "hmc" : "metropolis");
  std::fprintf(f, "seed %llu\n", static_cast<unsigned long long>(fit.seed));
  std::fprintf(f, "n_data %zu\n", n_data);
  std::fprintf(f, "data_checksum 0x%016llx\n",
               static_cast<unsigned long long>(checksum));
  std::fprintf(f, "burn_in %ld\n", c.burn_in);
  std::fprintf(f, "n_record %ld\n", c.n_record);
  std::fprintf(f, "thin %ld\n", c.thin);
  if (hmc) {
    std::fprintf(f, "trajectory_length %.17g\n", c.hmc.trajectory_length);
    std::fprintf(f, "target_acceptance %.17g\n", c.hmc.target_acceptance);
    std::fprintf(f, "tuned_step_size %.17g\n", fit.result.stats.tuned_step);
    std::fprintf(f, "tuned_n_steps %d\n", fit.result.stats.tuned_n_steps);
  } else {
    std::fprintf(f, "target_acceptance %.17g\n", c.metro.target_acceptance);
    std::fprintf(f, "tuned_delta %.17g\n", fit.result.stats.tuned_step);
  }
  std::fprintf(f, "final_acceptance %.17g\n", fit.result.stats.accept_rate);
  std::fprintf(f, "phi_skips %ld\n", fit.result.stats.phi_skips);
  std::fputs("tracked ", f);
  for (std::size_t i = 0; i < c.tracked_latents.size(); ++i)
    std::fprintf(f, "%s%zu", i ? "," : "", c.tracked_latents[i]);
  std::fputc('\n', f);
  std::fprintf(f, "wall_time_s %.3f\n", fit.wall_seconds);
  std::fclose(f);
}

}  // namespace

void cmd_synth(const ExperimentConfig& cfg) {
  if (!cfg.synthetic)
    throw std::invalid_argument("synth: synthetic spec required");
  ensure_dir(cfg.output_dir);
  const SyntheticSeries series = generate_sv_series(*cfg.synthetic);
  const std::string returns_path = join(cfg.output_dir, "returns.csv");
  const std::string latent_path = join(cfg.output_dir, "latent.csv");
  write_series_csv(returns_path, "y", series.y);
  write_series_csv(latent_path, "h_true", series.h_true);
  const SyntheticSpec& s = *cfg.synthetic;
  std::printf("synth: n=%zu mu=%g phi=%g sigma_eta2=%g seed=%llu -> %s, %s\n",
              s.n, s.params.mu, s.params.phi, s.params.sigma_eta2,
              static_cast<unsigned long long>(s.seed), returns_path.c_str(),
              latent_path.c_str());
}

void cmd_fit(const ExperimentConfig& cfg) {
  if (cfg.n_chains < 1)
    throw std::invalid_argument("fit: n_chains must be >= 1");
  if (cfg.chain.n_record < 1)
    throw std::invalid_argument("fit: at least one recorded sample required");
  ensure_dir(cfg.output_dir);
  const std::vector<double> y = resolve_returns(cfg);
  const std::uint64_t checksum = fnv1a(y);

  const int k = cfg.n_chains;
  std::vector<FitOutcome> outcomes(k);
  std::vector<std::exception_ptr> errors(k);
  auto run_one = [&](int i) {
    try {
      ChainConfig chain = cfg.chain;
      chain.seed = cfg.chain.seed + static_cast<std::uint64_t>(i);
      outcomes[i].seed = chain.seed;
      const auto start = std::chrono::steady_clock::now();
      outcomes[i].result = run_chain(y, chain);
      outcomes[i].wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        start)
              .count();
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (k == 1) {
    run_one(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(k);
    for (int i = 0; i < k; ++i) threads.emplace_back(run_one, i);
    for (std::thread& t : threads) t.join();
  }
  for (int i = 0; i < k; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);

  for (int i = 0; i < k; ++i) {
    const std::string suffix = k == 1 ? "" : "_" + std::to_string(i + 1);
    const std::string chain_path = join(cfg.output_dir, "chain" + suffix + ".csv");
    write_chain_csv(outcomes[i].result.samples, cfg.chain.tracked_latents,
                    chain_path);
    write_manifest(join(cfg.output_dir, "manifest" + suffix + ".txt"), cfg,
                   y.size(), checksum, outcomes[i]);
    std::printf("fit: chain %d/%d acceptance %.3f -> %s\n", i + 1, k,
                outcomes[i].result.stats.accept_rate, chain_path.c_str());
  }
}

void cmd_report(const ExperimentConfig& cfg) {
  if (cfg.chain_file.empty())
    throw std::invalid_argument("report: chain file required");
  if (cfg.max_lag < 1)
    throw std::invalid_argument("report: max_lag must be >= 1");
  ensure_dir(cfg.output_dir);

  const ChainTable table_a = read_chain_csv(cfg.chain_file);
  const std::vector<QuantitySummary> qa = summarize_table(table_a, cfg.max_lag);

  const std::string report_path = join(cfg.output_dir, "report.txt");
  const std::string summary_path = join(cfg.output_dir, "summary.csv");
  const std::string acf_path = join(cfg.output_dir, "acf.csv");

  FILE* rep = std::fopen(report_path.c_str(), "w");
  if (!rep) throw DataError("cannot open for writing: " + report_path);
  FILE* sum = std::fopen(summary_path.c_str(), "w");
  if (!sum) {
    std::fclose(rep);
    throw DataError("cannot open for writing: " + summary_path);
  }

  if (!cfg.compare_file) {
    std::fprintf(rep, "chain: %s (%zu samples)\n\n", cfg.chain_file.c_str(),
                 table_a.rows());
    std::fprintf(rep, "%-12s %13s %12s %12s %12s %10s\n", "quantity", "mean",
                 "sd", "se", "2tau_int", "err");
    std::fputs(
        "quantity,mean,sd,se,two_tau,two_tau_error,window,truncated,"
        "degenerate\n",
        sum);
    for (const QuantitySummary& q : qa) {
      write_report_row(rep, q);
      write_summary_csv_row(sum, q);
    }
    std::vector<const QuantitySummary*> qs;
    std::vector<std::string> labels;
    for (const QuantitySummary& q : qa) {
      qs.push_back(&q);
      labels.push_back(q.name);
    }
    write_acf_csv(acf_path, qs, labels);
  } else {
    const ChainTable table_b = read_chain_csv(*cfg.compare_file);
    const std::vector<QuantitySummary> qb =
        summarize_table(table_b, cfg.max_lag);
    std::fprintf(rep, "chain a: %s (%zu samples)\nchain b: %s (%zu samples)\n\n",
                 cfg.chain_file.c_str(), table_a.rows(),
                 cfg.compare_file->c_str(), table_b.rows());
    std::fprintf(rep, "%-12s %13s %12s %12s | %13s %12s %12s | %12s\n",
                 "quantity", "mean_a", "se_a", "2tau_a", "mean_b", "se_b",
                 "2tau_b", "2tau_b/2tau_a");
    std::fputs(
        "quantity,mean_a,sd_a,se_a,two_tau_a,two_tau_error_a,mean_b,sd_b,"
        "se_b,two_tau_b,two_tau_error_b,two_tau_ratio\n",
        sum);
    for (const QuantitySummary& a : qa) {
      const QuantitySummary* b = nullptr;
      for (const QuantitySummary& q : qb)
        if (q.name == a.name) b = &q;
      if (!b) continue;
      const bool ok = !a.stats.degenerate && !b->stats.degenerate &&
                      a.stats.two_tau > 0.0;
      const double ratio = ok ? b->stats.two_tau / a.stats.two_tau : 0.0;
      char ratio_txt[32];
      if (ok)
        std::snprintf(ratio_txt, sizeof ratio_txt, "%.6g", ratio);
      else
        std::snprintf(ratio_txt, sizeof ratio_txt, "-");
      std::fprintf(rep, "%-12s %13.6g %12.6g %12.6g | %13.6g %12.6g %12.6g | %12s\n",
                   a.name.c_str(), a.stats.mean, a.stats.se, a.stats.two_tau,
                   b->stats.mean, b->stats.se, b->stats.two_tau, ratio_txt);
      std::fprintf(sum,
                   "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                   "%.17g,%.17g\n",
                   a.name.c_str(), a.stats.mean, a.stats.sd, a.stats.se,
                   a.stats.two_tau, a.stats.two_tau_error, b->stats.mean,
                   b->stats.sd, b->stats.se, b->stats.two_tau,
                   b->stats.two_tau_error, ratio);
    }
    std::vector<const QuantitySummary*> qs;
    std::vector<std::string> labels;
    for (const QuantitySummary& q : qa) {
      qs.push_back(&q);
      labels.push_back(q.name + "_a");
    }
    for (const QuantitySummary& q : qb) {
      qs.push_back(&q);
      labels.push_back(q.name + "_b");
    }
    write_acf_csv(acf_path, qs, labels);
  }
  std::fclose(sum);
  std::fclose(rep);

  // Echo the text report.
  std::FILE* in = std::fopen(report_path.c_str(), "r");
  if (in) {
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, in)) > 0)
      std::fwrite(buf, 1, got, stdout);
    std::fclose(in);
  }
}

}  // namespace sv
