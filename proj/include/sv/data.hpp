#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sv/model.hpp"
#include "sv/samplers.hpp"

namespace sv {

struct PriceSeries {
  std::vector<std::string> dates;  // empty when the file has no date column
  std::vector<double> prices;
};

// Generation accepts sigma_eta2 == 0 (degenerate flat path h == mu).
struct SyntheticSpec {
  Params params{};
  std::size_t n = 0;
  std::uint64_t seed = 1;
};

struct SyntheticSeries {
  std::vector<double> y;       // observed return series
  std::vector<double> h_true;  // latent log-variance path
};

// Simulates the model forward: h_1 from the stationary law
// N(mu, sigma_eta2/(1-phi^2)), then h_t = mu + phi (h_{t-1}-mu) + eta_t and
// y_t = exp(h_t/2) eps_t. Draw order per site: eta_t first, then eps_t
// (h_1 uses the stationary-scaled normal in place of eta_1). Deterministic
// per seed.
SyntheticSeries generate_sv_series(const SyntheticSpec& spec);

// r_i = 100 * (ln(p_i/p_{i-1}) - sbar), sbar the mean log increment.
// Output length = input - 1; output mean is 0 up to roundoff.
std::vector<double> prices_to_returns(const PriceSeries& prices);

// Comma-separated file with a header; accepts (date, close) columns in
// either order or a single (close) column, case-insensitive names. Skips
// blank lines; rejects non-numeric or nonpositive closes naming the line.
PriceSeries read_price_csv(const std::string& path);

// Writes a header and one row per price (date column included only when
// dates are present), full double precision.
void write_price_csv(const PriceSeries& prices, const std::string& path);

// Header "iteration,phi,mu,sigma_eta2,accept,delta_h,h_<i>..." with one h
// column per tracked latent labeled by its 1-based index; accept written as
// 0/1; 17 significant digits throughout. samples must be nonempty and
// tracked_latents must match the per-sample tracked_h length.
void write_chain_csv(std::span<const ChainSample> samples,
                     std::span<const std::size_t> tracked_latents,
                     const std::string& path);

// Numeric table read back from a chain (or any all-numeric) CSV.
struct ChainTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;  // one vector per column

  std::size_t rows() const { return columns.empty() ? 0 : values[0].size(); }
};

ChainTable read_chain_csv(const std::string& path);

// Single-column numeric CSV (header + values), full double precision.
void write_series_csv(const std::string& path, const std::string& column,
                      std::span<const double> values);

}  // namespace sv
