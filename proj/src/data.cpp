#include "sv/data.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sv/errors.hpp"
#include "sv/rng.hpp"

namespace sv {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& field, long line_no,
                    const char* what) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw DataError("line " + std::to_string(line_no) + ": non-numeric " +
                    what + " '" + field + "'");
  return v;
}

FILE* open_for_write(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw DataError("cannot open for writing: " + path);
  return f;
}

}  // namespace

SyntheticSeries generate_sv_series(const SyntheticSpec& spec) {
  const Params& p = spec.params;
  if (spec.n < 1) throw std::invalid_argument("generate_sv_series: n >= 1 required");
  if (!std::isfinite(p.mu) || !std::isfinite(p.phi) ||
      !std::isfinite(p.sigma_eta2) || std::fabs(p.phi) >= 1.0 ||
      p.sigma_eta2 < 0.0)
    throw std::invalid_argument("generate_sv_series: invalid parameters");

  RngStream rng(spec.seed);
  SyntheticSeries out;
  out.y.resize(spec.n);
  out.h_true.resize(spec.n);
  const double sd_stat = std::sqrt(p.sigma_eta2 / (1.0 - p.phi * p.phi));
  const double sd_eta = std::sqrt(p.sigma_eta2);
  out.h_true[0] = p.mu + sd_stat * rng.normal();
  out.y[0] = std::exp(0.5 * out.h_true[0]) * rng.normal();
  for (std::size_t t = 1; t < spec.n; ++t) {
    out.h_true[t] =
        p.mu + p.phi * (out.h_true[t - 1] - p.mu) + sd_eta * rng.normal();
    out.y[t] = std::exp(0.5 * out.h_true[t]) * rng.normal();
  }
  return out;
}

std::vector<double> prices_to_returns(const PriceSeries& prices) {
  const std::size_t n = prices.prices.size();
  if (n < 2) throw DataError("prices_to_returns: need at least 2 prices");
  for (double p : prices.prices)
    if (!(p > 0.0) || !std::isfinite(p))
      throw DataError("prices_to_returns: nonpositive price");

  std::vector<double> s(n - 1);
  double sbar = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    s[i - 1] = std::log(prices.prices[i] / prices.prices[i - 1]);
    sbar += s[i - 1];
  }
  sbar /= static_cast<double>(n - 1);
  std::vector<double> r(n - 1);
  for (std::size_t i = 0; i < n - 1; ++i) r[i] = 100.0 * (s[i] - sbar);
  return r;
}

PriceSeries read_price_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);

  PriceSeries out;
  std::string line;
  long line_no = 0;
  long close_col = -1, date_col = -1;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::vector<std::string> fields = split_csv(stripped);
    if (!header_seen) {
      header_seen = true;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string name = lower(fields[i]);
        if (name == "close") close_col = static_cast<long>(i);
        if (name == "date") date_col = static_cast<long>(i);
      }
      if (close_col < 0)
        throw DataError(path + ": header has no 'close' column");
      if (date_col < 0 && fields.size() == 2)
        date_col = 1 - close_col;  // two columns: the other one is the date
      continue;
    }
    if (static_cast<long>(fields.size()) <= close_col)
      throw DataError("line " + std::to_string(line_no) + ": missing close field");
    const double close = parse_double(fields[close_col], line_no, "close");
    if (!(close > 0.0))
      throw DataError("line " + std::to_string(line_no) + ": nonpositive close");
    out.prices.push_back(close);
    if (date_col >= 0 && static_cast<long>(fields.size()) > date_col)
      out.dates.push_back(fields[date_col]);
  }
  if (!header_seen) throw DataError(path + ": empty file");
  if (out.prices.size() < 2)
    throw DataError(path + ": need at least 2 data rows");
  return out;
}

void write_price_csv(const PriceSeries& prices, const std::string& path) {
  const bool dated = !prices.dates.empty();
  if (dated && prices.dates.size() != prices.prices.size())
    throw std::invalid_argument("write_price_csv: dates/prices length mismatch");
  FILE* f = open_for_write(path);
  std::fputs(dated ? "date,close\n" : "close\n", f);
  char buf[64];
  for (std::size_t i = 0; i < prices.prices.size(); ++i) {
    if (dated) {
      std::fputs(prices.dates[i].c_str(), f);
      std::fputc(',', f);
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", prices.prices[i]);
    std::fputs(buf, f);
  }
  std::fclose(f);
}

void write_chain_csv(std::span<const ChainSample> samples,
                     std::span<const std::size_t> tracked_latents,
                     const std::string& path) {
  if (samples.empty())
    throw std::invalid_argument("write_chain_csv: empty sample sequence");
  for (const ChainSample& s : samples)
    if (s.tracked_h.size() != tracked_latents.size())
      throw std::invalid_argument("write_chain_csv: tracked_h length mismatch");

  FILE* f = open_for_write(path);
  std::fputs("iteration,phi,mu,sigma_eta2,accept,delta_h", f);
  for (std::size_t idx : tracked_latents)
    std::fprintf(f, ",h_%zu", idx);
  std::fputc('\n', f);
  char buf[128];
  for (const ChainSample& s : samples) {
    std::fprintf(f, "%ld", s.iteration);
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%d,%.17g",
                  s.params.phi, s.params.mu, s.params.sigma_eta2,
                  s.accept_volatility ? 1 : 0, s.delta_h);
    std::fputs(buf, f);
    for (double h : s.tracked_h) {
      std::snprintf(buf, sizeof buf, ",%.17g", h);
      std::fputs(buf, f);
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

ChainTable read_chain_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);

  ChainTable table;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::vector<std::string> fields = split_csv(stripped);
    if (table.columns.empty()) {
      table.columns = fields;
      table.values.resize(fields.size());
      continue;
    }
    if (fields.size() != table.columns.size())
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(table.columns.size()) + " fields, got " +
                      std::to_string(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i)
      table.values[i].push_back(parse_double(fields[i], line_no, "value"));
  }
  if (table.columns.empty()) throw DataError(path + ": empty file");
  if (table.rows() == 0) throw DataError(path + ": no data rows");
  return table;
}

void write_series_csv(const std::string& path, const std::string& column,
                      std::span<const double> values) {
  FILE* f = open_for_write(path);
  std::fprintf(f, "%s\n", column.c_str());
  char buf[64];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    std::fputs(buf, f);
  }
  std::fclose(f);
}

}  // namespace sv
