#include "sv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sv/errors.hpp"

namespace sv {

namespace {

// Centered copy plus biased (1/N) variance; the ACF and tau_int formulas
// are evaluated on centered data to avoid cancellation in x.x - xbar^2.
struct Centered {
  std::vector<double> z;
  double var = 0.0;
};

bool all_equal(std::span<const double> x) {
  for (double v : x)
    if (v != x[0]) return false;
  return true;
}

Centered center(std::span<const double> x) {
  const std::size_t n = x.size();
  Centered c;
  c.z.resize(n);
  if (all_equal(x)) return c;  // exactly constant: variance is 0, not roundoff
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    c.z[j] = x[j] - mean;
    ss += c.z[j] * c.z[j];
  }
  c.var = ss / static_cast<double>(n);
  return c;
}

double lag_product(std::span<const double> z, std::size_t t) {
  const std::size_t n = z.size();
  double dot = 0.0;
  for (std::size_t j = 0; j + t < n; ++j) dot += z[j] * z[j + t];
  return dot;
}

}  // namespace

AcfCurve acf(std::span<const double> series, int max_lag) {
  const std::size_t n = series.size();
  if (n < 2) throw std::invalid_argument("acf: need at least 2 points");
  if (max_lag < 1 || static_cast<std::size_t>(max_lag) >= n)
    throw std::invalid_argument("acf: require 1 <= max_lag < N");
  const Centered c = center(series);
  if (!(c.var > 0.0)) throw DegeneracyError("acf: zero-variance series");

  AcfCurve out;
  out.lags.resize(static_cast<std::size_t>(max_lag) + 1);
  out.values.resize(static_cast<std::size_t>(max_lag) + 1);
  out.lags[0] = 0;
  out.values[0] = 1.0;
  for (int t = 1; t <= max_lag; ++t) {
    out.lags[t] = t;
    const double cov =
        lag_product(c.z, static_cast<std::size_t>(t)) /
        static_cast<double>(n - static_cast<std::size_t>(t));
    out.values[t] = cov / c.var;
  }
  return out;
}

TauIntEstimate tau_int(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 100) throw std::invalid_argument("tau_int: need at least 100 points");
  const Centered c = center(series);
  if (!(c.var > 0.0)) throw DegeneracyError("tau_int: zero-variance series");
  const std::span<const double> z(c.z);

  // Self-consistent window: accumulate tau(W) and stop at the first
  // W >= 6 tau(W); cap at N/10.
  const int cap = static_cast<int>(n / 10);
  TauIntEstimate est;
  double tau = 0.5;
  int window = 0;
  for (int t = 1; t <= cap; ++t) {
    const double cov = lag_product(z, static_cast<std::size_t>(t)) /
                       static_cast<double>(n - static_cast<std::size_t>(t));
    tau += cov / c.var;
    if (static_cast<double>(t) >= 6.0 * tau) {
      window = t;
      break;
    }
  }
  if (window == 0) {
    window = cap;
    est.truncated = true;
  }
  est.window = window;
  est.tau = std::max(0.5, tau);

  // Binned jackknife of the windowed estimator. Lag pairs are charged to
  // the bin of their leading index; the last bin absorbs the tail.
  const std::size_t bin_size = std::max<std::size_t>(
      100, 4 * static_cast<std::size_t>(std::ceil(est.tau)));
  const std::size_t m = n / bin_size;
  if (m < 2) {
    est.error = 0.0;
    return est;
  }
  const std::size_t w = static_cast<std::size_t>(window);
  std::vector<double> bin_p(m * w, 0.0);  // bin-local sum z_j z_{j+t}
  std::vector<double> bin_q(m * w, 0.0);  // bin-local sum z_j + z_{j+t}
  std::vector<double> bin_s(m, 0.0), bin_ss(m, 0.0);
  auto bin_of = [&](std::size_t j) { return std::min(j / bin_size, m - 1); };
  auto bin_end = [&](std::size_t k) {
    return k + 1 == m ? n : (k + 1) * bin_size;
  };
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = bin_of(j);
    bin_s[k] += z[j];
    bin_ss[k] += z[j] * z[j];
  }
  for (std::size_t t = 1; t <= w; ++t) {
    for (std::size_t j = 0; j + t < n; ++j) {
      const std::size_t k = bin_of(j);
      bin_p[k * w + (t - 1)] += z[j] * z[j + t];
      bin_q[k * w + (t - 1)] += z[j] + z[j + t];
    }
  }
  double s_tot = 0.0, ss_tot = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    s_tot += bin_s[k];
    ss_tot += bin_ss[k];
  }
  std::vector<double> p_tot(w, 0.0), q_tot(w, 0.0);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t t = 0; t < w; ++t) {
      p_tot[t] += bin_p[k * w + t];
      q_tot[t] += bin_q[k * w + t];
    }

  std::vector<double> reps(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t start = k * bin_size;
    const std::size_t size_k = bin_end(k) - start;
    const double nk = static_cast<double>(n - size_k);
    const double mean_k = (s_tot - bin_s[k]) / nk;
    const double var_k = (ss_tot - bin_ss[k]) / nk - mean_k * mean_k;
    double tau_k = 0.5;
    if (var_k > 0.0) {
      for (std::size_t t = 1; t <= w; ++t) {
        const std::size_t full_cnt = n - t;
        const std::size_t in_bin =
            std::min(bin_end(k), n - t) > start
                ? std::min(bin_end(k), n - t) - start
                : 0;
        const double cnt = static_cast<double>(full_cnt - in_bin);
        if (cnt <= 0.0) continue;
        const double p = p_tot[t - 1] - bin_p[k * w + (t - 1)];
        const double q = q_tot[t - 1] - bin_q[k * w + (t - 1)];
        const double cov = (p - mean_k * q + cnt * mean_k * mean_k) / cnt;
        tau_k += cov / var_k;
      }
    }
    reps[k] = tau_k;
  }
  double rep_mean = 0.0;
  for (double r : reps) rep_mean += r;
  rep_mean /= static_cast<double>(m);
  double dev = 0.0;
  for (double r : reps) dev += (r - rep_mean) * (r - rep_mean);
  est.error = std::sqrt(dev * static_cast<double>(m - 1) /
                        static_cast<double>(m));
  return est;
}

double jackknife_error(std::span<const double> series, std::size_t bin_size) {
  const std::size_t n = series.size();
  if (bin_size < 1) throw std::invalid_argument("jackknife_error: bin_size >= 1");
  const std::size_t m = n / bin_size;
  if (m < 2)
    throw std::invalid_argument("jackknife_error: need at least 2 full bins");

  std::vector<double> bins(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double s = 0.0;
    for (std::size_t j = k * bin_size; j < (k + 1) * bin_size; ++j)
      s += series[j];
    bins[k] = s / static_cast<double>(bin_size);
  }
  double total = 0.0;
  for (double b : bins) total += b;
  const double mean = total / static_cast<double>(m);
  double dev = 0.0;
  for (double b : bins) {
    const double loo = (total - b) / static_cast<double>(m - 1);
    dev += (loo - mean) * (loo - mean);
  }
  return std::sqrt(dev * static_cast<double>(m - 1) / static_cast<double>(m));
}

SummaryStats summarize(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 100) throw std::invalid_argument("summarize: need at least 100 points");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  SummaryStats s;
  if (all_equal(series)) {  // constant chain
    s.mean = series[0];
    s.degenerate = true;
    s.two_tau = 1.0;
    return s;
  }
  s.mean = mean;
  double ssd = 0.0;
  for (double v : series) ssd += (v - mean) * (v - mean);
  if (!(ssd > 0.0)) {  // distinct values whose spread still underflows
    s.degenerate = true;
    s.two_tau = 1.0;
    return s;
  }
  s.sd = std::sqrt(ssd / static_cast<double>(n - 1));
  const TauIntEstimate t = tau_int(series);
  s.two_tau = 2.0 * t.tau;
  s.two_tau_error = 2.0 * t.error;
  s.window = t.window;
  s.truncated = t.truncated;
  s.se = s.sd * std::sqrt(s.two_tau / static_cast<double>(n));
  return s;
}

}  // namespace sv
