#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sv {

// Normalised autocorrelation function
//   ACF(t) = [ (1/(N-t)) sum_{j=1..N-t} (x_j - xbar)(x_{j+t} - xbar) ] / var
// with xbar and var the full-series mean and biased (1/N) variance.
// values[0] == 1 exactly. window is the tau_int truncation lag when known
// (0 when produced directly by acf()).
struct AcfCurve {
  std::vector<int> lags;
  std::vector<double> values;
  int window = 0;
};

// Integrated autocorrelation time tau = 1/2 + sum_{t=1..W} ACF(t) with the
// self-consistent window W = smallest W >= 6 tau(W), capped at N/10
// (truncated flag set when the cap binds). The reported tau is floored at
// 0.5, the independent-sample limit. error is a binned jackknife over the
// windowed estimator.
struct TauIntEstimate {
  double tau = 0.5;
  double error = 0.0;
  int window = 0;
  bool truncated = false;
};

struct SummaryStats {
  double mean = 0.0;
  double sd = 0.0;       // unbiased standard deviation
  double se = 0.0;       // sd * sqrt(2 tau / N)
  double two_tau = 1.0;
  double two_tau_error = 0.0;
  int window = 0;
  bool degenerate = false;  // zero-variance series
  bool truncated = false;
};

// Throws std::invalid_argument unless N >= 2 and 1 <= max_lag < N;
// DegeneracyError on a zero-variance series.
AcfCurve acf(std::span<const double> series, int max_lag);

// Requires N >= 100. Jackknife bin size is max(100, 4 ceil(tau)); with
// fewer than two bins the error is reported as 0.
TauIntEstimate tau_int(std::span<const double> series);

// Bins the first m = floor(N/bin_size) * bin_size points into m full bins,
// forms leave-one-bin-out means and returns
//   sqrt( (m-1)/m * sum_k (mean_k - mean)^2 ).
// With bin_size = 1 this reproduces the naive standard error of the mean.
double jackknife_error(std::span<const double> series, std::size_t bin_size);

// Mean, sd, autocorrelation-corrected standard error and 2 tau for a chain
// series (N >= 100). A zero-variance series yields sd = se = 0 with the
// degenerate flag set and two_tau reported at the independent-sample value.
SummaryStats summarize(std::span<const double> series);

}  // namespace sv
