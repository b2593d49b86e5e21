#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sv {

// Stochastic volatility model
//   y_t = exp(h_t / 2) eps_t,            eps_t ~ N(0,1)
//   h_t = mu + phi (h_{t-1} - mu) + eta_t, eta_t ~ N(0, sigma_eta2)
// with |phi| < 1 and h_1 drawn from the stationary law
// N(mu, sigma_eta2 / (1 - phi^2)).

struct Params {
  double mu = 0.0;
  double phi = 0.5;
  double sigma_eta2 = 1.0;
};

// Finite fields, |phi| < 1, sigma_eta2 > 0.
bool params_valid(const Params& p);

// Sufficient statistics of the parameter conditionals given the latent path:
//   a : half sum of squared AR(1) residuals (h_1 term weighted by 1-phi^2)
//   b : precision weight of the mu conditional
//   c : location weight of the mu conditional   (mean = c/b)
//   d : precision weight of the phi proposal
//   e : location weight of the phi proposal     (mean = e/d)
struct ConditionalStats {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
};

// Negative log density of the latent path given data, up to a constant:
//   sum_t [ h_t/2 + (y_t^2/2) e^{-h_t} ]
//   + (h_1 - mu)^2 (1 - phi^2) / (2 sigma_eta2)
//   + sum_{t>=2} [ h_t - mu - phi (h_{t-1} - mu) ]^2 / (2 sigma_eta2)
// Throws std::invalid_argument on empty/mismatched/non-finite input or
// invalid parameters.
double potential(const Params& p, std::span<const double> h,
                 std::span<const double> y);

// dU/dh_t written into grad (same length as h). Errors as potential().
void potential_gradient(const Params& p, std::span<const double> h,
                        std::span<const double> y, std::span<double> grad);
std::vector<double> potential_gradient(const Params& p,
                                       std::span<const double> h,
                                       std::span<const double> y);

// Kinetic term plus potential: H = (1/2) sum_i p_i^2 + U(h).
// Throws on length mismatch between momenta and h.
double hamiltonian(std::span<const double> momenta, std::span<const double> h,
                   const Params& p, std::span<const double> y);

// Accumulates the conditional statistics from the current path.
// Requires at least one transition (h.size() >= 2).
ConditionalStats conditional_stats(const Params& p, std::span<const double> h);

// The h_t-dependent part of the potential: measurement term at site t plus
// the AR(1) residual terms touching h_t. Differences of this function under
// a single-site move equal differences of the full potential.
double local_potential(const Params& p, std::span<const double> h,
                       std::span<const double> y, std::size_t t);

// Unchecked cores for integrator hot loops; callers validate inputs once
// up front. Same formulas as the checked wrappers above.
namespace detail {
double potential_unchecked(const Params& p, std::span<const double> h,
                           std::span<const double> y);
void gradient_unchecked(const Params& p, std::span<const double> h,
                        std::span<const double> y, std::span<double> grad);
double local_potential_unchecked(const Params& p, std::span<const double> h,
                                 std::span<const double> y, std::size_t t);
}  // namespace detail

}  // namespace sv
