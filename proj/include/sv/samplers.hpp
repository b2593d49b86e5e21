#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sv/model.hpp"
#include "sv/rng.hpp"

namespace sv {

enum class Algorithm { kHmc, kMetropolis };

// Leapfrog integration of the volatility Hamiltonian. The invariant
// n_steps * step_size == trajectory_length is maintained by the tuner and
// checked (to 1e-12) wherever a trajectory is run.
struct HmcConfig {
  double trajectory_length = 1.0;
  int n_steps = 10;
  double step_size = 0.1;
  double target_acceptance = 0.65;
};

// Site-by-site random walk h_t -> h_t + delta * (r - 1/2), r uniform [0,1).
struct MetroConfig {
  double delta = 1.0;
  double target_acceptance = 0.5;
};

struct ChainConfig {
  Algorithm algorithm = Algorithm::kHmc;
  long burn_in = 10000;
  long n_record = 200000;
  long thin = 1;
  Params init_params{};
  std::uint64_t seed = 1;
  HmcConfig hmc{};
  MetroConfig metro{};
  std::vector<std::size_t> tracked_latents;  // 1-based indices into h
};

struct ChainSample {
  long iteration = 0;  // post-burn-in iteration index (1-based)
  Params params{};
  std::vector<double> tracked_h;
  bool accept_volatility = false;  // Metropolis: true iff any site moved
  double delta_h = 0.0;            // HMC energy change; 0 for Metropolis
};

struct RunStats {
  double accept_rate = 0.0;   // post-burn-in mean (trajectory flag or site fraction)
  double tuned_step = 0.0;    // final step_size (HMC) or delta (Metropolis)
  int tuned_n_steps = 0;      // final leapfrog step count (HMC only)
  long phi_skips = 0;         // iterations whose phi update was skipped (d <= 0)
};

struct ChainResult {
  std::vector<ChainSample> samples;
  RunStats stats{};
};

// --- parameter updates (one Gibbs cycle member each) ---------------------

// Inverse gamma with density ~ x^{-shape-1} exp(-scale/x).
double draw_inverse_gamma(double shape, double scale, RngStream& rng);

// sigma_eta2 | h, mu, phi  ~  InvGamma(n/2, a).
// Throws DegeneracyError when the residual sum a vanishes.
Params update_sigma_eta2(const Params& p, std::span<const double> h,
                         RngStream& rng);

// mu | h, phi, sigma_eta2  ~  N(c/b, sigma_eta2/b).
Params update_mu(const Params& p, std::span<const double> h, RngStream& rng);

struct PhiUpdate {
  Params params{};
  bool accepted = false;
  bool skipped = false;  // proposal precision d <= 0: update skipped
};

// phi | h, mu, sigma_eta2: propose from N(e/d, sigma_eta2/d), reject outside
// (-1,1), otherwise accept with probability phi_accept_prob(old, new).
PhiUpdate update_phi(const Params& p, std::span<const double> h, RngStream& rng);

// min{ sqrt((1 - phi_new^2) / (1 - phi_old^2)), 1 }; zero outside (-1,1).
double phi_accept_prob(double phi_old, double phi_new);

// --- volatility updates ---------------------------------------------------

// n_steps elementary leapfrog steps (half drift, kick, half drift) with the
// supplied gradient callback grad(h, out). Returns false as soon as the
// state leaves the finite range (divergence); h and p are then unspecified.
template <typename GradFn>
bool leapfrog_steps(std::span<double> h, std::span<double> p, double step_size,
                    int n_steps, GradFn&& grad, std::span<double> grad_buf) {
  const std::size_t n = h.size();
  const double half = 0.5 * step_size;
  for (int s = 0; s < n_steps; ++s) {
    for (std::size_t i = 0; i < n; ++i) h[i] += half * p[i];
    grad(std::span<const double>(h.data(), n), grad_buf);
    for (std::size_t i = 0; i < n; ++i) p[i] -= step_size * grad_buf[i];
    for (std::size_t i = 0; i < n; ++i) h[i] += half * p[i];
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i)
      finite = finite && std::isfinite(h[i]) && std::isfinite(p[i]);
    if (!finite) return false;
  }
  return true;
}

// Leapfrog bound to the volatility potential gradient; integrates (h, p) in
// place. Returns false on divergence.
bool leapfrog_trajectory(const Params& prm, std::span<const double> y,
                         const HmcConfig& cfg, std::span<double> h,
                         std::span<double> p);

struct HmcResult {
  bool accepted = false;
  double delta_h = 0.0;  // +inf marks a divergent (auto-rejected) trajectory
};

// One HMC update: fresh unit normal momenta, leapfrog trajectory, accept
// with probability min{1, exp(-delta_h)}. h is left unchanged on rejection.
HmcResult hmc_update_volatility(std::span<double> h, const Params& prm,
                                std::span<const double> y,
                                const HmcConfig& cfg, RngStream& rng);

// One sweep over sites t = 1..n in order; local accept/reject per site.
// Returns the fraction of accepted sites.
double metropolis_update_volatility(std::span<double> h, const Params& prm,
                                    std::span<const double> y,
                                    const MetroConfig& cfg, RngStream& rng);

// --- burn-in adaptation ----------------------------------------------------

// Multiplicative step scaling toward the target acceptance rate:
// step *= exp(recent_acceptance - target), clamped to [1e-6, 1e2]. The HMC
// overload re-derives n_steps = max(1, round(length/step)) and snaps the
// step to length/n_steps so the trajectory length is preserved exactly.
HmcConfig tune_step_size(const HmcConfig& cfg, double recent_acceptance);
MetroConfig tune_step_size(const MetroConfig& cfg, double recent_acceptance);

// --- full chain ------------------------------------------------------------

// Initialises h_t = ln(max(y_t^2, 1e-8)), runs burn_in adaptive iterations
// (tuning every 100), then n_record * thin frozen iterations recording every
// thin-th sample. Each iteration: volatility update, then sigma_eta2, mu,
// phi draws. Identical (y, cfg) give identical output.
ChainResult run_chain(std::span<const double> y, const ChainConfig& cfg);

}  // namespace sv
