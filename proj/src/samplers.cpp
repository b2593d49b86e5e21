#include "sv/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sv/errors.hpp"

namespace sv {

namespace {

constexpr double kStepMin = 1e-6;
constexpr double kStepMax = 1e2;
constexpr double kLengthTol = 1e-12;

void check_hmc_config(const HmcConfig& cfg) {
  if (!(cfg.trajectory_length > 0.0) || !(cfg.step_size > 0.0) ||
      cfg.n_steps < 1)
    throw std::invalid_argument("hmc config: positive length/step and n_steps >= 1 required");
  const double err =
      std::fabs(cfg.n_steps * cfg.step_size - cfg.trajectory_length);
  if (err > kLengthTol * std::max(1.0, cfg.trajectory_length))
    throw std::invalid_argument("hmc config: n_steps * step_size != trajectory_length");
}

void check_metro_config(const MetroConfig& cfg) {
  if (!(cfg.delta > 0.0))
    throw std::invalid_argument("metropolis config: delta must be > 0");
}

// Re-derive the step count from the current step scale so that
// n_steps * step_size equals trajectory_length exactly.
HmcConfig snap_to_length(HmcConfig cfg, double step) {
  step = std::clamp(step, kStepMin, kStepMax);
  cfg.n_steps = std::max(1L, std::lround(cfg.trajectory_length / step));
  cfg.step_size = cfg.trajectory_length / cfg.n_steps;
  return cfg;
}

}  // namespace

double draw_inverse_gamma(double shape, double scale, RngStream& rng) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("draw_inverse_gamma: shape and scale must be > 0");
  return scale / rng.gamma(shape);
}

Params update_sigma_eta2(const Params& p, std::span<const double> h,
                         RngStream& rng) {
  const ConditionalStats s = conditional_stats(p, h);
  if (!(s.a > 0.0))
    throw DegeneracyError("sigma_eta2 conditional: zero residual sum");
  Params out = p;
  out.sigma_eta2 = draw_inverse_gamma(0.5 * static_cast<double>(h.size()), s.a, rng);
  return out;
}

Params update_mu(const Params& p, std::span<const double> h, RngStream& rng) {
  const ConditionalStats s = conditional_stats(p, h);
  if (!(s.b > 0.0))
    throw std::logic_error("mu conditional: nonpositive precision");
  Params out = p;
  out.mu = s.c / s.b + rng.normal() * std::sqrt(p.sigma_eta2 / s.b);
  return out;
}

double phi_accept_prob(double phi_old, double phi_new) {
  if (std::fabs(phi_new) >= 1.0) return 0.0;
  const double r = std::sqrt((1.0 - phi_new * phi_new) /
                             (1.0 - phi_old * phi_old));
  return std::min(r, 1.0);
}

PhiUpdate update_phi(const Params& p, std::span<const double> h,
                     RngStream& rng) {
  const ConditionalStats s = conditional_stats(p, h);
  PhiUpdate res;
  res.params = p;
  if (!(s.d > 0.0)) {  // proposal precision not positive: leave phi alone
    res.skipped = true;
    return res;
  }
  const double prop = s.e / s.d + rng.normal() * std::sqrt(p.sigma_eta2 / s.d);
  if (std::fabs(prop) >= 1.0) return res;  // outside the stationarity region
  if (rng.uniform() < phi_accept_prob(p.phi, prop)) {
    res.params.phi = prop;
    res.accepted = true;
  }
  return res;
}

bool leapfrog_trajectory(const Params& prm, std::span<const double> y,
                         const HmcConfig& cfg, std::span<double> h,
                         std::span<double> p) {
  check_hmc_config(cfg);
  if (h.size() != p.size() || h.size() != y.size())
    throw std::invalid_argument("leapfrog_trajectory: length mismatch");
  if (!params_valid(prm))
    throw std::invalid_argument("leapfrog_trajectory: invalid parameters");
  std::vector<double> grad(h.size());
  return leapfrog_steps(
      h, p, cfg.step_size, cfg.n_steps,
      [&prm, y](std::span<const double> hh, std::span<double> g) {
        detail::gradient_unchecked(prm, hh, y, g);
      },
      grad);
}

HmcResult hmc_update_volatility(std::span<double> h, const Params& prm,
                                std::span<const double> y,
                                const HmcConfig& cfg, RngStream& rng) {
  const std::size_t n = h.size();
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = rng.normal();
  const double h0 = hamiltonian(p, h, prm, y);

  std::vector<double> h_new(h.begin(), h.end());
  std::vector<double> p_new = p;
  const bool ok = leapfrog_trajectory(prm, y, cfg, h_new, p_new);

  HmcResult res;
  res.delta_h = std::numeric_limits<double>::infinity();
  if (ok) res.delta_h = hamiltonian(p_new, h_new, prm, y) - h0;

  // One uniform per trajectory regardless of outcome, so the stream stays
  // aligned across accept/reject/divergence.
  const double u = rng.uniform();
  if (ok && u < std::exp(-res.delta_h)) {
    std::copy(h_new.begin(), h_new.end(), h.begin());
    res.accepted = true;
  }
  return res;
}

double metropolis_update_volatility(std::span<double> h, const Params& prm,
                                    std::span<const double> y,
                                    const MetroConfig& cfg, RngStream& rng) {
  check_metro_config(cfg);
  if (h.empty() || h.size() != y.size())
    throw std::invalid_argument("metropolis update: length mismatch or empty");
  if (!params_valid(prm))
    throw std::invalid_argument("metropolis update: invalid parameters");

  const std::size_t n = h.size();
  std::size_t accepted = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double u_old = detail::local_potential_unchecked(prm, h, y, t);
    const double h_old = h[t];
    h[t] = h_old + cfg.delta * (rng.uniform() - 0.5);
    const double u_new = detail::local_potential_unchecked(prm, h, y, t);
    if (rng.uniform() < std::exp(u_old - u_new)) {
      ++accepted;
    } else {
      h[t] = h_old;
    }
  }
  return static_cast<double>(accepted) / static_cast<double>(n);
}

HmcConfig tune_step_size(const HmcConfig& cfg, double recent_acceptance) {
  check_hmc_config(cfg);
  const double step =
      cfg.step_size * std::exp(recent_acceptance - cfg.target_acceptance);
  return snap_to_length(cfg, step);
}

MetroConfig tune_step_size(const MetroConfig& cfg, double recent_acceptance) {
  check_metro_config(cfg);
  MetroConfig out = cfg;
  out.delta = std::clamp(
      cfg.delta * std::exp(recent_acceptance - cfg.target_acceptance),
      kStepMin, kStepMax);
  return out;
}

ChainResult run_chain(std::span<const double> y, const ChainConfig& cfg) {
  const std::size_t n = y.size();
  if (n < 2)
    throw std::invalid_argument("run_chain: need at least 2 observations");
  for (double v : y)
    if (!std::isfinite(v)) throw std::invalid_argument("run_chain: non-finite y");
  if (!params_valid(cfg.init_params))
    throw std::invalid_argument("run_chain: invalid initial parameters");
  if (cfg.burn_in < 0 || cfg.n_record < 0 || cfg.thin < 1)
    throw std::invalid_argument("run_chain: invalid iteration counts");
  for (std::size_t idx : cfg.tracked_latents)
    if (idx < 1 || idx > n)
      throw std::invalid_argument("run_chain: tracked latent index " +
                                  std::to_string(idx) + " out of range [1," +
                                  std::to_string(n) + "]");

  RngStream rng(cfg.seed);
  std::vector<double> h(n);
  for (std::size_t t = 0; t < n; ++t)
    h[t] = std::log(std::max(y[t] * y[t], 1e-8));
  Params prm = cfg.init_params;

  const bool use_hmc = cfg.algorithm == Algorithm::kHmc;
  HmcConfig hmc = cfg.hmc;
  if (use_hmc) {
    if (!(hmc.trajectory_length > 0.0) || !(hmc.step_size > 0.0))
      throw std::invalid_argument("run_chain: invalid hmc config");
    // Align the initial discretisation with the requested trajectory length.
    hmc.n_steps = std::max(
        1L, std::lround(hmc.trajectory_length / hmc.step_size));
    hmc.step_size = hmc.trajectory_length / hmc.n_steps;
  } else {
    check_metro_config(cfg.metro);
  }
  MetroConfig metro = cfg.metro;

  ChainResult result;
  result.samples.reserve(static_cast<std::size_t>(cfg.n_record));

  long global_it = 0;
  auto gibbs_cycle = [&](bool burn_phase) {
    try {
      prm = update_sigma_eta2(prm, h, rng);
    } catch (const DegeneracyError& e) {
      throw DegeneracyError("iteration " + std::to_string(global_it) +
                            (burn_phase ? " (burn-in): " : ": ") + e.what());
    }
    prm = update_mu(prm, h, rng);
    const PhiUpdate pu = update_phi(prm, h, rng);
    prm = pu.params;
    if (pu.skipped) ++result.stats.phi_skips;
  };

  // Burn-in with step adaptation from trailing 100-iteration windows.
  double win_sum = 0.0;
  long win_count = 0;
  for (long it = 1; it <= cfg.burn_in; ++it) {
    ++global_it;
    double acc;
    if (use_hmc) {
      acc = hmc_update_volatility(h, prm, y, hmc, rng).accepted ? 1.0 : 0.0;
    } else {
      acc = metropolis_update_volatility(h, prm, y, metro, rng);
    }
    win_sum += acc;
    ++win_count;
    gibbs_cycle(true);
    if (it % 100 == 0 && win_count > 0) {
      const double recent = win_sum / static_cast<double>(win_count);
      if (use_hmc)
        hmc = tune_step_size(hmc, recent);
      else
        metro = tune_step_size(metro, recent);
      win_sum = 0.0;
      win_count = 0;
    }
  }

  // Recording phase: step sizes frozen.
  double acc_sum = 0.0;
  long acc_count = 0;
  const long total = cfg.n_record * cfg.thin;
  for (long it = 1; it <= total; ++it) {
    ++global_it;
    bool flag;
    double dh = 0.0;
    double acc;
    if (use_hmc) {
      const HmcResult r = hmc_update_volatility(h, prm, y, hmc, rng);
      flag = r.accepted;
      dh = r.delta_h;
      acc = flag ? 1.0 : 0.0;
    } else {
      acc = metropolis_update_volatility(h, prm, y, metro, rng);
      flag = acc > 0.0;
    }
    acc_sum += acc;
    ++acc_count;
    gibbs_cycle(false);
    if (it % cfg.thin == 0) {
      ChainSample s;
      s.iteration = it;
      s.params = prm;
      s.accept_volatility = flag;
      s.delta_h = use_hmc ? dh : 0.0;
      s.tracked_h.reserve(cfg.tracked_latents.size());
      for (std::size_t idx : cfg.tracked_latents) s.tracked_h.push_back(h[idx - 1]);
      result.samples.push_back(std::move(s));
    }
  }

  result.stats.accept_rate =
      acc_count > 0 ? acc_sum / static_cast<double>(acc_count) : 0.0;
  result.stats.tuned_step = use_hmc ? hmc.step_size : metro.delta;
  result.stats.tuned_n_steps = use_hmc ? hmc.n_steps : 0;
  return result;
}

}  // namespace sv
