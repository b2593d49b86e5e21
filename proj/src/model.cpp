#include "sv/model.hpp"

#include <cmath>
#include <stdexcept>

namespace sv {

bool params_valid(const Params& p) {
  return std::isfinite(p.mu) && std::isfinite(p.phi) &&
         std::isfinite(p.sigma_eta2) && std::fabs(p.phi) < 1.0 &&
         p.sigma_eta2 > 0.0;
}

namespace {

void check_inputs(const Params& p, std::span<const double> h,
                  std::span<const double> y) {
  if (h.empty()) throw std::invalid_argument("potential: empty latent path");
  if (h.size() != y.size())
    throw std::invalid_argument("potential: h and y length mismatch");
  if (!params_valid(p)) throw std::invalid_argument("potential: invalid parameters");
  for (double v : h)
    if (!std::isfinite(v)) throw std::invalid_argument("potential: non-finite h");
  for (double v : y)
    if (!std::isfinite(v)) throw std::invalid_argument("potential: non-finite y");
}

}  // namespace

namespace detail {

double potential_unchecked(const Params& p, std::span<const double> h,
                           std::span<const double> y) {
  const std::size_t n = h.size();
  const double inv2s = 1.0 / (2.0 * p.sigma_eta2);
  double u = 0.0;
  for (std::size_t t = 0; t < n; ++t)
    u += 0.5 * h[t] + 0.5 * y[t] * y[t] * std::exp(-h[t]);
  const double d1 = h[0] - p.mu;
  u += d1 * d1 * (1.0 - p.phi * p.phi) * inv2s;
  for (std::size_t t = 1; t < n; ++t) {
    const double r = h[t] - p.mu - p.phi * (h[t - 1] - p.mu);
    u += r * r * inv2s;
  }
  return u;
}

void gradient_unchecked(const Params& p, std::span<const double> h,
                        std::span<const double> y, std::span<double> grad) {
  const std::size_t n = h.size();
  const double invs = 1.0 / p.sigma_eta2;
  for (std::size_t t = 0; t < n; ++t)
    grad[t] = 0.5 - 0.5 * y[t] * y[t] * std::exp(-h[t]);
  grad[0] += (1.0 - p.phi * p.phi) * (h[0] - p.mu) * invs;
  for (std::size_t t = 1; t < n; ++t) {
    const double r = h[t] - p.mu - p.phi * (h[t - 1] - p.mu);
    grad[t] += r * invs;
    grad[t - 1] -= p.phi * r * invs;
  }
}

double local_potential_unchecked(const Params& p, std::span<const double> h,
                                 std::span<const double> y, std::size_t t) {
  const std::size_t n = h.size();
  const double inv2s = 1.0 / (2.0 * p.sigma_eta2);
  double u = 0.5 * h[t] + 0.5 * y[t] * y[t] * std::exp(-h[t]);
  if (t == 0) {
    const double d1 = h[0] - p.mu;
    u += d1 * d1 * (1.0 - p.phi * p.phi) * inv2s;
  } else {
    const double r = h[t] - p.mu - p.phi * (h[t - 1] - p.mu);
    u += r * r * inv2s;
  }
  if (t + 1 < n) {
    const double r = h[t + 1] - p.mu - p.phi * (h[t] - p.mu);
    u += r * r * inv2s;
  }
  return u;
}

}  // namespace detail

double potential(const Params& p, std::span<const double> h,
                 std::span<const double> y) {
  check_inputs(p, h, y);
  return detail::potential_unchecked(p, h, y);
}

void potential_gradient(const Params& p, std::span<const double> h,
                        std::span<const double> y, std::span<double> grad) {
  check_inputs(p, h, y);
  if (grad.size() != h.size())
    throw std::invalid_argument("potential_gradient: grad length mismatch");
  detail::gradient_unchecked(p, h, y, grad);
}

std::vector<double> potential_gradient(const Params& p,
                                       std::span<const double> h,
                                       std::span<const double> y) {
  std::vector<double> grad(h.size());
  potential_gradient(p, h, y, grad);
  return grad;
}

double hamiltonian(std::span<const double> momenta, std::span<const double> h,
                   const Params& p, std::span<const double> y) {
  if (momenta.size() != h.size())
    throw std::invalid_argument("hamiltonian: momenta and h length mismatch");
  double kin = 0.0;
  for (double pi : momenta) kin += 0.5 * pi * pi;
  return kin + potential(p, h, y);
}

ConditionalStats conditional_stats(const Params& p, std::span<const double> h) {
  const std::size_t n = h.size();
  if (n < 2)
    throw std::invalid_argument("conditional_stats: need at least 2 sites");
  if (!params_valid(p))
    throw std::invalid_argument("conditional_stats: invalid parameters");
  for (double v : h)
    if (!std::isfinite(v))
      throw std::invalid_argument("conditional_stats: non-finite h");

  const double one_m_phi2 = 1.0 - p.phi * p.phi;
  const double one_m_phi = 1.0 - p.phi;
  ConditionalStats s;
  const double d1 = h[0] - p.mu;
  s.a = one_m_phi2 * d1 * d1;
  s.b = one_m_phi2 + static_cast<double>(n - 1) * one_m_phi * one_m_phi;
  s.c = one_m_phi2 * h[0];
  s.d = -d1 * d1;
  for (std::size_t t = 1; t < n; ++t) {
    const double r = h[t] - p.mu - p.phi * (h[t - 1] - p.mu);
    s.a += r * r;
    s.c += one_m_phi * (h[t] - p.phi * h[t - 1]);
    const double prev = h[t - 1] - p.mu;
    s.d += prev * prev;
    s.e += (h[t] - p.mu) * prev;
  }
  s.a *= 0.5;
  return s;
}

double local_potential(const Params& p, std::span<const double> h,
                       std::span<const double> y, std::size_t t) {
  check_inputs(p, h, y);
  if (t >= h.size())
    throw std::invalid_argument("local_potential: site index out of range");
  return detail::local_potential_unchecked(p, h, y, t);
}

}  // namespace sv
