#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is written straight from the model definitions with
// brute-force summation, finite differences, or quadrature - deliberately
// not sharing code with the implementations under test.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sv/model.hpp"

namespace oracle {

// Term-by-term rewrite of the latent-path negative log density.
double potential_reference(const sv::Params& p, std::span<const double> h,
                           std::span<const double> y);

// Central finite differences of the potential.
std::vector<double> gradient_fd(const sv::Params& p, std::span<const double> h,
                                std::span<const double> y, double eps);

// Direct accumulation of the conditional sufficient statistics.
sv::ConditionalStats stats_reference(const sv::Params& p,
                                     std::span<const double> h);

// Normalised CDF of exp(-neg_log_density) on [lo, hi], composite Simpson on
// a uniform grid with midpoint refinements; linear interpolation between
// nodes when evaluated.
class QuadratureCdf {
 public:
  QuadratureCdf(const std::function<double(double)>& neg_log_density,
                double lo, double hi, int n_intervals);
  double operator()(double x) const;

  // Moments of the normalised density, for cross-checking closed forms.
  double mean() const { return mean_; }
  double variance() const { return var_; }

 private:
  std::vector<double> xs_, cdf_;
  double mean_ = 0.0, var_ = 0.0;
};

// Kolmogorov-Smirnov sup distance between a sample and a reference CDF.
double ks_distance(std::vector<double> draws,
                   const std::function<double(double)>& cdf);

double mean_of(std::span<const double> x);
double variance_of(std::span<const double> x);  // unbiased

// Determinant by Gaussian elimination with partial pivoting.
double determinant(std::vector<std::vector<double>> m);

// AR(1) series x_{j+1} = rho x_j + N(0,1), x_0 from the stationary law.
std::vector<double> ar1_series(double rho, std::size_t n, std::uint64_t seed);

}  // namespace oracle
