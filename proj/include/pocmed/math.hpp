#pragma once

#include <cstddef>
#include <vector>

namespace pocmed {

/// Standard normal CDF, absolute error below 1e-12 (computed via erfc).
double normal_cdf(double x);

/// Standard normal quantile (inverse CDF), Wichura's AS241 algorithm.
/// Accepts p in (0, 1); returns +/-infinity at the endpoints.
double normal_quantile(double p);

/// Logistic sigmoid 1 / (1 + exp(-x)), overflow-safe.
double expit(double x);

/// Gauss-Hermite rule rescaled for expectations against the standard normal
/// density: E[f(Z)] ~= sum_i weight[i] * f(node[i]), weights summing to 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Computes the n-point rule by Newton iteration on the Hermite recurrence.
/// Requires 1 <= n <= 256; results are cached per n.
const GaussHermiteRule& gauss_hermite(std::size_t n);

}  // namespace pocmed
