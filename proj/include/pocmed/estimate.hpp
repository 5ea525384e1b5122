#pragma once

#include <cstdint>

#include "pocmed/dataset.hpp"
#include "pocmed/model.hpp"

namespace pocmed {

struct BootstrapConfig {
  std::size_t resamples = 1000;  // B
  double level = 0.95;
  std::uint64_t seed = 0;
};

/// Ordinary least squares for the three mediation regressions
/// M|X,C; N|X,M,C; Y|X,M,N,C (covariates always included), solved by
/// column-pivoted QR with relative rank tolerance 1e-10. Residual sds use
/// the (n - p) denominator; residuals are stored.
MediationFit fit_ols(const Dataset& data);

/// Mediator regressions as in fit_ols; logistic outcome coefficients by
/// guarded Newton / IRLS to gradient max-norm <= 1e-8 within 100 iterations.
MediationFit fit_logistic(const Dataset& data);

/// Fits by outcome type (a {0,1}-valued outcome column selects the logistic
/// path) and decomposes with the plug-in theta engine.
PnsDecomposition estimate_decomposition(const Dataset& data,
                                        const PnsQuery& query);

/// Adds percentile bootstrap confidence intervals: B row-resamples with
/// replacement, re-estimated with per-resample RNG streams derived by
/// counter from the seed (deterministic regardless of parallelism); failed
/// resamples (rank deficiency, separation) are redrawn up to 10*B total
/// attempts. Percentile bounds are clipped to [0,1] and, for B >= 2, widened
/// if needed to bracket the clipped point estimate; with B=1 both bounds
/// equal the single resample estimate (degenerate percentile).
PnsDecomposition bootstrap_ci(const Dataset& data, const PnsQuery& query,
                              const BootstrapConfig& config);

}  // namespace pocmed
