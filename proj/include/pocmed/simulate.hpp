#pragma once

#include <array>
#include <cstdint>

#include "pocmed/dataset.hpp"
#include "pocmed/model.hpp"

namespace pocmed {

/// Draws an observational dataset from the SCM. Per row, the exogenous
/// noises are drawn in the documented order u_C (dim_c), u_X (dim_x), u_M,
/// u_N, u_Y, plus one uniform for the Bernoulli outcome under the logistic
/// link; U_C and U_X have sd 1, X_j = sum(C) + U_Xj. Columns are ordered
/// C..., X..., M, N, Y with names c1..., x1..., m, n, y. Deterministic for
/// fixed (spec, n, seed).
Dataset sample_dataset(const LinearScmSpec& spec, std::size_t n,
                       std::uint64_t seed);

/// Ground-truth decomposition by direct Monte Carlo over joint
/// counterfactuals: per draw the five nested potential outcomes
///   Y_{x'}, Y_x, Y_{x',M_x}, Y_{x',M_x,N_{x,M_x}}, Y_{x',M_x,N_{x',M_{x'}}}
/// share one exogenous draw (u_M, u_N, u_Y[, u_Bern]); evidence conditioning
/// retains draws whose factual outcome at X = x_e falls in the interval;
/// each retained T-satisfying draw lands in exactly one path category, so
/// the component frequencies sum to t_pns exactly. Throws EvidenceStarvation
/// when fewer than 100 draws survive.
PnsDecomposition oracle_decompose(const LinearScmSpec& spec,
                                  const PnsQuery& query, std::size_t n_mc,
                                  std::uint64_t seed);

/// Empirical frequency of Y_{x, M_{x_p}, N_{x_pp, M_{x_ppp}}} < y; the two
/// mediator slots share the same u_M draw (cross-world nesting by shared
/// noise).
double oracle_theta(const LinearScmSpec& spec, const ThetaArgs& args,
                    std::size_t n_mc, std::uint64_t seed);

/// Monotonicity surrogate check: samples the five potential outcomes and
/// verifies their sort pattern (ties broken by slot index) is constant
/// across draws. Returns true when constant — the comonotone-shift property
/// that identity-link, identity-noise models satisfy by construction.
bool oracle_monotone_pattern(const LinearScmSpec& spec, const PnsQuery& query,
                             std::size_t n_mc, std::uint64_t seed);

}  // namespace pocmed
