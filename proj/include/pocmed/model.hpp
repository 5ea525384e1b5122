#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pocmed/errors.hpp"

namespace pocmed {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class OutcomeLink { identity, logistic };
enum class NoiseTransformY { identity, mix };

/// Linear-Gaussian structural model over (C, X, M, N, Y) with two causally
/// ordered mediators M -> N:
///   M = g0 + g1.x + g2.c + sigma_m * U_M
///   N = b0 + b1.x + b2*m + b3.c + sigma_n * U_N
///   Y = a0 + a1.x + a2*m + a3*n + a4.c + sigma_y * h(U_Y)   (identity link)
///   P(Y=1) = expit(logistic_scale * (a0 + a1.x + a2*m + a3*n + a4.c))
///                                                           (logistic link)
/// where h is the identity or the mix transform
/// u -> alpha_mix*u + (1-alpha_mix)*u^4.
struct LinearScmSpec {
  double a0 = 0.0;
  Vec a1;  // treatment weights, length dim_x
  double a2 = 0.0;
  double a3 = 0.0;
  Vec a4;  // covariate weights, length dim_c

  double b0 = 0.0;
  Vec b1;
  double b2 = 0.0;
  Vec b3;

  double g0 = 0.0;
  Vec g1;
  Vec g2;

  double sigma_y = 1.0;
  double sigma_m = 1.0;
  double sigma_n = 1.0;

  int dim_x = 1;
  int dim_c = 0;

  OutcomeLink link = OutcomeLink::identity;
  double logistic_scale = 1.0;

  NoiseTransformY noise_transform_y = NoiseTransformY::identity;
  double alpha_mix = 1.0;
};

/// Post-treatment conditioning event (X = x_e, Y in the interval).
/// `empty` means no conditioning: the interval degenerates to (-inf, +inf)
/// and x_e is ignored.
struct Evidence {
  bool empty = true;
  Vec x_e;
  double y_lo = -kInf;
  double y_hi = kInf;
  bool closed = false;  // false: [y_lo, y_hi); true: [y_lo, y_hi]
};

/// The tuple parameterizing every PNS quantity: baseline x_prime, treated x,
/// outcome threshold y, covariate value c, and optional evidence.
struct PnsQuery {
  Vec x;
  Vec x_prime;
  double y = 0.0;
  Vec c;
  Evidence evidence;
};

/// The four-intervention index of the counterfactual CDF
/// theta(y; x, x_p, x_pp, x_ppp, c) = P(Y_{x, M_{x_p}, N_{x_pp, M_{x_ppp}}} < y | C=c).
struct ThetaArgs {
  double y = 0.0;
  Vec x;      // direct treatment slot of Y
  Vec x_p;    // treatment received by the M that feeds Y
  Vec x_pp;   // direct treatment slot of N
  Vec x_ppp;  // treatment received by the M inside N
  Vec c;
};

/// One fitted regression: coefficient layout is
/// [intercept, x..., (m, (n,)) c...] matching the design-matrix order.
struct RegressionFit {
  Vec coef;
  double resid_sd = 0.0;
  Vec residuals;
};

/// Fitted parameters of the three mediation regressions
/// M|X,C; N|X,M,C; Y|X,M,N,C.
struct MediationFit {
  RegressionFit fit_m;
  RegressionFit fit_n;
  RegressionFit fit_y;  // logistic link: coefficients only, resid_sd unused
  std::size_t n_obs = 0;
  OutcomeLink link = OutcomeLink::identity;
  int dim_x = 1;
  int dim_c = 0;
};

/// The five theta values of Theorem-4.2-style decompositions, with the two
/// evidence CDF terms and the raw (unclipped) gamma values.
struct GammaDelta {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double gamma4 = 0.0;
  double delta = 1.0;
  // theta(y; x',x',x',x'), theta(y; x',x,x',x'), theta(y; x',x,x',x),
  // theta(y; x',x,x,x),    theta(y; x,x,x,x)
  std::array<double, 5> thetas{};
  double evid_lo_cdf = 0.0;  // P(Y < y_lo | X=x_e, C=c)
  double evid_hi_cdf = 1.0;  // P(Y < y_hi | X=x_e, C=c) (<= if closed)
};

/// The seven reported quantities. nd = xy + xny, ni = xmny + xmy, and
/// t = nd + ni up to per-component clipping.
struct ComponentSet {
  double t_pns = 0.0;
  double nd_pns = 0.0;
  double ni_pns = 0.0;
  double pns_xy = 0.0;
  double pns_xny = 0.0;
  double pns_xmny = 0.0;
  double pns_xmy = 0.0;
};

struct PnsDecomposition {
  ComponentSet point;
  std::optional<ComponentSet> ci_lo;
  std::optional<ComponentSet> ci_hi;
  std::optional<GammaDelta> diagnostics;
  bool point_evidence = false;    // delta ~ 0 indicator case was taken
  bool theta_monotone = true;     // five thetas (or oracle patterns) ordered
  double acceptance_rate = 1.0;   // oracle evidence retention rate
};

/// Validates spec-internal consistency: positive sigmas, coefficient vector
/// lengths against dim_x/dim_c, alpha_mix/logistic_scale ranges.
void validate_spec(const LinearScmSpec& spec);

/// Returns the query with evidence normalized (empty -> infinite interval);
/// rejects dimension mismatches and empty half-open point intervals.
PnsQuery validate_query(const LinearScmSpec& spec, const PnsQuery& query);

/// Same validation against a fitted model's dimensions.
PnsQuery validate_query(const MediationFit& fit, const PnsQuery& query);

/// Shared helper: validation against explicit dims.
PnsQuery validate_query_dims(int dim_x, int dim_c, const PnsQuery& query);

/// Dot product with dimension check (throws DimensionMismatch naming `what`).
double dot_checked(const Vec& coef, const Vec& v, const std::string& what);

}  // namespace pocmed
