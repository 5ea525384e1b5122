#pragma once

#include <array>
#include <functional>
#include <memory>

#include "pocmed/model.hpp"

namespace pocmed {

/// Provider of the counterfactual CDF theta and of observational outcome
/// CDFs; the decomposition formulas are engine-agnostic.
class ThetaEngine {
 public:
  virtual ~ThetaEngine() = default;

  /// P(Y_{x, M_{x_p}, N_{x_pp, M_{x_ppp}}} < y | C = c).
  virtual double theta(const ThetaArgs& args) const = 0;

  /// Observational P(Y < t | X = x_e, C = c); `or_equal` selects P(Y <= t)
  /// (distinct only for discrete outcomes). Evaluated as theta with all four
  /// intervention slots at x_e, which is the model-implied observational
  /// conditional.
  virtual double outcome_cdf(double t, const Vec& x_e, const Vec& c,
                             bool or_equal) const = 0;
};

/// Closed-form engine for the identity-link linear-Gaussian model.
/// Constructible from a known spec or from an identity-link fit.
class LinearThetaEngine : public ThetaEngine {
 public:
  explicit LinearThetaEngine(const LinearScmSpec& spec);
  explicit LinearThetaEngine(const MediationFit& fit);

  double theta(const ThetaArgs& args) const override;
  double outcome_cdf(double t, const Vec& x_e, const Vec& c,
                     bool or_equal) const override;

  /// mu = a0 + a1.x + a2*(g0 + g1.x_p + g2.c)
  ///    + a3*(b0 + b1.x_pp + b2*(g0 + g1.x_ppp + g2.c) + b3.c) + a4.c
  double mean(const ThetaArgs& args) const;
  /// s = sqrt((a2 + a3*b2)^2 sigma_m^2 + a3^2 sigma_n^2 + sigma_y^2)
  double sd() const;

 private:
  double a0_, a2_, a3_, b0_, b2_, g0_;
  Vec a1_, a4_, b1_, b3_, g1_, g2_;
  double sigma_y_, sigma_m_, sigma_n_;
};

/// Engine for the logistic-outcome model: theta is the expectation of the
/// failure probability over the fitted mediator residual pairs (u_M, u_N),
/// kept paired to preserve their dependence. Thresholds follow the binary
/// CDF-at-threshold convention: P(Y < t) is 0 for t <= 0, P(Y = 0) for
/// 0 < t <= 1, and 1 beyond; the standard binary query is t = 1.
class LogisticThetaEngine : public ThetaEngine {
 public:
  explicit LogisticThetaEngine(const MediationFit& fit);

  double theta(const ThetaArgs& args) const override;
  double outcome_cdf(double t, const Vec& x_e, const Vec& c,
                     bool or_equal) const override;

  /// P(Y_{...} = 0 | C=c): mean over residual pairs of one minus the
  /// logistic success probability.
  double failure_probability(const ThetaArgs& args) const;

 private:
  MediationFit fit_;
};

/// Mediator side of a linear-Gaussian spec, for the quadrature engine.
struct MediatorParams {
  double g0 = 0.0;
  Vec g1, g2;
  double b0 = 0.0;
  Vec b1;
  double b2 = 0.0;
  Vec b3;
  double sigma_m = 1.0;
  double sigma_n = 1.0;
};

MediatorParams mediator_params(const LinearScmSpec& spec);

/// theta(y; x, x_p, x_pp, x_ppp, c) evaluated via the closed-form
/// identity-link expression.
double theta_linear(const LinearScmSpec& spec, const ThetaArgs& args);
double theta_linear(const MediationFit& fit, const ThetaArgs& args);

/// theta via the empirical-residual expectation of the logistic model.
double theta_logistic(const MediationFit& fit, const ThetaArgs& args);

/// Cross-world mediator transport m -> F^{-1}_{M|x_3p,c}(F_{M|x_prime,c}(m)).
/// The accessors receive (value, treatment, c); the quantile accessor gets a
/// probability. A non-finite accessor result is treated as a flat region of
/// the CDF and raises NonInvertibleCdf.
double quantile_map(
    double m, const Vec& x_prime, const Vec& x_3p, const Vec& c,
    const std::function<double(double, const Vec&, const Vec&)>& cdf_of_m_given,
    const std::function<double(double, const Vec&, const Vec&)>& quantile_of_m_given);

/// Closed-form linear-Gaussian transport m + g1.(x_3p - x_prime).
double quantile_map_linear(double m, const Vec& x_prime, const Vec& x_3p,
                           const Vec& g1);

/// The double integral of the nested-counterfactual CDF over the two
/// mediator densities, inner density composed through quantile_map;
/// Gauss-Hermite with an automatic 2x refinement check.
double theta_quadrature(
    const std::function<double(double, const Vec&, double, double, const Vec&)>&
        outcome_cdf /* (y, x, m, n, c) -> P(Y < y | ...) */,
    const MediatorParams& med, const ThetaArgs& args, std::size_t nodes = 40);

/// Quadrature-backed engine for any LinearScmSpec (identity or logistic
/// link); the analytic fallback when no closed form applies.
class QuadratureThetaEngine : public ThetaEngine {
 public:
  explicit QuadratureThetaEngine(const LinearScmSpec& spec,
                                 std::size_t nodes = 40);
  double theta(const ThetaArgs& args) const override;
  double outcome_cdf(double t, const Vec& x_e, const Vec& c,
                     bool or_equal) const override;

 private:
  LinearScmSpec spec_;
  MediatorParams med_;
  std::size_t nodes_;
};

/// Computes the five thetas, the evidence CDF pair, delta, and the four raw
/// gamma values for the query. Throws PointEvidence when delta < 1e-12
/// (callers that can handle the indicator case use decompose instead).
GammaDelta gamma_delta(const ThetaEngine& engine, const PnsQuery& query);

/// The point-evidence (delta = 0) indicator variables for the four path
/// components, evaluated literally from the case-1B/2B inequalities.
/// Requires the evidence CDF values at y_lo and y_hi to coincide.
std::array<bool, 4> point_evidence_indicators(const ThetaEngine& engine,
                                              const PnsQuery& query);

/// Full decomposition: clipped gamma ratios (or indicators when delta = 0),
/// T computed directly, ND/NI as pairwise sums; raw gamma/delta diagnostics
/// attached.
PnsDecomposition decompose(const ThetaEngine& engine, const PnsQuery& query);

/// Convenience: validates and decomposes a known spec with the appropriate
/// engine (closed form for identity link, quadrature for logistic).
/// The analytic path requires noise_transform_y = identity.
PnsDecomposition decompose_analytic(const LinearScmSpec& spec,
                                    const PnsQuery& query);

/// Convenience: decomposes from a fitted model (linear or logistic engine
/// per the fit's link).
PnsDecomposition decompose_fit(const MediationFit& fit, const PnsQuery& query);

}  // namespace pocmed
