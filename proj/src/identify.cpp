#include "pocmed/identify.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "pocmed/math.hpp"

namespace pocmed {

namespace {

constexpr double kPointEvidenceDelta = 1e-12;

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

/// Binary-outcome CDF convention shared by the logistic engines:
/// strict:   P(Y < t)  = 0 for t <= 0, P(Y=0) for 0 < t <= 1, 1 for t > 1
/// or_equal: P(Y <= t) = 0 for t < 0,  P(Y=0) for 0 <= t < 1, 1 for t >= 1
double binary_cdf(double t, double p_zero, bool or_equal) {
  if (or_equal) {
    if (t < 0.0) return 0.0;
    if (t < 1.0) return p_zero;
    return 1.0;
  }
  if (t <= 0.0) return 0.0;
  if (t <= 1.0) return p_zero;
  return 1.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// LinearThetaEngine

LinearThetaEngine::LinearThetaEngine(const LinearScmSpec& spec) {
  validate_spec(spec);
  if (spec.link != OutcomeLink::identity) {
    throw WrongLink("theta_linear requires the identity outcome link");
  }
  a0_ = spec.a0; a1_ = spec.a1; a2_ = spec.a2; a3_ = spec.a3; a4_ = spec.a4;
  b0_ = spec.b0; b1_ = spec.b1; b2_ = spec.b2; b3_ = spec.b3;
  g0_ = spec.g0; g1_ = spec.g1; g2_ = spec.g2;
  sigma_y_ = spec.sigma_y; sigma_m_ = spec.sigma_m; sigma_n_ = spec.sigma_n;
}

LinearThetaEngine::LinearThetaEngine(const MediationFit& fit) {
  if (fit.link != OutcomeLink::identity) {
    throw WrongLink("theta_linear requires an identity-link fit");
  }
  const int dx = fit.dim_x, dc = fit.dim_c;
  const auto& gm = fit.fit_m.coef;   // [g0, g1 x dx, g2 x dc]
  const auto& bn = fit.fit_n.coef;   // [b0, b1 x dx, b2, b3 x dc]
  const auto& ay = fit.fit_y.coef;   // [a0, a1 x dx, a2, a3, a4 x dc]
  if (gm.size() != static_cast<std::size_t>(1 + dx + dc) ||
      bn.size() != static_cast<std::size_t>(2 + dx + dc) ||
      ay.size() != static_cast<std::size_t>(3 + dx + dc)) {
    throw DimensionMismatch("MediationFit coefficient layout does not match dims");
  }
  g0_ = gm[0];
  g1_.assign(gm.begin() + 1, gm.begin() + 1 + dx);
  g2_.assign(gm.begin() + 1 + dx, gm.end());
  b0_ = bn[0];
  b1_.assign(bn.begin() + 1, bn.begin() + 1 + dx);
  b2_ = bn[1 + dx];
  b3_.assign(bn.begin() + 2 + dx, bn.end());
  a0_ = ay[0];
  a1_.assign(ay.begin() + 1, ay.begin() + 1 + dx);
  a2_ = ay[1 + dx];
  a3_ = ay[2 + dx];
  a4_.assign(ay.begin() + 3 + dx, ay.end());
  sigma_y_ = fit.fit_y.resid_sd;
  sigma_m_ = fit.fit_m.resid_sd;
  sigma_n_ = fit.fit_n.resid_sd;
  if (!(sigma_y_ > 0.0) || !(sigma_m_ > 0.0) || !(sigma_n_ > 0.0)) {
    throw NonPositiveSigma("fitted residual sds must be > 0");
  }
}

double LinearThetaEngine::mean(const ThetaArgs& args) const {
  const double cov_m = dot_checked(g2_, args.c, "theta c");
  const double m_inner = g0_ + dot_checked(g1_, args.x_ppp, "theta x_ppp") + cov_m;
  const double n_mean = b0_ + dot_checked(b1_, args.x_pp, "theta x_pp") +
                        b2_ * m_inner + dot_checked(b3_, args.c, "theta c");
  const double m_outer = g0_ + dot_checked(g1_, args.x_p, "theta x_p") + cov_m;
  return a0_ + dot_checked(a1_, args.x, "theta x") + a2_ * m_outer +
         a3_ * n_mean + dot_checked(a4_, args.c, "theta c");
}

double LinearThetaEngine::sd() const {
  const double w_m = a2_ + a3_ * b2_;
  return std::sqrt(w_m * w_m * sigma_m_ * sigma_m_ +
                   a3_ * a3_ * sigma_n_ * sigma_n_ + sigma_y_ * sigma_y_);
}

double LinearThetaEngine::theta(const ThetaArgs& args) const {
  if (args.y == kInf) return 1.0;
  if (args.y == -kInf) return 0.0;
  return normal_cdf((args.y - mean(args)) / sd());
}

double LinearThetaEngine::outcome_cdf(double t, const Vec& x_e, const Vec& c,
                                      bool /*or_equal*/) const {
  // Continuous outcome: P(Y < t) and P(Y <= t) coincide.
  return theta(ThetaArgs{t, x_e, x_e, x_e, x_e, c});
}

double theta_linear(const LinearScmSpec& spec, const ThetaArgs& args) {
  return LinearThetaEngine(spec).theta(args);
}

double theta_linear(const MediationFit& fit, const ThetaArgs& args) {
  return LinearThetaEngine(fit).theta(args);
}

// ---------------------------------------------------------------------------
// LogisticThetaEngine

LogisticThetaEngine::LogisticThetaEngine(const MediationFit& fit) : fit_(fit) {
  if (fit_.link != OutcomeLink::logistic) {
    throw WrongLink("theta_logistic requires a logistic-link fit");
  }
  if (fit_.fit_m.residuals.empty() || fit_.fit_n.residuals.empty()) {
    throw EmptyResiduals("logistic theta needs stored mediator residuals");
  }
  if (fit_.fit_m.residuals.size() != fit_.fit_n.residuals.size()) {
    throw DimensionMismatch("mediator residual lists differ in length");
  }
}

double LogisticThetaEngine::failure_probability(const ThetaArgs& args) const {
  const int dx = fit_.dim_x, dc = fit_.dim_c;
  const auto& gm = fit_.fit_m.coef;
  const auto& bn = fit_.fit_n.coef;
  const auto& ay = fit_.fit_y.coef;
  if (gm.size() != static_cast<std::size_t>(1 + dx + dc) ||
      bn.size() != static_cast<std::size_t>(2 + dx + dc) ||
      ay.size() != static_cast<std::size_t>(3 + dx + dc)) {
    throw DimensionMismatch("MediationFit coefficient layout does not match dims");
  }
  Vec g1(gm.begin() + 1, gm.begin() + 1 + dx);
  Vec g2(gm.begin() + 1 + dx, gm.end());
  Vec b1(bn.begin() + 1, bn.begin() + 1 + dx);
  Vec b3(bn.begin() + 2 + dx, bn.end());
  Vec a1(ay.begin() + 1, ay.begin() + 1 + dx);
  Vec a4(ay.begin() + 3 + dx, ay.end());
  const double g0 = gm[0], b0 = bn[0], b2 = bn[1 + dx];
  const double a0 = ay[0], a2 = ay[1 + dx], a3 = ay[2 + dx];

  const double cov_m = dot_checked(g2, args.c, "theta c");
  const double m_outer_base = g0 + dot_checked(g1, args.x_p, "theta x_p") + cov_m;
  const double m_inner_base = g0 + dot_checked(g1, args.x_ppp, "theta x_ppp") + cov_m;
  const double n_base = b0 + dot_checked(b1, args.x_pp, "theta x_pp") +
                        dot_checked(b3, args.c, "theta c");
  const double base = a0 + dot_checked(a1, args.x, "theta x") +
                      dot_checked(a4, args.c, "theta c");

  // Mean of the success probability over the paired residuals (u_M, u_N):
  // the same u_M enters both the M that feeds Y and the M inside N.
  const auto& rm = fit_.fit_m.residuals;
  const auto& rn = fit_.fit_n.residuals;
  double acc = 0.0;
  for (std::size_t i = 0; i < rm.size(); ++i) {
    const double m_outer = m_outer_base + rm[i];
    const double n_val = n_base + b2 * (m_inner_base + rm[i]) + rn[i];
    acc += expit(base + a2 * m_outer + a3 * n_val);
  }
  return 1.0 - acc / static_cast<double>(rm.size());
}

double LogisticThetaEngine::theta(const ThetaArgs& args) const {
  return binary_cdf(args.y, failure_probability(args), /*or_equal=*/false);
}

double LogisticThetaEngine::outcome_cdf(double t, const Vec& x_e, const Vec& c,
                                        bool or_equal) const {
  ThetaArgs args{1.0, x_e, x_e, x_e, x_e, c};
  return binary_cdf(t, failure_probability(args), or_equal);
}

double theta_logistic(const MediationFit& fit, const ThetaArgs& args) {
  return LogisticThetaEngine(fit).theta(args);
}

// ---------------------------------------------------------------------------
// quantile_map and quadrature

double quantile_map(
    double m, const Vec& x_prime, const Vec& x_3p, const Vec& c,
    const std::function<double(double, const Vec&, const Vec&)>& cdf_of_m_given,
    const std::function<double(double, const Vec&, const Vec&)>& quantile_of_m_given) {
  const double p = cdf_of_m_given(m, x_prime, c);
  if (!std::isfinite(p)) {
    throw NonInvertibleCdf("conditional CDF returned a non-finite value");
  }
  const double mapped = quantile_of_m_given(p, x_3p, c);
  if (!std::isfinite(mapped)) {
    throw NonInvertibleCdf(
        "conditional quantile reported a flat region (non-finite inverse)");
  }
  return mapped;
}

double quantile_map_linear(double m, const Vec& x_prime, const Vec& x_3p,
                           const Vec& g1) {
  return m + dot_checked(g1, x_3p, "quantile_map x_3p") -
         dot_checked(g1, x_prime, "quantile_map x_prime");
}

MediatorParams mediator_params(const LinearScmSpec& spec) {
  MediatorParams med;
  med.g0 = spec.g0; med.g1 = spec.g1; med.g2 = spec.g2;
  med.b0 = spec.b0; med.b1 = spec.b1; med.b2 = spec.b2; med.b3 = spec.b3;
  med.sigma_m = spec.sigma_m; med.sigma_n = spec.sigma_n;
  return med;
}

namespace {

double theta_quadrature_once(
    const std::function<double(double, const Vec&, double, double, const Vec&)>&
        outcome_cdf,
    const MediatorParams& med, const ThetaArgs& args, std::size_t nodes) {
  const auto& rule = gauss_hermite(nodes);
  const double mu_m = med.g0 + dot_checked(med.g1, args.x_p, "theta x_p") +
                      dot_checked(med.g2, args.c, "theta c");
  const double n_base = med.b0 + dot_checked(med.b1, args.x_pp, "theta x_pp") +
                        dot_checked(med.b3, args.c, "theta c");

  // Gaussian conditional CDF/quantile accessors for M | X, C. The quantile
  // accessor clamps its argument away from the saturated endpoints: extreme
  // quadrature nodes can push the CDF to exactly 1 in double precision, and
  // the resulting transport error carries a weight below 1e-25.
  const auto cdf_acc = [&med](double mval, const Vec& xx, const Vec& cc) {
    const double mu = med.g0 + dot_checked(med.g1, xx, "quantile_map x") +
                      dot_checked(med.g2, cc, "quantile_map c");
    return normal_cdf((mval - mu) / med.sigma_m);
  };
  const auto quant_acc = [&med](double p, const Vec& xx, const Vec& cc) {
    const double mu = med.g0 + dot_checked(med.g1, xx, "quantile_map x") +
                      dot_checked(med.g2, cc, "quantile_map c");
    const double pc = std::min(std::max(p, 1e-300), 1.0 - 1.1e-16);
    return mu + med.sigma_m * normal_quantile(pc);
  };

  double acc = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double m = mu_m + med.sigma_m * rule.nodes[i];
    const double m_inner =
        quantile_map(m, args.x_p, args.x_ppp, args.c, cdf_acc, quant_acc);
    const double mu_n = n_base + med.b2 * m_inner;
    double inner = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) {
      const double n = mu_n + med.sigma_n * rule.nodes[j];
      inner += rule.weights[j] * outcome_cdf(args.y, args.x, m, n, args.c);
    }
    acc += rule.weights[i] * inner;
  }
  return acc;
}

}  // namespace

double theta_quadrature(
    const std::function<double(double, const Vec&, double, double, const Vec&)>&
        outcome_cdf,
    const MediatorParams& med, const ThetaArgs& args, std::size_t nodes) {
  if (nodes < 8) {
    throw ConfigError("theta_quadrature requires at least 8 nodes");
  }
  if (args.y == kInf) return 1.0;
  if (args.y == -kInf) return 0.0;
  const std::size_t n1 = std::max<std::size_t>(nodes, 32);
  const double r1 = theta_quadrature_once(outcome_cdf, med, args, n1);
  const double r2 = theta_quadrature_once(outcome_cdf, med, args, 2 * n1);
  if (std::fabs(r2 - r1) > 1e-6) {
    throw QuadratureDivergence(
        "doubling the Gauss-Hermite node count changed theta by " +
        std::to_string(std::fabs(r2 - r1)));
  }
  return r2;
}

QuadratureThetaEngine::QuadratureThetaEngine(const LinearScmSpec& spec,
                                             std::size_t nodes)
    : spec_(spec), med_(mediator_params(spec)), nodes_(nodes) {
  validate_spec(spec_);
  if (spec_.noise_transform_y != NoiseTransformY::identity) {
    throw ConfigError(
        "analytic engines require the identity outcome-noise transform "
        "(monotonicity holds only then)");
  }
}

double QuadratureThetaEngine::theta(const ThetaArgs& args) const {
  if (spec_.link == OutcomeLink::identity) {
    const auto cdf = [this](double y, const Vec& x, double m, double n,
                            const Vec& c) {
      const double mu = spec_.a0 + dot_checked(spec_.a1, x, "theta x") +
                        spec_.a2 * m + spec_.a3 * n +
                        dot_checked(spec_.a4, c, "theta c");
      return normal_cdf((y - mu) / spec_.sigma_y);
    };
    return theta_quadrature(cdf, med_, args, nodes_);
  }
  // Logistic link: P(Y < y) under the binary convention; the nontrivial
  // branch integrates the failure probability over the mediator densities.
  if (args.y <= 0.0) return 0.0;
  if (args.y > 1.0) return 1.0;
  const auto cdf = [this](double /*y*/, const Vec& x, double m, double n,
                          const Vec& c) {
    const double lin = spec_.a0 + dot_checked(spec_.a1, x, "theta x") +
                       spec_.a2 * m + spec_.a3 * n +
                       dot_checked(spec_.a4, c, "theta c");
    return 1.0 - expit(spec_.logistic_scale * lin);
  };
  return theta_quadrature(cdf, med_, args, nodes_);
}

double QuadratureThetaEngine::outcome_cdf(double t, const Vec& x_e,
                                          const Vec& c, bool or_equal) const {
  if (spec_.link == OutcomeLink::identity) {
    return theta(ThetaArgs{t, x_e, x_e, x_e, x_e, c});
  }
  ThetaArgs args{1.0, x_e, x_e, x_e, x_e, c};
  return binary_cdf(t, theta(args), or_equal);
}

// ---------------------------------------------------------------------------
// Theorem 4.2 formulas

namespace {

struct EvidenceCdfs {
  double lo = 0.0;
  double hi = 1.0;
};

EvidenceCdfs evidence_cdfs(const ThetaEngine& engine, const PnsQuery& query) {
  const Evidence& ev = query.evidence;
  if (ev.empty) return {0.0, 1.0};
  EvidenceCdfs out;
  out.lo = (ev.y_lo == -kInf)
               ? 0.0
               : engine.outcome_cdf(ev.y_lo, ev.x_e, query.c, false);
  out.hi = (ev.y_hi == kInf)
               ? 1.0
               : engine.outcome_cdf(ev.y_hi, ev.x_e, query.c, ev.closed);
  return out;
}

GammaDelta gamma_delta_raw(const ThetaEngine& engine, const PnsQuery& query) {
  const Vec& x = query.x;
  const Vec& xp = query.x_prime;
  const double y = query.y;
  const Vec& c = query.c;

  GammaDelta gd;
  gd.thetas[0] = engine.theta(ThetaArgs{y, xp, xp, xp, xp, c});
  gd.thetas[1] = engine.theta(ThetaArgs{y, xp, x, xp, xp, c});
  gd.thetas[2] = engine.theta(ThetaArgs{y, xp, x, xp, x, c});
  gd.thetas[3] = engine.theta(ThetaArgs{y, xp, x, x, x, c});
  gd.thetas[4] = engine.theta(ThetaArgs{y, x, x, x, x, c});

  const EvidenceCdfs ev = evidence_cdfs(engine, query);
  gd.evid_lo_cdf = ev.lo;
  gd.evid_hi_cdf = ev.hi;
  gd.delta = ev.hi - ev.lo;

  const double th1 = gd.thetas[0], th2 = gd.thetas[1], th3 = gd.thetas[2],
               th4 = gd.thetas[3], th5 = gd.thetas[4];
  const double u = ev.hi, l = ev.lo;

  gd.gamma1 = std::min(std::min(th1, th3), std::min(th4, u)) -
              std::max(th5, l);
  gd.gamma2 = std::min(th1, std::min(th3, u)) -
              std::max(th5, std::max(l, th4));
  gd.gamma3 = std::min(th1, std::min(u, th2)) -
              std::max(th5, std::max(l, th3));
  gd.gamma4 = std::min(th1, u) -
              std::max(std::max(th5, th3), std::max(l, th2));
  return gd;
}

}  // namespace

GammaDelta gamma_delta(const ThetaEngine& engine, const PnsQuery& query) {
  GammaDelta gd = gamma_delta_raw(engine, query);
  if (gd.delta < kPointEvidenceDelta) {
    throw PointEvidence(
        "evidence interval carries zero probability mass (delta = " +
        std::to_string(gd.delta) + "); use the indicator case");
  }
  return gd;
}

std::array<bool, 4> point_evidence_indicators(const ThetaEngine& engine,
                                              const PnsQuery& query) {
  const GammaDelta gd = gamma_delta_raw(engine, query);
  const double th1 = gd.thetas[0], th2 = gd.thetas[1], th3 = gd.thetas[2],
               th4 = gd.thetas[3], th5 = gd.thetas[4];
  const double u = gd.evid_hi_cdf;
  const bool in_t = (th1 <= u) && (u < th5);
  return {
      in_t && (th3 <= u) && (th4 <= u),  // X -> Y
      in_t && (th3 <= u) && (u < th4),   // X -> N -> Y
      in_t && (u < th3) && (th2 <= u),   // X -> M -> N -> Y
      in_t && (u < th3) && (u < th2),    // X -> M -> Y
  };
}

PnsDecomposition decompose(const ThetaEngine& engine, const PnsQuery& query) {
  GammaDelta gd = gamma_delta_raw(engine, query);
  PnsDecomposition out;
  out.diagnostics = gd;

  const double* th = gd.thetas.data();
  out.theta_monotone = true;
  for (int i = 0; i + 1 < 5; ++i) {
    if (th[i] < th[i + 1] - 1e-12) out.theta_monotone = false;
  }

  if (gd.delta < kPointEvidenceDelta) {
    out.point_evidence = true;
    const double u = gd.evid_hi_cdf;
    const bool in_t = (th[0] <= u) && (u < th[4]);
    const auto ind = point_evidence_indicators(engine, query);
    out.point.pns_xy = ind[0] ? 1.0 : 0.0;
    out.point.pns_xny = ind[1] ? 1.0 : 0.0;
    out.point.pns_xmny = ind[2] ? 1.0 : 0.0;
    out.point.pns_xmy = ind[3] ? 1.0 : 0.0;
    out.point.t_pns = in_t ? 1.0 : 0.0;
  } else {
    const double u = gd.evid_hi_cdf, l = gd.evid_lo_cdf, d = gd.delta;
    out.point.t_pns =
        clamp01(std::max((std::min(th[0], u) - std::max(th[4], l)) / d, 0.0));
    out.point.pns_xy = clamp01(std::max(gd.gamma1 / d, 0.0));
    out.point.pns_xny = clamp01(std::max(gd.gamma2 / d, 0.0));
    out.point.pns_xmny = clamp01(std::max(gd.gamma3 / d, 0.0));
    out.point.pns_xmy = clamp01(std::max(gd.gamma4 / d, 0.0));
  }
  out.point.nd_pns = out.point.pns_xy + out.point.pns_xny;
  out.point.ni_pns = out.point.pns_xmny + out.point.pns_xmy;
  return out;
}

PnsDecomposition decompose_analytic(const LinearScmSpec& spec,
                                    const PnsQuery& query) {
  const PnsQuery q = validate_query(spec, query);
  if (spec.noise_transform_y != NoiseTransformY::identity) {
    throw ConfigError(
        "analytic decomposition requires the identity outcome-noise "
        "transform (monotonicity holds only then)");
  }
  if (spec.link == OutcomeLink::identity) {
    return decompose(LinearThetaEngine(spec), q);
  }
  return decompose(QuadratureThetaEngine(spec), q);
}

PnsDecomposition decompose_fit(const MediationFit& fit, const PnsQuery& query) {
  const PnsQuery q = validate_query(fit, query);
  if (fit.link == OutcomeLink::identity) {
    return decompose(LinearThetaEngine(fit), q);
  }
  return decompose(LogisticThetaEngine(fit), q);
}

}  // namespace pocmed
