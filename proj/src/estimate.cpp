#include "pocmed/estimate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pocmed/identify.hpp"
#include "pocmed/math.hpp"
#include "pocmed/rng.hpp"

namespace pocmed {

namespace {

constexpr double kRankTolerance = 1e-10;

/// Builds the design matrix [1, X..., extras..., C...] for the given rows.
Eigen::MatrixXd design(const Dataset& d, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& extra_cols) {
  const std::size_t n = rows.size();
  const std::size_t p =
      1 + d.roles.x.size() + extra_cols.size() + d.roles.c.size();
  Eigen::MatrixXd X(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = rows[i];
    std::size_t j = 0;
    X(i, j++) = 1.0;
    for (std::size_t col : d.roles.x) X(i, j++) = d.at(r, col);
    for (std::size_t col : extra_cols) X(i, j++) = d.at(r, col);
    for (std::size_t col : d.roles.c) X(i, j++) = d.at(r, col);
  }
  return X;
}

Eigen::VectorXd column(const Dataset& d, const std::vector<std::size_t>& rows,
                       std::size_t col) {
  Eigen::VectorXd v(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) v(i) = d.at(rows[i], col);
  return v;
}

RegressionFit ols_one(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const char* name) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (n < p + 2) {
    throw InsufficientRows(std::string(name) + ": " + std::to_string(n) +
                           " rows for " + std::to_string(p) +
                           " coefficients (need at least p + 2)");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(kRankTolerance);
  if (qr.rank() < p) {
    throw RankDeficient(std::string(name) +
                        ": design matrix is rank deficient (rank " +
                        std::to_string(qr.rank()) + " of " +
                        std::to_string(p) + ")");
  }
  RegressionFit fit;
  Eigen::VectorXd beta = qr.solve(y);
  Eigen::VectorXd resid = y - X * beta;
  fit.coef.assign(beta.data(), beta.data() + p);
  fit.residuals.assign(resid.data(), resid.data() + n);
  fit.resid_sd = std::sqrt(resid.squaredNorm() / static_cast<double>(n - p));
  return fit;
}

std::vector<std::size_t> all_rows(const Dataset& d) {
  std::vector<std::size_t> rows(d.n_rows);
  for (std::size_t i = 0; i < d.n_rows; ++i) rows[i] = i;
  return rows;
}

void check_roles(const Dataset& d) {
  if (d.n_rows == 0) throw EmptyDataset("dataset has no rows");
  const std::size_t ncol = d.columns.size();
  auto check = [&](std::size_t col, const char* what) {
    if (col >= ncol) {
      throw MissingColumn(std::string(what) + " role index " +
                          std::to_string(col) + " out of range");
    }
  };
  for (std::size_t col : d.roles.x) check(col, "treatment");
  check(d.roles.m, "mediator m");
  check(d.roles.n, "mediator n");
  check(d.roles.y, "outcome");
  for (std::size_t col : d.roles.c) check(col, "covariate");
  if (d.roles.x.empty()) throw MissingColumn("no treatment columns assigned");
}

MediationFit fit_with_rows(const Dataset& d,
                           const std::vector<std::size_t>& rows,
                           OutcomeLink link);

RegressionFit logistic_one(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const char* name) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (n < p + 2) {
    throw InsufficientRows(std::string(name) + ": " + std::to_string(n) +
                           " rows for " + std::to_string(p) + " coefficients");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) {
      throw NonBinaryOutcome(std::string(name) +
                             ": outcome value " + std::to_string(y(i)) +
                             " at row " + std::to_string(i) +
                             " is not in {0, 1}");
    }
  }
  const double y_sum = y.sum();
  if (y_sum == 0.0 || y_sum == static_cast<double>(n)) {
    throw PerfectSeparation(std::string(name) + ": outcome is constant");
  }
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < p) {
      throw RankDeficient(std::string(name) + ": design matrix is rank "
                          "deficient");
    }
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  auto loglik = [&](const Eigen::VectorXd& b) {
    const Eigen::ArrayXd eta = (X * b).array();
    // log sigma(eta) - (1-y) * eta, numerically stable via log1p(exp(-|eta|))
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double e = eta(i);
      const double log_sig = (e >= 0) ? -std::log1p(std::exp(-e))
                                      : e - std::log1p(std::exp(e));
      ll += y(i) * log_sig + (1.0 - y(i)) * (log_sig - e);
    }
    return ll;
  };

  bool converged = false;
  double ll = loglik(beta);
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd prob(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      prob(i) = expit(eta(i));
      w(i) = std::max(prob(i) * (1.0 - prob(i)), 1e-10);
    }
    Eigen::VectorXd grad = X.transpose() * (y - prob);
    if (grad.lpNorm<Eigen::Infinity>() <= 1e-8) {
      converged = true;
      break;
    }
    Eigen::MatrixXd H = X.transpose() * w.asDiagonal() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    if (ldlt.info() != Eigen::Success) {
      throw RankDeficient(std::string(name) +
                          ": weighted information matrix is singular");
    }
    Eigen::VectorXd step = ldlt.solve(grad);
    // Step-halving guard: Newton can overshoot on steep likelihoods.
    double scale = 1.0;
    Eigen::VectorXd candidate = beta + step;
    double ll_new = loglik(candidate);
    int halvings = 0;
    while (ll_new < ll - 1e-12 && halvings < 30) {
      scale *= 0.5;
      candidate = beta + scale * step;
      ll_new = loglik(candidate);
      ++halvings;
    }
    beta = candidate;
    ll = ll_new;
    if (beta.lpNorm<Eigen::Infinity>() > 1e4) {
      throw PerfectSeparation(std::string(name) +
                              ": coefficients diverged (|beta| > 1e4)");
    }
  }
  if (!converged) {
    throw PerfectSeparation(std::string(name) +
                            ": Newton iterations did not converge in 100 "
                            "steps (gradient above 1e-8)");
  }
  RegressionFit fit;
  fit.coef.assign(beta.data(), beta.data() + p);
  fit.resid_sd = 0.0;
  return fit;
}

MediationFit fit_with_rows(const Dataset& d,
                           const std::vector<std::size_t>& rows,
                           OutcomeLink link) {
  MediationFit fit;
  fit.n_obs = rows.size();
  fit.dim_x = static_cast<int>(d.roles.x.size());
  fit.dim_c = static_cast<int>(d.roles.c.size());
  fit.link = link;

  fit.fit_m = ols_one(design(d, rows, {}), column(d, rows, d.roles.m),
                      "regression M ~ X + C");
  fit.fit_n = ols_one(design(d, rows, {d.roles.m}), column(d, rows, d.roles.n),
                      "regression N ~ X + M + C");
  const Eigen::MatrixXd Xy = design(d, rows, {d.roles.m, d.roles.n});
  const Eigen::VectorXd yv = column(d, rows, d.roles.y);
  if (link == OutcomeLink::identity) {
    fit.fit_y = ols_one(Xy, yv, "regression Y ~ X + M + N + C");
  } else {
    fit.fit_y = logistic_one(Xy, yv, "logistic regression Y ~ X + M + N + C");
  }
  return fit;
}

bool outcome_is_binary(const Dataset& d) {
  bool saw_any = false;
  for (std::size_t r = 0; r < d.n_rows; ++r) {
    const double v = d.at(r, d.roles.y);
    if (v != 0.0 && v != 1.0) return false;
    saw_any = true;
  }
  return saw_any;
}

ComponentSet components_of(const PnsDecomposition& dec) { return dec.point; }

double percentile(std::vector<double>& sorted_values, double q) {
  // Linear interpolation between order statistics (the common default).
  const std::size_t n = sorted_values.size();
  if (n == 1) return sorted_values[0];
  const double h = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac;
}

}  // namespace

MediationFit fit_ols(const Dataset& data) {
  check_roles(data);
  return fit_with_rows(data, all_rows(data), OutcomeLink::identity);
}

MediationFit fit_logistic(const Dataset& data) {
  check_roles(data);
  return fit_with_rows(data, all_rows(data), OutcomeLink::logistic);
}

PnsDecomposition estimate_decomposition(const Dataset& data,
                                        const PnsQuery& query) {
  check_roles(data);
  const OutcomeLink link =
      outcome_is_binary(data) ? OutcomeLink::logistic : OutcomeLink::identity;
  const MediationFit fit = fit_with_rows(data, all_rows(data), link);
  return decompose_fit(fit, query);
}

PnsDecomposition bootstrap_ci(const Dataset& data, const PnsQuery& query,
                              const BootstrapConfig& config) {
  check_roles(data);
  if (config.resamples < 1) {
    throw ConfigError("bootstrap needs at least one resample");
  }
  if (!(config.level > 0.0 && config.level < 1.0)) {
    throw ConfigError("bootstrap confidence level must be in (0, 1)");
  }
  const OutcomeLink link =
      outcome_is_binary(data) ? OutcomeLink::logistic : OutcomeLink::identity;

  PnsDecomposition out = decompose_fit(
      fit_with_rows(data, all_rows(data), link), query);

  const std::size_t b_target = config.resamples;
  const std::size_t max_attempts = 10 * b_target;
  std::vector<ComponentSet> draws;
  draws.reserve(b_target);
  std::vector<std::size_t> rows(data.n_rows);
  // Each attempt uses its own counter-derived stream, so results do not
  // depend on how attempts are scheduled.
  for (std::size_t attempt = 0;
       attempt < max_attempts && draws.size() < b_target; ++attempt) {
    CounterRng rng(config.seed, /*stream=*/attempt);
    for (std::size_t i = 0; i < data.n_rows; ++i) {
      rows[i] = static_cast<std::size_t>(rng.next_index(data.n_rows));
    }
    try {
      const MediationFit fit = fit_with_rows(data, rows, link);
      draws.push_back(components_of(decompose_fit(fit, query)));
    } catch (const RankDeficient&) {
    } catch (const PerfectSeparation&) {
    } catch (const InsufficientRows&) {
    } catch (const NonPositiveSigma&) {
    }
  }
  if (draws.size() < b_target) {
    throw TooManyFailedResamples(
        "only " + std::to_string(draws.size()) + " of " +
        std::to_string(b_target) + " bootstrap resamples succeeded within " +
        std::to_string(max_attempts) + " attempts");
  }

  const double q_lo = (1.0 - config.level) / 2.0;
  const double q_hi = 1.0 - q_lo;
  ComponentSet lo, hi;
  auto fill = [&](double ComponentSet::*field) {
    std::vector<double> vals;
    vals.reserve(draws.size());
    for (const auto& d : draws) vals.push_back(d.*field);
    std::sort(vals.begin(), vals.end());
    double l = std::clamp(percentile(vals, q_lo), 0.0, 1.0);
    double h = std::clamp(percentile(vals, q_hi), 0.0, 1.0);
    if (vals.size() >= 2) {
      // Non-degenerate CIs bracket the clipped point estimate; with B=1
      // both bounds are the single resample estimate unchanged.
      const double point = std::clamp(out.point.*field, 0.0, 1.0);
      l = std::min(l, point);
      h = std::max(h, point);
    }
    lo.*field = l;
    hi.*field = h;
  };
  fill(&ComponentSet::t_pns);
  fill(&ComponentSet::nd_pns);
  fill(&ComponentSet::ni_pns);
  fill(&ComponentSet::pns_xy);
  fill(&ComponentSet::pns_xny);
  fill(&ComponentSet::pns_xmny);
  fill(&ComponentSet::pns_xmy);
  out.ci_lo = lo;
  out.ci_hi = hi;
  return out;
}

}  // namespace pocmed
