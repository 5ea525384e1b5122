#include "pocmed/model.hpp"

#include <cmath>
#include <cstddef>

namespace pocmed {

double dot_checked(const Vec& coef, const Vec& v, const std::string& what) {
  if (coef.size() != v.size()) {
    throw DimensionMismatch(what + ": expected length " +
                            std::to_string(coef.size()) + ", got " +
                            std::to_string(v.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i) acc += coef[i] * v[i];
  return acc;
}

namespace {

void check_len(const Vec& v, int expected, const char* name) {
  if (static_cast<int>(v.size()) != expected) {
    throw DimensionMismatch(std::string(name) + ": expected length " +
                            std::to_string(expected) + ", got " +
                            std::to_string(v.size()));
  }
}

}  // namespace

void validate_spec(const LinearScmSpec& spec) {
  if (spec.dim_x < 1) {
    throw DimensionMismatch("dim_x must be >= 1");
  }
  if (spec.dim_c < 0) {
    throw DimensionMismatch("dim_c must be >= 0");
  }
  check_len(spec.a1, spec.dim_x, "alpha.a1");
  check_len(spec.a4, spec.dim_c, "alpha.a4");
  check_len(spec.b1, spec.dim_x, "beta.b1");
  check_len(spec.b3, spec.dim_c, "beta.b3");
  check_len(spec.g1, spec.dim_x, "gamma.g1");
  check_len(spec.g2, spec.dim_c, "gamma.g2");
  if (!(spec.sigma_y > 0.0) || !(spec.sigma_m > 0.0) || !(spec.sigma_n > 0.0)) {
    throw NonPositiveSigma("all sigma values must be > 0");
  }
  if (spec.noise_transform_y == NoiseTransformY::mix &&
      (spec.alpha_mix < 0.0 || spec.alpha_mix > 1.0)) {
    throw ConfigError("alpha_mix must be in [0, 1]");
  }
  if (spec.link == OutcomeLink::logistic && !(spec.logistic_scale > 0.0)) {
    throw ConfigError("logistic scale must be > 0");
  }
}

PnsQuery validate_query_dims(int dim_x, int dim_c, const PnsQuery& query) {
  PnsQuery q = query;
  check_len(q.x, dim_x, "query.x");
  check_len(q.x_prime, dim_x, "query.x_prime");
  check_len(q.c, dim_c, "query.c");
  if (q.evidence.empty) {
    q.evidence.x_e.clear();
    q.evidence.y_lo = -kInf;
    q.evidence.y_hi = kInf;
    q.evidence.closed = false;
  } else {
    check_len(q.evidence.x_e, dim_x, "evidence.x_e");
    if (!(q.evidence.y_lo <= q.evidence.y_hi)) {
      throw EmptyEvidenceInterval("evidence interval has y_lo > y_hi");
    }
    if (!q.evidence.closed && q.evidence.y_lo == q.evidence.y_hi) {
      throw EmptyEvidenceInterval(
          "half-open evidence interval [y, y) is empty");
    }
  }
  if (!std::isfinite(q.y)) {
    throw ConfigError("query threshold y must be finite");
  }
  return q;
}

PnsQuery validate_query(const LinearScmSpec& spec, const PnsQuery& query) {
  validate_spec(spec);
  return validate_query_dims(spec.dim_x, spec.dim_c, query);
}

PnsQuery validate_query(const MediationFit& fit, const PnsQuery& query) {
  return validate_query_dims(fit.dim_x, fit.dim_c, query);
}

}  // namespace pocmed
