#pragma once

#include <cmath>

#include "pocmed/model.hpp"
#include "pocmed/trimediator.hpp"

namespace testutil {

// Two-mediator model with every structural coefficient equal to one and
// unit noise, no covariates. Closed forms: the treated/untreated outcome
// gap per exposure step is 1 and the total outcome sd is sqrt(6).
inline pocmed::LinearScmSpec all_ones_spec() {
  pocmed::LinearScmSpec s;
  s.dim_x = 1;
  s.dim_c = 0;
  s.a0 = 0.0;
  s.a1 = {1.0};
  s.a2 = 1.0;
  s.a3 = 1.0;
  s.a4 = {};
  s.b0 = 0.0;
  s.b1 = {1.0};
  s.b2 = 1.0;
  s.b3 = {};
  s.g0 = 0.0;
  s.g1 = {1.0};
  s.g2 = {};
  return s;
}

// Same model with one covariate feeding M, N and Y with weight one.
inline pocmed::LinearScmSpec all_ones_with_cov() {
  pocmed::LinearScmSpec s = all_ones_spec();
  s.dim_c = 1;
  s.a4 = {1.0};
  s.b3 = {1.0};
  s.g2 = {1.0};
  return s;
}

// Binary-outcome variant: P(Y=1) = expit(10 * (X + M + N + C)).
inline pocmed::LinearScmSpec logistic_spec() {
  pocmed::LinearScmSpec s = all_ones_with_cov();
  s.link = pocmed::OutcomeLink::logistic;
  s.logistic_scale = 10.0;
  return s;
}

// The standard query: x' = 0, x = 1 at the outcome threshold.
inline pocmed::PnsQuery unit_query(double y = 0.0, int dim_c = 0) {
  pocmed::PnsQuery q;
  q.x = {1.0};
  q.x_prime = {0.0};
  q.y = y;
  q.c.assign(static_cast<std::size_t>(dim_c), 0.0);
  return q;
}

// Three-mediator model with all coefficients one and unit noise.
// Marginalizing the third mediator gives outcome weights (2, 2, 2) on
// (X, M1, M2) and outcome sd sqrt(2); the total effect weight on X is 8
// with overall counterfactual sd sqrt(22).
inline pocmed::TriScmSpec tri_all_ones() {
  pocmed::TriScmSpec s;
  s.dim_x = 1;
  s.dim_c = 0;
  s.p0 = 0.0;
  s.p1 = {1.0};
  s.p2 = {};
  s.q0 = 0.0;
  s.q1 = {1.0};
  s.q2 = 1.0;
  s.q3 = {};
  s.d0 = 0.0;
  s.d1 = {1.0};
  s.d2 = 1.0;
  s.d3 = 1.0;
  s.d4 = {};
  s.a0 = 0.0;
  s.a1 = {1.0};
  s.a2 = 1.0;
  s.a3 = 1.0;
  s.a4 = 1.0;
  s.a5 = {};
  return s;
}

inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace testutil
