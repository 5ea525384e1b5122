#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "pocmed/model.hpp"

using namespace pocmed;

TEST_CASE("validate_spec accepts the reference model") {
  CHECK_NOTHROW(validate_spec(testutil::all_ones_spec()));
  CHECK_NOTHROW(validate_spec(testutil::all_ones_with_cov()));
  CHECK_NOTHROW(validate_spec(testutil::logistic_spec()));
}

TEST_CASE("validate_spec rejects non-positive noise scales") {
  auto s = testutil::all_ones_spec();
  s.sigma_y = 0.0;
  CHECK_THROWS_AS(validate_spec(s), NonPositiveSigma);
  s = testutil::all_ones_spec();
  s.sigma_m = -1.0;
  CHECK_THROWS_AS(validate_spec(s), NonPositiveSigma);
}

TEST_CASE("validate_spec rejects mismatched coefficient lengths") {
  auto s = testutil::all_ones_spec();
  s.a1 = {1.0, 2.0};  // dim_x is 1
  CHECK_THROWS_AS(validate_spec(s), DimensionMismatch);
  s = testutil::all_ones_with_cov();
  s.g2 = {};  // dim_c is 1
  CHECK_THROWS_AS(validate_spec(s), DimensionMismatch);
}

TEST_CASE("validate_spec checks link and noise-transform parameters") {
  auto s = testutil::all_ones_spec();
  s.noise_transform_y = NoiseTransformY::mix;
  s.alpha_mix = 1.5;
  CHECK_THROWS_AS(validate_spec(s), ConfigError);
  s.alpha_mix = 0.5;
  CHECK_NOTHROW(validate_spec(s));

  auto l = testutil::logistic_spec();
  l.logistic_scale = 0.0;
  CHECK_THROWS_AS(validate_spec(l), ConfigError);
}

TEST_CASE("validate_query normalizes empty evidence to the infinite interval") {
  const auto spec = testutil::all_ones_spec();
  auto q = testutil::unit_query();
  const PnsQuery v = validate_query(spec, q);
  CHECK(v.evidence.y_lo == -kInf);
  CHECK(v.evidence.y_hi == kInf);
}

TEST_CASE("validate_query rejects dimension mismatches") {
  const auto spec = testutil::all_ones_spec();
  auto q = testutil::unit_query();
  q.x = {1.0, 0.0};
  CHECK_THROWS_AS(validate_query(spec, q), DimensionMismatch);

  q = testutil::unit_query();
  q.c = {0.0};  // spec has no covariates
  CHECK_THROWS_AS(validate_query(spec, q), DimensionMismatch);

  q = testutil::unit_query();
  q.evidence.empty = false;
  q.evidence.x_e = {0.0, 1.0};
  CHECK_THROWS_AS(validate_query(spec, q), DimensionMismatch);
}

TEST_CASE("validate_query rejects empty evidence intervals") {
  const auto spec = testutil::all_ones_spec();

  auto q = testutil::unit_query();
  q.evidence.empty = false;
  q.evidence.x_e = {0.0};
  q.evidence.y_lo = 0.5;
  q.evidence.y_hi = 0.5;
  q.evidence.closed = false;  // [y, y) is empty
  CHECK_THROWS_AS(validate_query(spec, q), EmptyEvidenceInterval);

  q.evidence.closed = true;  // [y, y] is the point mass, allowed
  CHECK_NOTHROW(validate_query(spec, q));

  q.evidence.closed = false;
  q.evidence.y_lo = 1.0;
  q.evidence.y_hi = 0.0;
  CHECK_THROWS_AS(validate_query(spec, q), EmptyEvidenceInterval);
}

TEST_CASE("validate_query requires a finite threshold") {
  const auto spec = testutil::all_ones_spec();
  auto q = testutil::unit_query();
  q.y = kInf;
  CHECK_THROWS_AS(validate_query(spec, q), ConfigError);
}

TEST_CASE("dot_checked guards vector lengths") {
  CHECK(dot_checked({1.0, 2.0}, {3.0, 4.0}, "w") == 11.0);
  CHECK_THROWS_AS(dot_checked({1.0}, {1.0, 2.0}, "w"), DimensionMismatch);
  try {
    dot_checked({1.0}, {1.0, 2.0}, "treatment weights");
    CHECK(false);
  } catch (const DimensionMismatch& e) {
    CHECK(std::string(e.what()).find("treatment weights") != std::string::npos);
    CHECK(e.code() == "DimensionMismatch");
  }
}
