#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "helpers.hpp"
#include "pocmed/identify.hpp"
#include "pocmed/trimediator.hpp"

using namespace pocmed;
using testutil::phi;

TEST_CASE("three-mediator path names are fixed and ordered") {
  REQUIRE(kTriPathNames.size() == 8);
  CHECK(std::string(kTriPathNames[0]) == "pns_xy");
  CHECK(std::string(kTriPathNames[1]) == "pns_xm3y");
  CHECK(std::string(kTriPathNames[2]) == "pns_xm2y");
  CHECK(std::string(kTriPathNames[3]) == "pns_xm2m3y");
  CHECK(std::string(kTriPathNames[4]) == "pns_xm1m2y");
  CHECK(std::string(kTriPathNames[5]) == "pns_xm1m2m3y");
  CHECK(std::string(kTriPathNames[6]) == "pns_xm1y");
  CHECK(std::string(kTriPathNames[7]) == "pns_xm1m3y");
}

TEST_CASE("tri spec validation mirrors the two-mediator rules") {
  auto s = testutil::tri_all_ones();
  CHECK_NOTHROW(validate_tri_spec(s));
  s.d1 = {1.0, 2.0};
  CHECK_THROWS_AS(validate_tri_spec(s), DimensionMismatch);
  s = testutil::tri_all_ones();
  s.sigma_m3 = 0.0;
  CHECK_THROWS_AS(validate_tri_spec(s), NonPositiveSigma);
}

TEST_CASE("tri oracle rejects tiny simulation sizes") {
  CHECK_THROWS_AS(tri_oracle_decompose(testutil::tri_all_ones(),
                                       testutil::unit_query(), 10, 0),
                  ConfigError);
}

TEST_CASE("severing every mediator edge into Y leaves only the direct path") {
  auto s = testutil::tri_all_ones();
  s.q2 = 0.0;              // M1 -> M2
  s.d2 = 0.0;              // M1 -> M3
  s.d3 = 0.0;              // M2 -> M3
  s.a2 = s.a3 = s.a4 = 0;  // M1, M2, M3 -> Y
  const TriDecomposition d =
      tri_oracle_decompose(s, testutil::unit_query(), 100000, 1);
  CHECK(d.paths[0] == d.t_pns);
  CHECK(d.path_counts[0] == d.t_count);
  for (std::size_t i = 1; i < 8; ++i) {
    CHECK(d.paths[i] == 0.0);
    CHECK(d.path_counts[i] == 0);
  }
  // Y = X + U_Y here, so T has the single-path closed form
  CHECK(std::abs(d.t_pns - (phi(0.0) - phi(-1.0))) < 0.005);
}

TEST_CASE("tri oracle under a null contrast is exactly zero") {
  auto q = testutil::unit_query();
  q.x_prime = q.x;
  const TriDecomposition d =
      tri_oracle_decompose(testutil::tri_all_ones(), q, 10000, 2);
  CHECK(d.t_count == 0);
  CHECK(d.t_pns == 0.0);
  for (double p : d.paths) CHECK(p == 0.0);
}

TEST_CASE("eight path frequencies partition the total effect") {
  const TriDecomposition d = tri_oracle_decompose(testutil::tri_all_ones(),
                                                  testutil::unit_query(),
                                                  1000000, 2);

  // exact count-level identities
  std::uint64_t path_sum = 0;
  for (std::uint64_t c : d.path_counts) path_sum += c;
  CHECK(path_sum == d.t_count);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(d.agg_counts[k] == d.path_counts[2 * k] + d.path_counts[2 * k + 1]);
  }
  CHECK(d.retained == 1000000);
  CHECK(d.acceptance_rate == 1.0);

  // frequency-level identities (exact divisions by the same denominator)
  CHECK(std::abs(d.agg_xy + d.agg_xny + d.agg_xmny + d.agg_xmy - d.t_pns) <
        1e-12);
  CHECK(std::abs(d.nd_pns - (d.agg_xy + d.agg_xny)) < 1e-15);
  CHECK(std::abs(d.ni_pns - (d.agg_xmny + d.agg_xmy)) < 1e-15);

  // closed form for the all-ones model: the X weight on Y totals 8 and the
  // counterfactual sd is sqrt(22)
  const double want = phi(0.0) - phi(-8.0 / std::sqrt(22.0));
  CHECK(std::abs(d.t_pns - want) < 0.003);
  CHECK(std::abs(want - 0.4559592441689048) < 1e-15);

  // every path should carry visible mass in the all-ones model
  for (double p : d.paths) CHECK(p > 0.01);

  // bitwise determinism
  const TriDecomposition again = tri_oracle_decompose(
      testutil::tri_all_ones(), testutil::unit_query(), 1000000, 2);
  CHECK(d.t_pns == again.t_pns);
  CHECK(d.paths[5] == again.paths[5]);
}

TEST_CASE("marginalizing the third mediator composes coefficients") {
  const LinearScmSpec marg = marginalize_m3(testutil::tri_all_ones());
  CHECK(marg.dim_x == 1);
  CHECK(marg.dim_c == 0);
  CHECK(marg.g1 == Vec{1.0});
  CHECK(marg.b1 == Vec{1.0});
  CHECK(marg.b2 == 1.0);
  CHECK(marg.a1 == Vec{2.0});  // a1 + a4*d1
  CHECK(marg.a2 == 2.0);       // a2 + a4*d2
  CHECK(marg.a3 == 2.0);       // a3 + a4*d3
  CHECK(std::abs(marg.sigma_y - std::sqrt(2.0)) < 1e-15);

  // the marginalized analytic total effect equals the tri closed form
  const PnsDecomposition two =
      decompose_analytic(marg, testutil::unit_query());
  CHECK(std::abs(two.point.t_pns - (phi(0.0) - phi(-8.0 / std::sqrt(22.0)))) <
        1e-12);
}

TEST_CASE("tri aggregates agree with the marginalized two-mediator model") {
  const auto tri = testutil::tri_all_ones();
  const TriDecomposition d =
      tri_oracle_decompose(tri, testutil::unit_query(), 400000, 7);
  const PnsDecomposition two =
      decompose_analytic(marginalize_m3(tri), testutil::unit_query());

  CHECK(std::abs(d.t_pns - two.point.t_pns) < 0.01);
  CHECK(std::abs(d.agg_xy - two.point.pns_xy) < 0.01);
  CHECK(std::abs(d.agg_xny - two.point.pns_xny) < 0.01);
  CHECK(std::abs(d.agg_xmny - two.point.pns_xmny) < 0.01);
  CHECK(std::abs(d.agg_xmy - two.point.pns_xmy) < 0.01);
  CHECK(std::abs(d.nd_pns - two.point.nd_pns) < 0.01);
  CHECK(std::abs(d.ni_pns - two.point.ni_pns) < 0.01);
}

TEST_CASE("tri oracle honors evidence conditioning") {
  auto q = testutil::unit_query();
  q.evidence.empty = false;
  q.evidence.x_e = {0.0};
  q.evidence.y_lo = 0.0;
  q.evidence.y_hi = kInf;
  const TriDecomposition d =
      tri_oracle_decompose(testutil::tri_all_ones(), q, 100000, 3);
  // P(Y >= 0 | X = 0) = 1/2 by symmetry
  CHECK(std::abs(d.acceptance_rate - 0.5) < 0.01);
  // evidence Y_{x'} >= 0 contradicts the necessity event exactly
  CHECK(d.t_count == 0);
  CHECK(d.t_pns == 0.0);

  auto starving = q;
  starving.evidence.y_lo = 200.0;
  starving.evidence.y_hi = 201.0;
  CHECK_THROWS_AS(
      tri_oracle_decompose(testutil::tri_all_ones(), starving, 10000, 3),
      EvidenceStarvation);
}
