#pragma once

#include <array>
#include <cstdint>

#include "pocmed/model.hpp"

namespace pocmed {

/// Linear-Gaussian structural model with three causally ordered mediators:
///   M1 = p0 + p1.x + p2.c + sigma_m1 * U1
///   M2 = q0 + q1.x + q2*m1 + q3.c + sigma_m2 * U2
///   M3 = d0 + d1.x + d2*m1 + d3*m2 + d4.c + sigma_m3 * U3
///   Y  = a0 + a1.x + a2*m1 + a3*m2 + a4*m3 + a5.c + sigma_y * U_Y
struct TriScmSpec {
  double p0 = 0.0;
  Vec p1, p2;
  double q0 = 0.0;
  Vec q1;
  double q2 = 0.0;
  Vec q3;
  double d0 = 0.0;
  Vec d1;
  double d2 = 0.0, d3 = 0.0;
  Vec d4;
  double a0 = 0.0;
  Vec a1;
  double a2 = 0.0, a3 = 0.0, a4 = 0.0;
  Vec a5;
  double sigma_m1 = 1.0, sigma_m2 = 1.0, sigma_m3 = 1.0, sigma_y = 1.0;
  int dim_x = 1;
  int dim_c = 0;
};

void validate_tri_spec(const TriScmSpec& spec);

/// The eight path components (order: XY, X->M3->Y, X->M2->Y, X->M2->M3->Y,
/// X->M1->M2->Y, X->M1->M2->M3->Y, X->M1->Y, X->M1->M3->Y), their
/// (M1,M2)-level aggregates, ND/NI with respect to M1, and T. Aggregate
/// counts are classified independently from the eight-way counts on the same
/// draws, so the pairwise-sum identities are verifiable count equalities.
struct TriDecomposition {
  std::array<double, 8> paths{};
  double agg_xy = 0.0;    // = paths[0] + paths[1]
  double agg_xny = 0.0;   // = paths[2] + paths[3]
  double agg_xmny = 0.0;  // = paths[4] + paths[5]
  double agg_xmy = 0.0;   // = paths[6] + paths[7]
  double nd_pns = 0.0;
  double ni_pns = 0.0;
  double t_pns = 0.0;
  double acceptance_rate = 1.0;
  // Raw counts for exact identity checks.
  std::array<std::uint64_t, 8> path_counts{};
  std::array<std::uint64_t, 4> agg_counts{};
  std::uint64_t t_count = 0;
  std::uint64_t retained = 0;
};

/// Names of the eight path components, in TriDecomposition::paths order.
extern const std::array<const char*, 8> kTriPathNames;

/// Monte-Carlo oracle over the nine nested counterfactual outcomes per draw;
/// every T-satisfying draw lands in exactly one of the eight categories.
/// Evidence handling matches the two-mediator oracle.
TriDecomposition tri_oracle_decompose(const TriScmSpec& spec,
                                      const PnsQuery& query, std::size_t n_mc,
                                      std::uint64_t seed);

/// The two-mediator model obtained by absorbing M3 into the outcome noise:
/// M = M1, N = M2, Y-coefficients composed through M3's equation, and
/// sigma_y* = sqrt(sigma_y^2 + a4^2 sigma_m3^2).
LinearScmSpec marginalize_m3(const TriScmSpec& spec);

}  // namespace pocmed
