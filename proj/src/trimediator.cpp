#include "pocmed/trimediator.hpp"

#include <cmath>
#include <string>

#include "pocmed/rng.hpp"

namespace pocmed {

const std::array<const char*, 8> kTriPathNames = {
    "pns_xy",      "pns_xm3y",   "pns_xm2y", "pns_xm2m3y",
    "pns_xm1m2y",  "pns_xm1m2m3y", "pns_xm1y", "pns_xm1m3y",
};

namespace {

void check_len(const Vec& v, int expected, const char* name) {
  if (static_cast<int>(v.size()) != expected) {
    throw DimensionMismatch(std::string(name) + ": expected length " +
                            std::to_string(expected) + ", got " +
                            std::to_string(v.size()));
  }
}

}  // namespace

void validate_tri_spec(const TriScmSpec& s) {
  if (s.dim_x < 1) throw DimensionMismatch("dim_x must be >= 1");
  if (s.dim_c < 0) throw DimensionMismatch("dim_c must be >= 0");
  check_len(s.p1, s.dim_x, "m1.x");
  check_len(s.p2, s.dim_c, "m1.c");
  check_len(s.q1, s.dim_x, "m2.x");
  check_len(s.q3, s.dim_c, "m2.c");
  check_len(s.d1, s.dim_x, "m3.x");
  check_len(s.d4, s.dim_c, "m3.c");
  check_len(s.a1, s.dim_x, "y.x");
  check_len(s.a5, s.dim_c, "y.c");
  if (!(s.sigma_m1 > 0) || !(s.sigma_m2 > 0) || !(s.sigma_m3 > 0) ||
      !(s.sigma_y > 0)) {
    throw NonPositiveSigma("all sigma values must be > 0");
  }
}

namespace {

struct TriUnit {
  const TriScmSpec& s;
  const Vec& c;
  double u1, u2, u3, uy;

  double m1(const Vec& x) const {
    return s.p0 + dot_checked(s.p1, x, "query x") +
           dot_checked(s.p2, c, "query c") + s.sigma_m1 * u1;
  }
  double m2(const Vec& x, double m1v) const {
    return s.q0 + dot_checked(s.q1, x, "query x") + s.q2 * m1v +
           dot_checked(s.q3, c, "query c") + s.sigma_m2 * u2;
  }
  double m3(const Vec& x, double m1v, double m2v) const {
    return s.d0 + dot_checked(s.d1, x, "query x") + s.d2 * m1v + s.d3 * m2v +
           dot_checked(s.d4, c, "query c") + s.sigma_m3 * u3;
  }
  double y(const Vec& x, double m1v, double m2v, double m3v) const {
    return s.a0 + dot_checked(s.a1, x, "query x") + s.a2 * m1v + s.a3 * m2v +
           s.a4 * m3v + dot_checked(s.a5, c, "query c") + s.sigma_y * uy;
  }
  /// Y under intervention on (X, M1, M2) with M3 at its natural value for
  /// those arguments.
  double y_nat3(const Vec& x, double m1v, double m2v) const {
    return y(x, m1v, m2v, m3(x, m1v, m2v));
  }
  double y_natural(const Vec& x) const {
    const double m1v = m1(x);
    const double m2v = m2(x, m1v);
    return y_nat3(x, m1v, m2v);
  }
};

bool in_interval(double v, const Evidence& ev) {
  if (ev.empty) return true;
  if (v < ev.y_lo) return false;
  return ev.closed ? (v <= ev.y_hi) : (v < ev.y_hi);
}

}  // namespace

TriDecomposition tri_oracle_decompose(const TriScmSpec& spec,
                                      const PnsQuery& query, std::size_t n_mc,
                                      std::uint64_t seed) {
  validate_tri_spec(spec);
  const PnsQuery q = validate_query_dims(spec.dim_x, spec.dim_c, query);
  if (n_mc < 1000) {
    throw ConfigError("tri_oracle_decompose requires n_mc >= 1000");
  }
  const Vec& x = q.x;
  const Vec& xp = q.x_prime;
  const double y = q.y;

  TriDecomposition out;
  CounterRng rng(seed);
  for (std::size_t i = 0; i < n_mc; ++i) {
    const TriUnit unit{spec, q.c, rng.next_normal(), rng.next_normal(),
                       rng.next_normal(), rng.next_normal()};
    if (!q.evidence.empty &&
        !in_interval(unit.y_natural(q.evidence.x_e), q.evidence)) {
      continue;
    }
    ++out.retained;
    if (!(unit.y_natural(xp) < y && y <= unit.y_natural(x))) continue;
    ++out.t_count;

    const double m1x = unit.m1(x);
    const double m1p = unit.m1(xp);
    const double m2_x_m1x = unit.m2(x, m1x);
    const double m2_p_m1x = unit.m2(xp, m1x);
    const double m2_p_m1p = unit.m2(xp, m1p);

    // The two-mediator-style nested outcomes (M3 at its natural value).
    const double a_val = unit.y_nat3(xp, m1x, m2_p_m1x);
    const double b_val = unit.y_nat3(xp, m1x, m2_x_m1x);
    const double f_val = unit.y_nat3(xp, m1x, m2_p_m1p);

    // Independent aggregate classification (two-mediator event system over
    // (M1, M2)); the eight-way classification below must pairwise sum to it.
    if (a_val < y) {
      (b_val < y) ? ++out.agg_counts[0] : ++out.agg_counts[1];
    } else {
      (f_val < y) ? ++out.agg_counts[2] : ++out.agg_counts[3];
    }

    // Eight-way classification via the M3-nested variants.
    if (a_val < y) {
      if (b_val < y) {
        // D: Y_{x', M1_x, M2_{x,M1_x}, M3_{x, M1_x, M2_{x,M1_x}}}
        const double d_val = unit.y(xp, m1x, m2_x_m1x, unit.m3(x, m1x, m2_x_m1x));
        (d_val < y) ? ++out.path_counts[0] : ++out.path_counts[1];
      } else {
        // E: Y_{x', M1_x, M2_{x',M1_x}, M3_{x', M1_x, M2_{x,M1_x}}}
        const double e_val = unit.y(xp, m1x, m2_p_m1x, unit.m3(xp, m1x, m2_x_m1x));
        (e_val < y) ? ++out.path_counts[2] : ++out.path_counts[3];
      }
    } else {
      if (f_val < y) {
        // G: Y_{x', M1_x, M2_{x',M1_{x'}}, M3_{x', M1_x, M2_{x',M1_x}}}
        const double g_val = unit.y(xp, m1x, m2_p_m1p, unit.m3(xp, m1x, m2_p_m1x));
        (g_val < y) ? ++out.path_counts[4] : ++out.path_counts[5];
      } else {
        // H: Y_{x', M1_{x'}, M2_{x',M1_{x'}}, M3_{x', M1_x, M2_{x',M1_{x'}}}}
        const double h_val = unit.y(xp, m1p, m2_p_m1p, unit.m3(xp, m1x, m2_p_m1p));
        (h_val < y) ? ++out.path_counts[6] : ++out.path_counts[7];
      }
    }
  }

  if (out.retained < 100) {
    throw EvidenceStarvation(
        "evidence rejection retained " + std::to_string(out.retained) +
        " of " + std::to_string(n_mc) + " draws; need at least 100");
  }

  const double denom = static_cast<double>(out.retained);
  for (int k = 0; k < 8; ++k) {
    out.paths[k] = static_cast<double>(out.path_counts[k]) / denom;
  }
  out.agg_xy = static_cast<double>(out.agg_counts[0]) / denom;
  out.agg_xny = static_cast<double>(out.agg_counts[1]) / denom;
  out.agg_xmny = static_cast<double>(out.agg_counts[2]) / denom;
  out.agg_xmy = static_cast<double>(out.agg_counts[3]) / denom;
  out.nd_pns = out.agg_xy + out.agg_xny;
  out.ni_pns = out.agg_xmny + out.agg_xmy;
  out.t_pns = static_cast<double>(out.t_count) / denom;
  out.acceptance_rate = denom / static_cast<double>(n_mc);
  return out;
}

LinearScmSpec marginalize_m3(const TriScmSpec& s) {
  validate_tri_spec(s);
  LinearScmSpec out;
  out.dim_x = s.dim_x;
  out.dim_c = s.dim_c;
  out.g0 = s.p0;
  out.g1 = s.p1;
  out.g2 = s.p2;
  out.sigma_m = s.sigma_m1;
  out.b0 = s.q0;
  out.b1 = s.q1;
  out.b2 = s.q2;
  out.b3 = s.q3;
  out.sigma_n = s.sigma_m2;
  out.a0 = s.a0 + s.a4 * s.d0;
  out.a1.resize(s.dim_x);
  for (int j = 0; j < s.dim_x; ++j) out.a1[j] = s.a1[j] + s.a4 * s.d1[j];
  out.a2 = s.a2 + s.a4 * s.d2;
  out.a3 = s.a3 + s.a4 * s.d3;
  out.a4.resize(s.dim_c);
  for (int k = 0; k < s.dim_c; ++k) out.a4[k] = s.a5[k] + s.a4 * s.d4[k];
  out.sigma_y =
      std::sqrt(s.sigma_y * s.sigma_y + s.a4 * s.a4 * s.sigma_m3 * s.sigma_m3);
  return out;
}

}  // namespace pocmed
