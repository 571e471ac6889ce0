#include <doctest.h>

#include <cmath>
#include <vector>

#include "muonscale/checks.hpp"
#include "muonscale/df_muon.hpp"
#include "muonscale/errors.hpp"
#include "muonscale/problems.hpp"
#include "muonscale/testkit.hpp"

using namespace muonscale;

namespace {

const Geometry kEuclid = Geometry::uniform(Norm::euclidean, 1);

Point scalar_point(double v) {
  Eigen::VectorXd x(1);
  x << v;
  return Point::vector("x", x);
}

DFConfig quad_example_cfg() {
  DFConfig cfg;
  cfg.alpha = 0.5;
  cfg.beta = 0.25;
  cfg.rho = 1.0;
  cfg.lambda = 1.0;
  cfg.M = 6.0;
  return cfg;
}

// The canonical scalar-search example: quad_iso 1D at x0 = 1 before the
// first step (f = 0.5, g = 1, s = -1, y = 0, d = 0, L = 1).
struct QuadExample {
  RayState state;
  Point g = scalar_point(1.0);
  double L = 1.0;
  DFConfig cfg = quad_example_cfg();
  double d_next = 0.0;
  double f_x = 0.5;

  QuadExample() {
    state = RayState{scalar_point(1.0), scalar_point(1.0), scalar_point(0.0),
                     scalar_point(-1.0), 0.25};
  }
};

}  // namespace

TEST_CASE("config hypotheses are enforced") {
  DFConfig cfg = quad_example_cfg();
  CHECK_NOTHROW(cfg.validate());
  DFConfig small_m = cfg;
  small_m.M = 5.0;  // < 2 (1 + 2 rho)
  CHECK_THROWS_AS(small_m.validate(), config_error);
  DFConfig bad_ab = cfg;
  bad_ab.alpha = 0.1;
  bad_ab.beta = 0.3;
  CHECK_THROWS_AS(bad_ab.validate(), config_error);
}

TEST_CASE("horizon rule for beta") {
  CHECK(default_df_beta(0.9, 100) ==
        doctest::Approx(2.0 * std::log(101.0) / 100.0));
  CHECK(default_df_beta(0.05, 2) == doctest::Approx(0.05));  // capped by alpha
}

TEST_CASE("certificate update examples") {
  Geometry geom = kEuclid;
  DCert cert;
  cert.S = scalar_point(0.0);
  cert.B = 0.0;
  cert.d = 0.125;

  // first step: y = 0 keeps B at zero, d unchanged
  DCert first = dcert_update(cert, scalar_point(1.0), scalar_point(0.0), 1.0,
                             geom);
  CHECK(first.B == 0.0);
  CHECK(first.d == doctest::Approx(0.125));

  // 1D: S 0 -> 1, y = -0.5 gives B = 0.5 and a certificate of 0.5
  DCert second = dcert_update(cert, scalar_point(1.0), scalar_point(-0.5), 1.0,
                              geom);
  CHECK(second.B == doctest::Approx(0.5));
  CHECK(second.d == doctest::Approx(0.5));

  // cancel S to zero while B stays positive: the defined branch gives d_hat=0
  DCert third = dcert_update(second, scalar_point(-1.0), scalar_point(0.3),
                             1.0, geom);
  CHECK(dual_norm(third.S, geom) == 0.0);
  CHECK(third.B == doctest::Approx(0.8));
  CHECK(third.d == doctest::Approx(0.5));  // monotone, not increased

  CHECK_THROWS_AS(
      dcert_update(cert, scalar_point(1.0), scalar_point(0.0), -1.0, geom),
      config_error);
}

TEST_CASE("majorant matches the hand-expanded quadratic") {
  QuadExample ex;
  auto q_at = [&](double r) {
    return majorant_eval(ex.state, ex.g, ex.L, ex.cfg, ex.d_next, ex.f_x, r,
                         kEuclid);
  };
  CHECK(q_at(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(q_at(1.0) == doctest::Approx(0.46875).epsilon(1e-14));
  for (double r : {0.2, 0.7, 1.3, 2.9}) {
    double poly = 0.5 - 0.25 * r + 0.21875 * r * r;
    CHECK(q_at(r) == doctest::Approx(poly).epsilon(1e-13));
  }
  CHECK(q_at(4.0 / 7.0) ==
        doctest::Approx(0.5 - 0.0625 / 0.875).epsilon(1e-13));
}

TEST_CASE("radius search on the quadratic example") {
  QuadExample ex;
  double r = radius_search(ex.state, ex.g, ex.L, ex.cfg, ex.d_next, ex.f_x,
                           kEuclid);
  CHECK(r == doctest::Approx(4.0 / 7.0).epsilon(1e-14));

  // cross-check against the dense grid oracle
  auto oracle = testkit::grid_min(
      [&](double rr) {
        return majorant_eval(ex.state, ex.g, ex.L, ex.cfg, ex.d_next, ex.f_x,
                             rr, kEuclid);
      },
      0.0, 5.0, 100000);
  CHECK(std::abs(oracle.argmin - 4.0 / 7.0) <= 1e-4);
}

TEST_CASE("radius search with a zero direction returns the certificate") {
  DFConfig cfg = quad_example_cfg();
  RayState state{scalar_point(1.0), scalar_point(1.0), scalar_point(0.0),
                 scalar_point(0.0), cfg.beta};
  double d_next = 0.8;
  double r = radius_search(state, scalar_point(0.0), 1.0, cfg, d_next, 0.5,
                           kEuclid);
  CHECK(r == doctest::Approx(d_next).epsilon(1e-12));
}

TEST_CASE("radius search matches the grid oracle on matrix states") {
  auto res = checks::df_search_vs_grid(9, 100000, 1e-6);
  INFO(res.detail);
  CHECK(res.pass);
}

TEST_CASE("first df step on the 1D quadratic") {
  ProblemSpec p = make_problem("quad_iso", 1, 0);
  auto res = df_run(p, kEuclid, quad_example_cfg(), 1);
  CHECK(res.rows[0].R == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
  CHECK(res.rows[0].d == 0.0);
  CHECK(res.x_final.block(0).data(0) ==
        doctest::Approx(6.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("starting at the minimizer keeps every iterate there") {
  ProblemSpec p = make_problem("quad_iso", 3, 0);
  p.x0 = *p.x_star;
  auto res = df_run(p, kEuclid, quad_example_cfg(), 5);
  for (const auto& row : res.rows) {
    CHECK(row.f == 0.0);
    CHECK(row.R == 0.0);
  }
  CHECK(res.f_final == 0.0);
}

TEST_CASE("df trace matches an independent scalar recurrence") {
  // Scripted 1D recurrence with explicit quadratic coefficients for Q.
  ProblemSpec p = make_problem("quad_iso", 1, 0);
  DFConfig cfg = quad_example_cfg();
  cfg.beta = 0.5;  // larger contraction variant
  const std::int64_t T = 6;
  auto res = df_run(p, kEuclid, cfg, T);

  double x = 1.0, m = 0.0, S = 0.0, B = 0.0, d = cfg.d0;
  const double L = 1.0, x0 = 1.0, b = cfg.beta;
  for (std::int64_t k = 0; k < T; ++k) {
    double g = L * x;
    double y = x - x0;
    S += g;
    B -= g * y;
    double d_hat = std::abs(S) > 0.0 ? std::max(B, 0.0) / std::abs(S) : 0.0;
    d = std::max(d, d_hat);
    m = k == 0 ? g : (1.0 - cfg.alpha) * m + cfg.alpha * g;
    double s = m > 0.0 ? -1.0 : (m < 0.0 ? 1.0 : 0.0);
    // Q(R) = const + B_R R + A_R R^2, expanded term by term
    double s2 = s * s;
    double a_r = 0.5 * L * b * b * s2 + cfg.M * b * L * b * b * s2 +
                 cfg.rho * L * b * b * s2 + 0.5 * cfg.lambda * L * b * b;
    double b_r = b * g * s - L * b * b * s * y +
                 2.0 * cfg.M * b * L * (1.0 - b) * y * b * s -
                 2.0 * cfg.rho * L * b * b * s * y - cfg.lambda * L * b * b * d;
    double r = a_r > 0.0 ? std::max(0.0, -b_r / (2.0 * a_r)) : 0.0;

    CHECK(res.rows[k].R == doctest::Approx(r).epsilon(1e-10));
    CHECK(res.rows[k].d == doctest::Approx(d).epsilon(1e-12));
    CHECK(res.rows[k].f ==
          doctest::Approx(0.5 * L * x * x).epsilon(1e-10));
    x = x0 + (1.0 - b) * y + b * r * s;
  }
  CHECK(res.x_final.block(0).data(0) == doctest::Approx(x).epsilon(1e-10));
}

TEST_CASE("rate bound constants") {
  DFConfig cfg = quad_example_cfg();
  // 1 + 2 rho + lambda/2 + M with rho=1, lambda=1, M=6
  CHECK(df_rate_C0(cfg) == doctest::Approx(9.5));

  // alpha=0.5, beta=0.25: C = 2*9.5 + 4 * 0.25 / 0.140625
  double expected_c = 19.0 + 4.0 * 0.25 / (1.0 * 0.375 * 0.375);
  CHECK(df_rate_C(cfg) == doctest::Approx(expected_c).epsilon(1e-12));

  // D = 0 leaves only the contraction term
  CHECK(df_rate_bound(2.0, 1.0, 0.0, cfg, 10) ==
        doctest::Approx(std::pow(1.0 - 0.125, 10) * 2.0).epsilon(1e-12));

  DFConfig bad = cfg;
  bad.alpha = 0.1;
  bad.beta = 0.25;
  CHECK_THROWS_AS(df_rate_C(bad), config_error);
}

TEST_CASE("df invariant suite") {
  CHECK(checks::df_dcert_validity(3, 100).pass);
  CHECK(checks::df_q_convexity(12, 400).pass);
  CHECK(checks::df_majorization(8).pass);
  auto onestep = checks::df_onestep(120);
  INFO(onestep.detail);
  CHECK(onestep.pass);
  auto guarantee = checks::df_rate_guarantee({32, 128});
  INFO(guarantee.detail);
  CHECK(guarantee.pass);
}
