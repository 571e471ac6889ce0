#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "muonscale/errors.hpp"
#include "muonscale/problems.hpp"
#include "muonscale/rng.hpp"

using namespace muonscale;

namespace {
const Geometry kEuclid = Geometry::uniform(Norm::euclidean, 1);
}

TEST_CASE("quad_iso basics") {
  ProblemSpec p = make_problem("quad_iso", 2, 0);
  Eigen::VectorXd x(2);
  x << 1.0, 0.0;
  Point g = p.grad(Point::vector("x", x));
  CHECK(g.block(0).data(0) == doctest::Approx(1.0));
  CHECK(g.block(0).data(1) == doctest::Approx(0.0));
  CHECK(p.L == 1.0);
  CHECK(*p.f_star == 0.0);
  CHECK(finite_diff_check(p, Point::vector("x", x), 1e-5) <= 1e-7);
}

TEST_CASE("least_squares is consistent at its minimizer") {
  ProblemSpec p = make_problem("least_squares", 10, 3);
  CHECK(p.f(*p.x_star) <= 1e-18);
  CHECK(dual_norm(p.grad(*p.x_star), kEuclid) <= 1e-10);
  CHECK(dual_norm(p.grad(*p.x_star), kEuclid) <= 1e-8 * std::max(1.0, p.L));
}

TEST_CASE("least_squares smoothness constant matches an eigensolver oracle") {
  ProblemSpec p = make_problem("least_squares", 8, 5);
  // rebuild A from the same stream the factory used
  Rng rng(5);
  Eigen::MatrixXd a = rng.gaussian_matrix(16, 8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a);
  double lam = es.eigenvalues().maxCoeff();
  CHECK(std::abs(p.L - lam) / lam < 1e-8);
}

TEST_CASE("logistic gradient and reference value") {
  ProblemSpec p = make_problem("logistic", 6, 11);
  CHECK(p.convex);
  CHECK(p.f_star.has_value());
  CHECK(*p.f_star > 0.0);  // flipped labels keep the loss bounded away from 0
  Rng rng(123);
  Point x = Point::vector("x", rng.gaussian_vector(6));
  CHECK(finite_diff_check(p, x, 1e-5) <= 1e-5);
  // construction is memoized per (dim, seed)
  ProblemSpec again = make_problem("logistic", 6, 11);
  CHECK(*again.f_star == *p.f_star);
}

TEST_CASE("ripple basics") {
  ProblemSpec p = make_problem("ripple", 1, 0);
  Point zero = Point::vector("x", Eigen::VectorXd::Zero(1));
  CHECK(p.f(zero) == 0.0);
  CHECK(p.grad(zero).block(0).data.norm() == 0.0);
  Eigen::VectorXd x(1);
  x << 0.3;
  CHECK(finite_diff_check(p, Point::vector("x", x), 1e-5) <= 1e-6);
  CHECK(p.nonconvex);
}

TEST_CASE("star_1d measured smoothness and star-convexity screen") {
  ProblemSpec p = make_problem("star_1d", 4, 9);
  CHECK(p.L >= 2.0);  // true constant is 2 at the origin
  CHECK(p.L <= 2.2);  // 1.05 safety factor on the scan
  CHECK(p.star_convex_verified);
  auto screen = star_convexity_check(p, 10000, 20.0);
  CHECK(screen.pass);
  CHECK(screen.worst_margin >= -1e-8);
}

TEST_CASE("star-convexity screen on convex problems") {
  auto quad = star_convexity_check(make_problem("quad_iso", 3, 0), 500, 5.0);
  CHECK(quad.pass);
  // for the isotropic quadratic the margin equals f - f* >= 0 exactly
  CHECK(quad.worst_margin >= 0.0);
  auto ls = star_convexity_check(make_problem("least_squares", 5, 2), 500, 3.0);
  CHECK(ls.pass);
}

TEST_CASE("star-convexity screen requires a minimizer") {
  ProblemSpec p = make_problem("logistic", 4, 2);
  CHECK_THROWS_AS(star_convexity_check(p, 10, 1.0), config_error);
}

TEST_CASE("finite differences agree at 20 seeded points per problem") {
  for (const char* name :
       {"quad_iso", "least_squares", "logistic", "ripple", "star_1d"}) {
    ProblemSpec p = make_problem(name, 5, 17);
    double tol = std::string(name) == "logistic" ? 1e-5 : 1e-6;
    Rng rng(71);
    for (int i = 0; i < 20; ++i) {
      Point x = Point::vector("x", 2.0 * rng.gaussian_vector(5));
      CHECK(finite_diff_check(p, x, 1e-5) <= tol);
    }
  }
}

TEST_CASE("smoothness sampling across the suite") {
  for (const char* name :
       {"quad_iso", "least_squares", "logistic", "ripple", "star_1d"}) {
    ProblemSpec p = make_problem(name, 6, 13);
    double L = smoothness_in(p, kEuclid);
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
      Point x = Point::vector("x", 3.0 * rng.gaussian_vector(6));
      Point y = Point::vector("x", 3.0 * rng.gaussian_vector(6));
      double lhs = dual_norm(p.grad(y) - p.grad(x), kEuclid);
      double rhs = (1.0 + 1e-6) * L * primal_norm(y - x, kEuclid);
      CHECK(lhs <= rhs + 1e-12);
    }
  }
}

TEST_CASE("smoothness conversion to other geometries") {
  ProblemSpec p = make_problem("quad_iso", 4, 0);
  Geometry sign = Geometry::uniform(Norm::linf_sign, 1);
  CHECK(smoothness_in(p, sign) == doctest::Approx(4.0));  // dim * L
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    Point x = Point::vector("x", rng.gaussian_vector(4));
    Point y = Point::vector("x", rng.gaussian_vector(4));
    double lhs = dual_norm(p.grad(y) - p.grad(x), sign);
    CHECK(lhs <= smoothness_in(p, sign) * primal_norm(y - x, sign) + 1e-12);
  }
}

TEST_CASE("factory rejects bad input") {
  CHECK_THROWS_AS(make_problem("unknown", 3, 0), config_error);
  CHECK_THROWS_AS(make_problem("quad_iso", 0, 0), config_error);
  CHECK_THROWS_AS(finite_diff_check(make_problem("quad_iso", 2, 0),
                                    Point::vector("x", Eigen::VectorXd::Zero(2)),
                                    0.0),
                  config_error);
}
