#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "muonscale/geometry.hpp"
#include "muonscale/point.hpp"

namespace muonscale {

// Objective oracle with analytic gradient, a smoothness bound, and (where
// available) a known minimizer. L is the smoothness constant in the
// euclidean geometry; smoothness_in() converts it to a valid bound for the
// other norm tags.
struct ProblemSpec {
  std::string name;
  int dim = 0;
  std::uint64_t seed = 0;

  std::function<double(const Point&)> f;
  std::function<Point(const Point&)> grad;

  double L = 1.0;
  std::optional<Point> x_star;
  std::optional<double> f_star;

  bool convex = false;
  bool star_convex_verified = false;
  bool nonconvex = false;

  Point x0;

  std::optional<double> gap(double f_value) const {
    if (!f_star) return std::nullopt;
    return f_value - *f_star;
  }
};

struct ProblemOptions {
  double quad_L = 1.0;  // curvature of quad_iso
};

// Factory for the deterministic suite:
//   quad_iso      (L/2)||x||^2, minimizer 0
//   least_squares 1/2 ||Ax-b||^2 with consistent seeded (A, x*), f* = 0
//   logistic      binary logistic loss on a seeded nearly separable dataset
//   ripple        sum_i x_i^2/2 + sin^2(x_i), smooth non-convex, coercive
//   star_1d       sum_i |x_i| (1 - exp(-|x_i|)), star-convex about 0
ProblemSpec make_problem(const std::string& name, int dim, std::uint64_t seed,
                         const ProblemOptions& opts = {});

// Smoothness bound valid for the given geometry's primal/dual pair, derived
// from the euclidean constant by norm-equivalence factors.
double smoothness_in(const ProblemSpec& p, const Geometry& geom);

struct StarCheckResult {
  bool pass = false;
  double worst_margin = 0.0;  // min over samples of <g, x - x*> - (f - f*)
};

// Numerically screens f(x) - f* <= <grad f(x), x - x*> on seeded samples in
// the box of half-width `radius` around x_star. Fails on margin < -1e-8.
StarCheckResult star_convexity_check(const ProblemSpec& p, int n_samples,
                                     double radius,
                                     std::uint64_t seed = 20240u);

// Max over coordinates of |central difference - analytic| / max(1, |analytic|).
double finite_diff_check(const ProblemSpec& p, const Point& x, double h);

}  // namespace muonscale
