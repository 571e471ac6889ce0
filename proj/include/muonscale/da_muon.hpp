#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "muonscale/geometry.hpp"
#include "muonscale/point.hpp"
#include "muonscale/problems.hpp"
#include "muonscale/trace.hpp"

namespace muonscale {

// Distance-adaptive radius rule: the trust-region scale is driven by the
// radius already explored by the trajectory, decayed by 1/sqrt(k+1).

struct DAOptions {
  double r0 = 0.0;       // initial radius; <= 0 means use default_da_radius
  double alpha = 0.9;    // momentum in (0, 1)
  std::optional<double> eta_max;  // optional post-hoc clamp, off by default
};

// 0.1 * max(1, ||x0||) in the run geometry.
double default_da_radius(const ProblemSpec& p, const Geometry& geom);

// max(r_bar, ||x - x0||).
double da_radius_update(double r_bar, const Point& x, const Point& x0,
                        const Geometry& geom);

struct DARow {
  std::int64_t k;
  double f;
  std::optional<double> gap;
  double grad_dual;
  double eta;
  double r_bar;     // r_bar_{k+1}, after this step's update
  double dist0;     // ||x_k - x0||
  double track_err; // ||m_{k+1} - grad f(x_k)||_*
};

struct DAResult {
  std::vector<DARow> rows;
  Point x_final;
  double f_final = 0.0;
  std::optional<double> gap_final;
  double grad_dual_final = 0.0;
  double min_grad_dual_next = 0.0;
  double max_dist_from_x0 = 0.0;
  double r0 = 0.0;

  Trace to_trace() const;
};

DAResult da_run(const ProblemSpec& p, const Geometry& geom,
                const DAOptions& opts, std::int64_t T);

// Stationarity bound for the trajectory-radius rule:
//   sqrt(2) (f(x0) - f*) / (r sqrt(T))
//   + (2 L C_alpha(T) D / sqrt(T)) (D/r)^(2/T) log(e D / r),
// with C_alpha(T) = 2 A(alpha) + [7/2 + 2 sqrt(2)(1-alpha)/alpha](1 + log T)
// and A(alpha) = (1/alpha)[1 + sqrt(2 pi / log(1/(1-alpha))) / sqrt(1-alpha)].
// Requires D >= r > 0.
double da_stationarity_bound(double f0_gap, double r, double D, double L, double alpha,
                  std::int64_t T);

double da_bound_A(double alpha);
double da_bound_C(double alpha, std::int64_t T);

// Upper bound on ||m_{k+1} - grad f(x_k)||_* along a distance-adaptive run
// with warm-started momentum: L r_bar_k [ (1-a)^{k/2}/a + sqrt(2)(1-a)/(a sqrt(k+2)) ].
double momentum_tracking_bound(double L, double r_bar_k, double alpha,
                               std::int64_t k);

}  // namespace muonscale
