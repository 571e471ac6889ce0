#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "muonscale/geometry.hpp"
#include "muonscale/point.hpp"
#include "muonscale/problems.hpp"
#include "muonscale/trace.hpp"

namespace muonscale {

// Distance-free rule: a scalar certificate d_k lower-bounds the distance from
// the initialization to a minimizer, the iterate is recentered toward x0, and
// the radius comes from a convex one-dimensional search on a regularized
// smoothness majorant. The true distance never enters the algorithm.

enum class OmegaRule { one, normalized };  // w_k = 1 or 1/max(1, ||g_k||_*)

struct DFConfig {
  double alpha = 0.9;
  double beta = 0.1;
  double rho = 1.0;
  double lambda = 1.0;
  double M = 6.0;
  OmegaRule omega = OmegaRule::one;
  double d0 = 0.0;
  double search_tol = 1e-10;

  void validate() const;
};

// min{alpha, 2 log(T+1) / T}: the horizon rule that yields the 1/T-type rate.
double default_df_beta(double alpha, std::int64_t T);

struct DCert {
  Point S;       // weighted gradient sum
  double B = 0;  // accumulated -w <g, x - x0>
  double d = 0;  // monotone certificate
};

// S' = S + w g;  B' = B - w <g, y>;  d_hat = [B']_+ / ||S'||_* (0 if ||S'||_* = 0);
// d' = max(d, d_hat).
DCert dcert_update(const DCert& cert, const Point& g, const Point& y,
                   double omega, const Geometry& geom);

// Snapshot of the recentered ray z(R) = x0 + (1-beta) y + beta R s.
struct RayState {
  Point x0;
  Point x;
  Point y;  // x - x0
  Point s;  // LMO descent direction, ||s|| <= 1
  double beta = 0.0;

  Point z_of(double R) const { return x0 + (1.0 - beta) * y + (beta * R) * s; }
};

// The six-term majorant evaluated at radius R:
//   f_x + b<g, Rs - y> + (L b^2/2)||Rs - y||^2 + M b L ||(1-b)y + b R s||^2
//   + rho L b^2 ||Rs - y||^2 + (lambda L b^2 / 2)(R - d_next)^2.
double majorant_eval(const RayState& state, const Point& g, double L,
                     const DFConfig& cfg, double d_next, double f_x, double R,
                     const Geometry& geom);

// argmin_{R >= 0} of the majorant. Inner-product geometries take an exact
// quadratic fit through R in {0,1,2}, verified against R=3; otherwise an
// expanding bracket plus ternary search to width tol * max(1, R_hi).
double radius_search(const RayState& state, const Point& g, double L,
                     const DFConfig& cfg, double d_next, double f_x,
                     const Geometry& geom, double tol = 1e-10);

struct DFRow {
  std::int64_t k;
  double f;
  std::optional<double> gap;
  double grad_dual;
  double R;
  double d;          // d_{k+1}
  double step_norm;  // ||x_{k+1} - x_k||
  // diagnostics, not serialized
  double y_norm;     // ||x_k - x0||
  double e_dual;     // ||grad f(x_k) - m_{k+1}||_*
};

struct DFResult {
  std::vector<DFRow> rows;
  Point x_final;
  double f_final = 0.0;
  std::optional<double> gap_final;
  double grad_dual_final = 0.0;
  double min_grad_dual_next = 0.0;
  double max_dist_from_x0 = 0.0;
  double d_final = 0.0;

  Trace to_trace() const;
};

DFResult df_run(const ProblemSpec& p, const Geometry& geom,
                const DFConfig& cfg, std::int64_t T);

// (1 - beta/2)^T gap0 + C L beta D^2 with
// C = 2 C0 + 4 (1-alpha)^2 / (rho (alpha - beta/2)^2), C0 = 1 + 2 rho + lambda/2 + M.
double df_rate_bound(double gap0, double L, double D, const DFConfig& cfg,
                  std::int64_t T);
double df_rate_C0(const DFConfig& cfg);
double df_rate_C(const DFConfig& cfg);

}  // namespace muonscale
