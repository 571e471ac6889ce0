#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "muonscale/geometry.hpp"
#include "muonscale/point.hpp"
#include "muonscale/problems.hpp"
#include "muonscale/trace.hpp"

namespace muonscale {

// Scale-calibrated rule: the step length comes from a local descent
// certificate a_k = (||m_{k+1}||_* - ||g_k - m_{k+1}||_*)_+ and eta_k = a_k/L,
// so a stale momentum direction shrinks the step to zero instead of
// overshooting.

struct SCCertificate {
  double e = 0.0;  // ||g - m_next||_*
  double a = 0.0;  // (||m_next||_* - e)_+
};

SCCertificate sc_certificate(const Point& m_next, const Point& g,
                             const Geometry& geom);

// Constants of the Lyapunov analysis, all functions of alpha alone:
//   q = 1 - alpha, gamma = alpha (2 - alpha),
//   A = gamma / (16 q^2), chi = min{3/8, gamma^3/(16 q^2)}, C = sqrt(5) + 2A.
double sc_A(double alpha);
double sc_chi(double alpha);
double sc_C(double alpha);

// Phi = gap + (A/L) e^2.
double sc_lyapunov(double gap, double e, double alpha, double L);

struct SCOptions {
  double alpha = 0.9;
};

struct SCRow {
  std::int64_t k;
  double f;
  std::optional<double> gap;
  double grad_dual;
  double eta;
  double e;
  double a;
};

struct SCResult {
  std::vector<SCRow> rows;
  Point x_final;
  double f_final = 0.0;
  std::optional<double> gap_final;
  double grad_dual_final = 0.0;
  double min_grad_dual_next = 0.0;
  double max_dist_from_x0 = 0.0;
  double max_dist_from_xstar = 0.0;  // 0 when x* unknown
  std::int64_t halt_streak = 0;      // trailing steps with a_k == 0

  Trace to_trace() const;
};

// Runs the certificate rule and asserts, at every step, certified descent
// f_{k+1} <= f_k - a_k^2/(2L), the momentum-error recursion
// e_{k+1} <= (1-alpha)(e_k + a_k), and the Lyapunov decrease.
SCResult sc_run(const ProblemSpec& p, const Geometry& geom,
                const SCOptions& opts, std::int64_t T);

}  // namespace muonscale
