#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "muonscale/geometry.hpp"
#include "muonscale/point.hpp"
#include "muonscale/problems.hpp"
#include "muonscale/trace.hpp"

namespace muonscale {

// (1 - alpha) m + alpha g. Every method here warm-starts the buffer at the
// initial gradient, so the first update leaves it equal to g_0.
Point ema_update(const Point& m, const Point& g, double alpha);

// x - eta * lmo_ascent(m). Asserts the trust-region optimality identity
// <m, x - x_plus> = eta * ||m||_* to 1e-8 relative; a violation means the
// LMO is broken and raises invariant_error.
Point tr_step(const Point& x, const Point& m, double eta, const Geometry& geom,
              std::int64_t step = -1);

// Same step with a caller-supplied direction, still asserting the identity.
// Lets tests inject a corrupted direction.
Point tr_step_with_direction(const Point& x, const Point& m, double eta,
                             const Point& u, const Geometry& geom,
                             std::int64_t step = -1);

struct FixedRow {
  std::int64_t k;
  double f;
  std::optional<double> gap;
  double grad_dual;
  double eta;
};

struct FixedResult {
  std::vector<FixedRow> rows;
  Point x_final;
  double f_final = 0.0;
  std::optional<double> gap_final;
  double grad_dual_final = 0.0;
  double min_grad_dual_next = 0.0;  // min over ||grad f(x_{k+1})||_*
  double max_dist_from_x0 = 0.0;

  Trace to_trace() const;
};

// Constant-radius Muon baseline.
FixedResult fixed_muon_run(const ProblemSpec& p, const Geometry& geom,
                           double eta, double alpha, std::int64_t T);

}  // namespace muonscale
