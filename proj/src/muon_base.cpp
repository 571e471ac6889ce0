#include "muonscale/muon_base.hpp"

#include <cmath>
#include <limits>

#include "muonscale/errors.hpp"

namespace muonscale {

Point ema_update(const Point& m, const Point& g, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw config_error("ema_update: alpha must be in (0, 1]");
  if (!m.same_shape(g)) throw config_error("ema_update: shape mismatch");
  return (1.0 - alpha) * m + alpha * g;
}

Point tr_step_with_direction(const Point& x, const Point& m, double eta,
                             const Point& u, const Geometry& geom,
                             std::int64_t step) {
  if (!(eta >= 0.0)) throw config_error("tr_step: eta must be >= 0");
  Point x_plus = x - eta * u;
  double lhs = m.dot(x - x_plus);
  double rhs = eta * dual_norm(m, geom);
  double err = std::abs(lhs - rhs);
  if (err > 1e-8 * std::max(1.0, std::abs(rhs)))
    throw invariant_error("trust-region optimality identity", step, err);
  return x_plus;
}

Point tr_step(const Point& x, const Point& m, double eta, const Geometry& geom,
              std::int64_t step) {
  return tr_step_with_direction(x, m, eta, lmo_ascent(m, geom), geom, step);
}

Trace FixedResult::to_trace() const {
  Trace t({"k", "f", "gap", "grad_dual_norm", "eta"});
  for (const auto& r : rows)
    t.append_row({static_cast<double>(r.k), r.f, r.gap, r.grad_dual, r.eta});
  t.set_stat("f_final", f_final);
  if (gap_final) t.set_stat("gap_final", *gap_final);
  t.set_stat("grad_dual_final", grad_dual_final);
  t.set_stat("min_grad_dual_next", min_grad_dual_next);
  t.set_stat("max_dist_from_x0", max_dist_from_x0);
  return t;
}

FixedResult fixed_muon_run(const ProblemSpec& p, const Geometry& geom,
                           double eta, double alpha, std::int64_t T) {
  if (T < 1) throw config_error("fixed_muon_run: T must be >= 1");
  if (!(eta >= 0.0)) throw config_error("fixed_muon_run: eta must be >= 0");

  FixedResult res;
  Point x = p.x0;
  Point g = p.grad(x);
  Point m = g;  // warm start
  double min_grad_next = std::numeric_limits<double>::infinity();
  double max_dist = 0.0;

  for (std::int64_t k = 0; k < T; ++k) {
    if (k > 0) {
      g = p.grad(x);
      min_grad_next = std::min(min_grad_next, dual_norm(g, geom));
    }
    double f = p.f(x);
    if (!std::isfinite(f)) throw divergence_error("non-finite objective", k);
    res.rows.push_back({k, f, p.gap(f), dual_norm(g, geom), eta});
    m = ema_update(m, g, alpha);
    x = tr_step(x, m, eta, geom, k);
    max_dist = std::max(max_dist, primal_norm(x - p.x0, geom));
  }

  res.x_final = x;
  res.f_final = p.f(x);
  if (!std::isfinite(res.f_final))
    throw divergence_error("non-finite objective", T);
  res.gap_final = p.gap(res.f_final);
  res.grad_dual_final = dual_norm(p.grad(x), geom);
  res.min_grad_dual_next = std::min(min_grad_next, res.grad_dual_final);
  res.max_dist_from_x0 = max_dist;
  return res;
}

}  // namespace muonscale
