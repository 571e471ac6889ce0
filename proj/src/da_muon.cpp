#include "muonscale/da_muon.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "muonscale/errors.hpp"
#include "muonscale/muon_base.hpp"

namespace muonscale {

double default_da_radius(const ProblemSpec& p, const Geometry& geom) {
  return 0.1 * std::max(1.0, primal_norm(p.x0, geom));
}

double da_radius_update(double r_bar, const Point& x, const Point& x0,
                        const Geometry& geom) {
  if (!(r_bar > 0.0)) throw config_error("da_radius_update: r_bar must be > 0");
  return std::max(r_bar, primal_norm(x - x0, geom));
}

double momentum_tracking_bound(double L, double r_bar_k, double alpha,
                               std::int64_t k) {
  double q = 1.0 - alpha;
  double kk = static_cast<double>(k);
  return L * r_bar_k *
         (std::pow(q, kk / 2.0) / alpha +
          std::sqrt(2.0) * q / (alpha * std::sqrt(kk + 2.0)));
}

Trace DAResult::to_trace() const {
  Trace t({"k", "f", "gap", "grad_dual_norm", "eta", "r_bar", "dist_from_x0"});
  for (const auto& r : rows)
    t.append_row({static_cast<double>(r.k), r.f, r.gap, r.grad_dual, r.eta,
                  r.r_bar, r.dist0});
  t.set_stat("f_final", f_final);
  if (gap_final) t.set_stat("gap_final", *gap_final);
  t.set_stat("grad_dual_final", grad_dual_final);
  t.set_stat("min_grad_dual_next", min_grad_dual_next);
  t.set_stat("max_dist_from_x0", max_dist_from_x0);
  t.set_stat("r0", r0);
  return t;
}

DAResult da_run(const ProblemSpec& p, const Geometry& geom,
                const DAOptions& opts, std::int64_t T) {
  if (T < 1) throw config_error("da_run: T must be >= 1");
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0))
    throw config_error("da_run: alpha must be in (0, 1)");
  double r = opts.r0 > 0.0 ? opts.r0 : default_da_radius(p, geom);
  if (opts.eta_max && !(*opts.eta_max > 0.0))
    throw config_error("da_run: eta_max must be > 0");

  double L = smoothness_in(p, geom);
  DAResult res;
  res.r0 = r;

  Point x = p.x0;
  Point g = p.grad(x);
  Point m = g;
  double r_bar = r;
  double min_grad_next = std::numeric_limits<double>::infinity();
  double max_dist = 0.0;

  for (std::int64_t k = 0; k < T; ++k) {
    if (k > 0) {
      g = p.grad(x);
      min_grad_next = std::min(min_grad_next, dual_norm(g, geom));
    }
    double f = p.f(x);
    if (!std::isfinite(f)) throw divergence_error("non-finite objective", k);

    double dist0 = primal_norm(x - p.x0, geom);
    double r_bar_prev = r_bar;
    r_bar = da_radius_update(r_bar, x, p.x0, geom);
    double eta = r_bar / std::sqrt(static_cast<double>(k) + 1.0);
    if (opts.eta_max) eta = std::min(eta, *opts.eta_max);

    m = ema_update(m, g, opts.alpha);

    double track_err = dual_norm(m - g, geom);
    double track_bound = momentum_tracking_bound(L, r_bar_prev, opts.alpha, k);
    if (track_err > track_bound + 1e-8)
      throw invariant_error("momentum tracking", k, track_err - track_bound);

    res.rows.push_back(
        {k, f, p.gap(f), dual_norm(g, geom), eta, r_bar, dist0, track_err});

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

double da_bound_A(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw config_error("da_bound_A: alpha must be in (0, 1)");
  double q = 1.0 - alpha;
  return (1.0 / alpha) *
         (1.0 + std::sqrt(2.0 * std::numbers::pi / std::log(1.0 / q)) / std::sqrt(q));
}

double da_bound_C(double alpha, std::int64_t T) {
  double q = 1.0 - alpha;
  double logT = std::log(static_cast<double>(T));
  return 2.0 * da_bound_A(alpha) +
         (3.5 + 2.0 * std::sqrt(2.0) * q / alpha) * (1.0 + logT);
}

double da_stationarity_bound(double f0_gap, double r, double D, double L, double alpha,
                  std::int64_t T) {
  if (!(r > 0.0) || D < r)
    throw config_error("da_stationarity_bound: requires D >= r > 0");
  if (T < 1) throw config_error("da_stationarity_bound: T must be >= 1");
  double sqrtT = std::sqrt(static_cast<double>(T));
  double term1 = std::sqrt(2.0) * f0_gap / (r * sqrtT);
  double term2 = 2.0 * L * da_bound_C(alpha, T) * D / sqrtT *
                 std::pow(D / r, 2.0 / static_cast<double>(T)) *
                 std::log(std::numbers::e * D / r);
  return term1 + term2;
}

}  // namespace muonscale
