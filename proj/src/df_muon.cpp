#include "muonscale/df_muon.hpp"

#include <cmath>
#include <limits>

#include "muonscale/errors.hpp"
#include "muonscale/muon_base.hpp"

namespace muonscale {

void DFConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw config_error("df config: alpha must be in (0, 1)");
  if (!(beta > 0.0 && beta < 1.0))
    throw config_error("df config: beta must be in (0, 1)");
  if (!(rho > 0.0) || !(lambda > 0.0) || !(M > 0.0))
    throw config_error("df config: rho, lambda, M must be > 0");
  if (M < 2.0 * (1.0 + 2.0 * rho))
    throw config_error("df config: requires M >= 2(1 + 2 rho)");
  if (!(alpha > beta / 2.0))
    throw config_error("df config: requires alpha > beta/2");
  if (!(d0 >= 0.0)) throw config_error("df config: d0 must be >= 0");
  if (!(search_tol > 0.0))
    throw config_error("df config: search_tol must be > 0");
}

double default_df_beta(double alpha, std::int64_t T) {
  if (T < 1) throw config_error("default_df_beta: T must be >= 1");
  double horizon = 2.0 * std::log(static_cast<double>(T) + 1.0) /
                   static_cast<double>(T);
  return std::min(alpha, horizon);
}

DCert dcert_update(const DCert& cert, const Point& g, const Point& y,
                   double omega, const Geometry& geom) {
  if (!(omega >= 0.0)) throw config_error("dcert_update: omega must be >= 0");
  DCert next;
  next.S = cert.S + omega * g;
  next.B = cert.B - omega * g.dot(y);
  double sn = dual_norm(next.S, geom);
  double d_hat = sn > 0.0 ? std::max(next.B, 0.0) / sn : 0.0;
  next.d = std::max(cert.d, d_hat);
  return next;
}

double majorant_eval(const RayState& state, const Point& g, double L,
                     const DFConfig& cfg, double d_next, double f_x, double R,
                     const Geometry& geom) {
  if (!(R >= 0.0)) throw config_error("majorant_eval: R must be >= 0");
  double b = state.beta;
  Point ray = R * state.s - state.y;                      // Rs - y
  Point anchor = (1.0 - b) * state.y + (b * R) * state.s; // z(R) - x0
  double ray_norm = primal_norm(ray, geom);
  double anchor_norm = primal_norm(anchor, geom);
  double rd = R - d_next;
  return f_x + b * g.dot(ray) + 0.5 * L * b * b * ray_norm * ray_norm +
         cfg.M * b * L * anchor_norm * anchor_norm +
         cfg.rho * L * b * b * ray_norm * ray_norm +
         0.5 * cfg.lambda * L * b * b * rd * rd;
}

namespace {

double checked_eval(const RayState& state, const Point& g, double L,
                    const DFConfig& cfg, double d_next, double f_x, double R,
                    const Geometry& geom) {
  double v = majorant_eval(state, g, L, cfg, d_next, f_x, R, geom);
  if (!std::isfinite(v))
    throw config_error("radius_search: non-finite majorant value");
  return v;
}

}  // namespace

double radius_search(const RayState& state, const Point& g, double L,
                     const DFConfig& cfg, double d_next, double f_x,
                     const Geometry& geom, double tol) {
  if (!(tol > 0.0)) throw config_error("radius_search: tol must be > 0");
  auto q_at = [&](double R) {
    return checked_eval(state, g, L, cfg, d_next, f_x, R, geom);
  };

  if (geom.all_inner_product()) {
    // Q is an exact quadratic in R: fit through {0,1,2}, verify at 3.
    double q0 = q_at(0.0), q1 = q_at(1.0), q2 = q_at(2.0);
    double qq = 0.5 * (q2 - 2.0 * q1 + q0);
    double qp = q1 - q0 - qq;
    double q3 = q_at(3.0);
    double pred3 = q0 + 3.0 * qp + 9.0 * qq;
    if (qq > 0.0 &&
        std::abs(pred3 - q3) <= 1e-8 * std::max(1.0, std::abs(q3)))
      return std::max(0.0, -qp / (2.0 * qq));
    // fit not trusted: fall through to the bracketed search
  }

  double hi = std::max(1.0, 2.0 * d_next);
  double q_half = q_at(hi / 2.0);
  double q_hi = q_at(hi);
  while (q_hi < q_half) {
    hi *= 2.0;
    if (hi > 1e15)
      throw config_error("radius_search: bracket expansion failed");
    q_half = q_hi;
    q_hi = q_at(hi);
  }

  double lo = 0.0;
  double width_goal = tol * std::max(1.0, hi);
  while (hi - lo > width_goal) {
    double m1 = lo + (hi - lo) / 3.0;
    double m2 = hi - (hi - lo) / 3.0;
    if (q_at(m1) <= q_at(m2))
      hi = m2;
    else
      lo = m1;
  }
  return 0.5 * (lo + hi);
}

Trace DFResult::to_trace() const {
  Trace t({"k", "f", "gap", "grad_dual_norm", "R", "d", "step_norm"});
  for (const auto& r : rows)
    t.append_row({static_cast<double>(r.k), r.f, r.gap, r.grad_dual, r.R, r.d,
                  r.step_norm});
  t.set_stat("f_final", f_final);
  if (gap_final) t.set_stat("gap_final", *gap_final);
  t.set_stat("grad_dual_final", grad_dual_final);
  t.set_stat("min_grad_dual_next", min_grad_dual_next);
  t.set_stat("max_dist_from_x0", max_dist_from_x0);
  t.set_stat("d_final", d_final);
  return t;
}

DFResult df_run(const ProblemSpec& p, const Geometry& geom,
                const DFConfig& cfg, std::int64_t T) {
  if (T < 1) throw config_error("df_run: T must be >= 1");
  cfg.validate();

  double L = smoothness_in(p, geom);
  double b = cfg.beta;
  // The one-step decrease and the certificate bound are assertable only when
  // a minimizer is known and the star-convexity hypothesis holds.
  bool star_ok = p.x_star && (p.convex || p.star_convex_verified);
  double D = 0.0;
  if (star_ok) D = primal_norm(*p.x_star - p.x0, geom);
  double C0 = df_rate_C0(cfg);

  DFResult res;
  Point x = p.x0;
  Point g = p.grad(x);
  Point m = g;
  DCert cert;
  cert.S = p.x0.zeros_like();
  cert.B = 0.0;
  cert.d = cfg.d0;

  double min_grad_next = std::numeric_limits<double>::infinity();
  double max_dist = 0.0;
  double lyap_prev = 0.0, e_dual_prev = 0.0, step_prev = 0.0;

  for (std::int64_t k = 0; k < T; ++k) {
    if (k > 0) {
      g = p.grad(x);
      min_grad_next = std::min(min_grad_next, dual_norm(g, geom));
    }
    double f = p.f(x);
    if (!std::isfinite(f)) throw divergence_error("non-finite objective", k);

    Point y = x - p.x0;
    double y_norm = primal_norm(y, geom);
    std::optional<double> gap = p.gap(f);

    if (star_ok && gap && k > 0 && D > 0.0) {
      // One-step decrease of gap + M b L ||y||^2, deferred from step k-1.
      double lyap = *gap + cfg.M * b * L * y_norm * y_norm;
      double lhs = lyap + cfg.rho * L * step_prev * step_prev;
      double rhs = (1.0 - b / 2.0) * lyap_prev + C0 * L * b * b * D * D +
                   2.0 * b * D * e_dual_prev;
      if (lhs > rhs + 1e-8)
        throw invariant_error("one-step majorized inequality", k - 1,
                              lhs - rhs);
    }

    double omega = cfg.omega == OmegaRule::one
                       ? 1.0
                       : 1.0 / std::max(1.0, dual_norm(g, geom));
    DCert prev_cert = cert;
    cert = dcert_update(cert, g, y, omega, geom);
    if (cert.d < prev_cert.d)
      throw invariant_error("d-certificate monotonicity", k,
                            prev_cert.d - cert.d);
    if (star_ok && cert.d > D + 1e-8)
      throw invariant_error("D-certificate validity", k, cert.d - D);

    m = ema_update(m, g, cfg.alpha);
    Point s = lmo_ascent(m, geom) * -1.0;

    RayState state{p.x0, x, y, s, b};
    double R = radius_search(state, g, L, cfg, cert.d, f, geom,
                             cfg.search_tol);
    Point x_next = state.z_of(R);
    double step_norm = primal_norm(x_next - x, geom);
    double e_dual = dual_norm(g - m, geom);

    res.rows.push_back(
        {k, f, gap, dual_norm(g, geom), R, cert.d, step_norm, y_norm, e_dual});

    if (star_ok && gap) {
      lyap_prev = *gap + cfg.M * b * L * y_norm * y_norm;
      e_dual_prev = e_dual;
      step_prev = step_norm;
    }

    x = x_next;
    max_dist = std::max(max_dist, primal_norm(x - p.x0, geom));
  }

  res.x_final = x;
  res.f_final = p.f(x);
  if (!std::isfinite(res.f_final))
    throw divergence_error("non-finite objective", T);
  res.gap_final = p.gap(res.f_final);
  if (star_ok && res.gap_final && D > 0.0) {
    Point y = x - p.x0;
    double y_norm = primal_norm(y, geom);
    double lyap = *res.gap_final + cfg.M * b * L * y_norm * y_norm;
    double lhs = lyap + cfg.rho * L * step_prev * step_prev;
    double rhs = (1.0 - b / 2.0) * lyap_prev + C0 * L * b * b * D * D +
                 2.0 * b * D * e_dual_prev;
    if (lhs > rhs + 1e-8)
      throw invariant_error("one-step majorized inequality", T - 1, lhs - rhs);
  }
  res.grad_dual_final = dual_norm(p.grad(x), geom);
  res.min_grad_dual_next = std::min(min_grad_next, res.grad_dual_final);
  res.max_dist_from_x0 = max_dist;
  res.d_final = cert.d;
  return res;
}

double df_rate_C0(const DFConfig& cfg) {
  return 1.0 + 2.0 * cfg.rho + cfg.lambda / 2.0 + cfg.M;
}

double df_rate_C(const DFConfig& cfg) {
  double denom = cfg.alpha - cfg.beta / 2.0;
  if (!(denom > 0.0)) throw config_error("df_rate_C: requires alpha > beta/2");
  double oma = 1.0 - cfg.alpha;
  return 2.0 * df_rate_C0(cfg) + 4.0 * oma * oma / (cfg.rho * denom * denom);
}

double df_rate_bound(double gap0, double L, double D, const DFConfig& cfg,
                  std::int64_t T) {
  if (T < 1) throw config_error("df_rate_bound: T must be >= 1");
  if (!(D >= 0.0)) throw config_error("df_rate_bound: D must be >= 0");
  double contraction = std::pow(1.0 - cfg.beta / 2.0, static_cast<double>(T));
  return contraction * gap0 + df_rate_C(cfg) * L * cfg.beta * D * D;
}

}  // namespace muonscale
