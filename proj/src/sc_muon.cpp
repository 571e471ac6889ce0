#include "muonscale/sc_muon.hpp"

#include <cmath>
#include <limits>

#include "muonscale/errors.hpp"
#include "muonscale/muon_base.hpp"

namespace muonscale {

SCCertificate sc_certificate(const Point& m_next, const Point& g,
                             const Geometry& geom) {
  SCCertificate c;
  c.e = dual_norm(g - m_next, geom);
  c.a = std::max(0.0, dual_norm(m_next, geom) - c.e);
  return c;
}

namespace {
void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw config_error("alpha must be in (0, 1)");
}
}  // namespace

double sc_A(double alpha) {
  require_alpha(alpha);
  double q = 1.0 - alpha;
  double gamma = alpha * (2.0 - alpha);
  return gamma / (16.0 * q * q);
}

double sc_chi(double alpha) {
  require_alpha(alpha);
  double q = 1.0 - alpha;
  double gamma = alpha * (2.0 - alpha);
  return std::min(3.0 / 8.0, gamma * gamma * gamma / (16.0 * q * q));
}

double sc_C(double alpha) { return std::sqrt(5.0) + 2.0 * sc_A(alpha); }

double sc_lyapunov(double gap, double e, double alpha, double L) {
  if (!(L > 0.0)) throw config_error("sc_lyapunov: L must be > 0");
  return gap + sc_A(alpha) / L * e * e;
}

Trace SCResult::to_trace() const {
  Trace t({"k", "f", "gap", "grad_dual_norm", "eta", "e", "a"});
  for (const auto& r : rows)
    t.append_row({static_cast<double>(r.k), r.f, r.gap, r.grad_dual, r.eta,
                  r.e, r.a});
  t.set_stat("f_final", f_final);
  if (gap_final) t.set_stat("gap_final", *gap_final);
  t.set_stat("grad_dual_final", grad_dual_final);
  t.set_stat("min_grad_dual_next", min_grad_dual_next);
  t.set_stat("max_dist_from_x0", max_dist_from_x0);
  t.set_stat("halt_streak", static_cast<double>(halt_streak));
  return t;
}

SCResult sc_run(const ProblemSpec& p, const Geometry& geom,
                const SCOptions& opts, std::int64_t T) {
  if (T < 1) throw config_error("sc_run: T must be >= 1");
  require_alpha(opts.alpha);
  double L = smoothness_in(p, geom);
  double A = sc_A(opts.alpha);
  double chi = sc_chi(opts.alpha);
  double q = 1.0 - opts.alpha;

  SCResult res;
  Point x = p.x0;
  Point g = p.grad(x);
  Point m = g;
  double min_grad_next = std::numeric_limits<double>::infinity();
  double max_dist = 0.0, max_dist_star = 0.0;

  double f_prev = 0.0, e_prev = 0.0, a_prev = 0.0;

  for (std::int64_t k = 0; k < T; ++k) {
    if (k > 0) {
      g = p.grad(x);
      min_grad_next = std::min(min_grad_next, dual_norm(g, geom));
    }
    double f = p.f(x);
    if (!std::isfinite(f)) throw divergence_error("non-finite objective", k);

    m = ema_update(m, g, opts.alpha);
    SCCertificate cert = sc_certificate(m, g, geom);
    double eta = cert.a / L;

    if (k > 0) {
      // Deferred assertions about step k-1 now that f_k and e_k are known.
      double descent_slack = f - (f_prev - a_prev * a_prev / (2.0 * L));
      if (descent_slack > 1e-9)
        throw invariant_error("certified descent", k - 1, descent_slack);
      double rec_slack = cert.e - q * (e_prev + a_prev);
      if (rec_slack > 1e-10)
        throw invariant_error("momentum-error recursion", k - 1, rec_slack);
      double lyap_slack = (f - f_prev) + (A / L) * (cert.e * cert.e - e_prev * e_prev) +
                          (chi / L) * (a_prev * a_prev + e_prev * e_prev);
      if (lyap_slack > 1e-9)
        throw invariant_error("Lyapunov descent", k - 1, lyap_slack);
    }

    res.rows.push_back(
        {k, f, p.gap(f), dual_norm(g, geom), eta, cert.e, cert.a});

    x = tr_step(x, m, eta, geom, k);
    max_dist = std::max(max_dist, primal_norm(x - p.x0, geom));
    if (p.x_star)
      max_dist_star =
          std::max(max_dist_star, primal_norm(x - *p.x_star, geom));

    f_prev = f;
    e_prev = cert.e;
    a_prev = cert.a;
    res.halt_streak = cert.a == 0.0 ? res.halt_streak + 1 : 0;
  }

  // Close out the last step's assertions against the final state.
  res.x_final = x;
  res.f_final = p.f(x);
  if (!std::isfinite(res.f_final))
    throw divergence_error("non-finite objective", T);
  {
    Point g_T = p.grad(x);
    Point m_next = ema_update(m, g_T, opts.alpha);
    SCCertificate cert_T = sc_certificate(m_next, g_T, geom);
    double descent_slack =
        res.f_final - (f_prev - a_prev * a_prev / (2.0 * L));
    if (descent_slack > 1e-9)
      throw invariant_error("certified descent", T - 1, descent_slack);
    double rec_slack = cert_T.e - q * (e_prev + a_prev);
    if (rec_slack > 1e-10)
      throw invariant_error("momentum-error recursion", T - 1, rec_slack);
    double lyap_slack = (res.f_final - f_prev) +
                        (A / L) * (cert_T.e * cert_T.e - e_prev * e_prev) +
                        (chi / L) * (a_prev * a_prev + e_prev * e_prev);
    if (lyap_slack > 1e-9)
      throw invariant_error("Lyapunov descent", T - 1, lyap_slack);
    res.grad_dual_final = dual_norm(g_T, geom);
  }
  res.gap_final = p.gap(res.f_final);
  res.min_grad_dual_next = std::min(min_grad_next, res.grad_dual_final);
  res.max_dist_from_x0 = max_dist;
  if (p.x_star)
    max_dist_star =
        std::max(max_dist_star, primal_norm(p.x0 - *p.x_star, geom));
  res.max_dist_from_xstar = max_dist_star;
  return res;
}

}  // namespace muonscale
