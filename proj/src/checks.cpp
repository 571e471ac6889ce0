#include "muonscale/checks.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "muonscale/da_muon.hpp"
#include "muonscale/df_practical.hpp"
#include "muonscale/errors.hpp"
#include "muonscale/muon_base.hpp"
#include "muonscale/problems.hpp"
#include "muonscale/rng.hpp"
#include "muonscale/runner.hpp"
#include "muonscale/sc_muon.hpp"
#include "muonscale/testkit.hpp"
#include "muonscale/trace.hpp"

namespace muonscale {
namespace checks {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tracks the most adverse slack and where it happened.
struct Margin {
  double worst = kInf;
  std::string at;

  void update(double slack, const std::string& where) {
    if (slack < worst) {
      worst = slack;
      at = where;
    }
  }

  CheckResult result(const std::string& suite, const std::string& name) const {
    CheckResult r;
    r.suite = suite;
    r.name = name;
    r.pass = worst >= 0.0;
    r.worst_margin = worst == 0.0 ? 0.0 : worst;  // normalize -0
    r.detail = r.pass ? "" : "worst at " + at;
    return r;
  }
};

std::string step_str(std::int64_t k) { return "step " + std::to_string(k); }

Point random_point(Rng& rng, Norm tag) {
  if (tag == Norm::spectral) return Point::matrix("w", rng.gaussian_matrix(4, 3));
  return Point::vector("x", rng.gaussian_vector(8));
}

const std::vector<Norm> kAllTags = {Norm::euclidean, Norm::linf_sign,
                                    Norm::spectral};

}  // namespace

CheckResult dual_norm_properties(int n_per_geometry, std::uint64_t seed) {
  Margin m;
  for (Norm tag : kAllTags) {
    Geometry geom = Geometry::uniform(tag, 1);
    Rng rng(seed + static_cast<std::uint64_t>(tag));
    for (int i = 0; i < n_per_geometry; ++i) {
      Point a = random_point(rng, tag);
      Point b = random_point(rng, tag);
      double na = dual_norm(a, geom);
      double nb = dual_norm(b, geom);
      std::string where = to_string(tag) + " case " + std::to_string(i);
      m.update(na, where + " nonneg");
      double lambda = rng.uniform(-3.0, 3.0);
      double scaled = dual_norm(lambda * a, geom);
      double homog = 1e-10 * std::max(1.0, std::abs(lambda) * na) -
                     std::abs(scaled - std::abs(lambda) * na);
      m.update(homog, where + " homogeneity");
      double tri = na + nb - dual_norm(a + b, geom);
      m.update(tri + 1e-10 * std::max(1.0, na + nb), where + " triangle");
    }
  }
  return m.result("geometry", "dual norm properties");
}

CheckResult lmo_pairing(int n_per_geometry, std::uint64_t seed,
                        double rel_tol) {
  Margin m;
  for (Norm tag : kAllTags) {
    Geometry geom = Geometry::uniform(tag, 1);
    Rng rng(seed + 17u * static_cast<std::uint64_t>(tag));
    for (int i = 0; i < n_per_geometry; ++i) {
      Point a = random_point(rng, tag);
      Point u = lmo_ascent(a, geom);
      double pn = primal_norm(u, geom);
      m.update(1.0 + 1e-8 - pn,
               to_string(tag) + " case " + std::to_string(i) + " unit ball");
      double pairing = a.dot(u);
      double dn = dual_norm(a, geom);
      double rel = std::abs(pairing - dn) / std::max(1.0, dn);
      m.update(rel_tol - rel,
               to_string(tag) + " case " + std::to_string(i) + " pairing");
    }
  }
  return m.result("geometry", "lmo pairing identity");
}

CheckResult hoelder_inequality(int n_per_geometry, std::uint64_t seed) {
  Margin m;
  for (Norm tag : kAllTags) {
    Geometry geom = Geometry::uniform(tag, 1);
    Rng rng(seed + 29u * static_cast<std::uint64_t>(tag));
    for (int i = 0; i < n_per_geometry; ++i) {
      Point g = random_point(rng, tag);
      Point x = random_point(rng, tag);
      double bound = dual_norm(g, geom) * primal_norm(x, geom);
      double slack = bound + 1e-10 * std::max(1.0, bound) - std::abs(g.dot(x));
      m.update(slack, to_string(tag) + " case " + std::to_string(i));
    }
  }
  return m.result("geometry", "generalized Hoelder inequality");
}

CheckResult orthogonalize_spectrum(int n_cases, std::uint64_t seed) {
  Margin m;
  Rng rng(seed);
  for (int i = 0; i < n_cases; ++i) {
    Eigen::Index rows = 2 + i % 5;
    Eigen::Index cols = 2 + (i / 2) % 4;
    Eigen::MatrixXd a = rng.gaussian_matrix(rows, cols);
    if (i % 4 == 3 && rows > 2) a.row(0) = a.row(1);  // force rank deficiency
    Eigen::MatrixXd q = orthogonalize(a, OrthoMode::exact);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(q);
    for (Eigen::Index j = 0; j < svd.singularValues().size(); ++j) {
      double s = svd.singularValues()(j);
      double dist = std::min(std::abs(s), std::abs(s - 1.0));
      m.update(1e-8 - dist, "case " + std::to_string(i));
    }
  }
  return m.result("geometry", "orthogonalize spectrum in {0,1}");
}

std::vector<CheckResult> da_trace_checks(std::int64_t T,
                                         const std::vector<double>& alphas) {
  Margin mono, tracking, bounded;
  for (const char* prob : {"ripple", "quad_iso"}) {
    ProblemSpec p = make_problem(prob, 8, 7);
    Geometry geom = Geometry::uniform(Norm::euclidean, 1);
    double L = smoothness_in(p, geom);
    for (double alpha : alphas) {
      DAOptions opts;
      opts.alpha = alpha;
      DAResult res = da_run(p, geom, opts, T);
      std::string tagbase = std::string(prob) + " alpha=" + std::to_string(alpha);
      for (std::size_t k = 0; k < res.rows.size(); ++k) {
        double r_prev = k == 0 ? res.r0 : res.rows[k - 1].r_bar;
        mono.update(res.rows[k].r_bar - r_prev, tagbase + " " + step_str(k));
        double bound = momentum_tracking_bound(
            L, r_prev, alpha, static_cast<std::int64_t>(k));
        tracking.update(bound + 1e-8 - res.rows[k].track_err,
                        tagbase + " " + step_str(k));
      }
      bounded.update(std::isfinite(res.max_dist_from_x0)
                         ? res.max_dist_from_x0 >= 0.0 ? 1.0 : -1.0
                         : -kInf,
                     tagbase);
    }
  }
  return {mono.result("da", "r-bar monotonicity"),
          tracking.result("da", "momentum tracking"),
          bounded.result("da", "bounded trajectory screen")};
}

CheckResult da_stationarity_guarantee(const std::vector<std::int64_t>& T_list,
                    const std::vector<double>& alphas) {
  Margin m;
  for (const char* prob : {"ripple", "quad_iso"}) {
    ProblemSpec p = make_problem(prob, 8, 7);
    Geometry geom = Geometry::uniform(Norm::euclidean, 1);
    double L = smoothness_in(p, geom);
    double f0_gap = p.f(p.x0) - *p.f_star;
    for (double alpha : alphas) {
      for (std::int64_t T : T_list) {
        DAOptions opts;
        opts.alpha = alpha;
        DAResult res = da_run(p, geom, opts, T);
        double D = std::max(res.r0, res.max_dist_from_x0);
        double bound = da_stationarity_bound(f0_gap, res.r0, D, L, alpha, T);
        m.update(bound - res.min_grad_dual_next,
                 std::string(prob) + " alpha=" + std::to_string(alpha) +
                     " T=" + std::to_string(T));
      }
    }
  }
  return m.result("da", "stationarity guarantee bound");
}

std::vector<CheckResult> sc_trace_checks(
    const std::vector<std::string>& problems, const std::vector<double>& alphas,
    std::int64_t T) {
  Margin descent, recursion, lyapunov, gapcert;
  for (const auto& prob : problems) {
    ProblemSpec p = make_problem(prob, prob == "least_squares" ? 10 : 6, 11);
    Geometry geom = Geometry::uniform(Norm::euclidean, 1);
    double L = smoothness_in(p, geom);
    bool star = p.x_star && (p.convex || p.star_convex_verified);
    for (double alpha : alphas) {
      double q = 1.0 - alpha;
      double A = sc_A(alpha);
      double chi = sc_chi(alpha);
      SCResult res = sc_run(p, geom, SCOptions{alpha}, T);
      std::string tagbase = prob + " alpha=" + std::to_string(alpha);
      double D_obs = res.max_dist_from_xstar;
      for (std::size_t k = 0; k < res.rows.size(); ++k) {
        const auto& row = res.rows[k];
        double f_next =
            k + 1 < res.rows.size() ? res.rows[k + 1].f : res.f_final;
        descent.update(
            row.f - row.a * row.a / (2.0 * L) + 1e-9 - f_next,
            tagbase + " " + step_str(static_cast<std::int64_t>(k)));
        if (k + 1 < res.rows.size()) {
          const auto& nxt = res.rows[k + 1];
          recursion.update(
              q * (row.e + row.a) + 1e-10 - nxt.e,
              tagbase + " " + step_str(static_cast<std::int64_t>(k)));
          double phi_k = (row.f - f_next) +
                         (A / L) * (row.e * row.e - nxt.e * nxt.e) -
                         (chi / L) * (row.a * row.a + row.e * row.e);
          lyapunov.update(
              phi_k + 1e-9,
              tagbase + " " + step_str(static_cast<std::int64_t>(k)));
        }
        if (star && row.gap)
          gapcert.update(
              D_obs * (row.a + 2.0 * row.e) + 1e-8 - *row.gap,
              tagbase + " " + step_str(static_cast<std::int64_t>(k)));
      }
    }
  }
  return {descent.result("sc", "certified descent"),
          recursion.result("sc", "momentum-error recursion"),
          lyapunov.result("sc", "Lyapunov descent"),
          gapcert.result("sc", "gap-to-certificate relation")};
}

CheckResult sc_rate_guarantee(const std::vector<std::int64_t>& T_list,
                    const std::vector<double>& alphas) {
  Margin m;
  ProblemSpec p = make_problem("quad_iso", 6, 11);
  Geometry geom = Geometry::uniform(Norm::euclidean, 1);
  double L = smoothness_in(p, geom);
  double gap0 = p.f(p.x0) - *p.f_star;
  double d_lev = std::sqrt(2.0 * gap0 / L);
  for (double alpha : alphas) {
    double c = sc_C(alpha);
    double chi = sc_chi(alpha);
    for (std::int64_t T : T_list) {
      SCResult res = sc_run(p, geom, SCOptions{alpha}, T);
      double bound = c * c / chi * L * d_lev * d_lev /
                     static_cast<double>(T);
      m.update(bound + 1e-12 - *res.gap_final,
               "alpha=" + std::to_string(alpha) + " T=" + std::to_string(T));
    }
  }
  return m.result("sc", "last-iterate rate bound (quad_iso)");
}

CheckResult df_dcert_validity(int n_seeds, std::int64_t T) {
  Margin m;
  for (const char* prob : {"quad_iso", "least_squares"}) {
    for (int s = 1; s <= n_seeds; ++s) {
      ProblemSpec p = make_problem(prob, 6, static_cast<std::uint64_t>(s));
      Geometry geom = Geometry::uniform(Norm::euclidean, 1);
      double D = primal_norm(*p.x_star - p.x0, geom);
      for (OmegaRule omega : {OmegaRule::one, OmegaRule::normalized}) {
        DFConfig cfg;
        cfg.alpha = 0.9;
        cfg.beta = default_df_beta(cfg.alpha, T);
        cfg.omega = omega;
        DFResult res = df_run(p, geom, cfg, T);
        for (const auto& row : res.rows)
          m.update(D + 1e-8 - row.d,
                   std::string(prob) + " seed " + std::to_string(s) + " " +
                       step_str(row.k));
      }
    }
  }
  return m.result("df", "D-certificate validity");
}

SyntheticDFState make_synthetic_df_state(int index, std::uint64_t seed) {
  Rng rng(seed + 1000003ull * static_cast<std::uint64_t>(index));
  Norm tag = kAllTags[index % 3];
  SyntheticDFState st;
  st.geom = Geometry::uniform(tag, 1);
  Point x0 = random_point(rng, tag);
  Point x = random_point(rng, tag);
  Point mom = random_point(rng, tag);
  st.g = random_point(rng, tag);
  st.cfg.alpha = 0.9;
  st.cfg.beta = index % 2 == 0 ? 0.2 : 0.45;
  st.L = rng.uniform(0.5, 4.0);
  st.d_next = rng.uniform(0.0, 3.0);
  st.f_x = rng.uniform(-1.0, 2.0);
  st.state = RayState{x0, x, x - x0, -1.0 * lmo_ascent(mom, st.geom),
                      st.cfg.beta};
  return st;
}

CheckResult df_q_convexity(int n_states, int grid_points) {
  Margin m;
  for (int i = 0; i < n_states; ++i) {
    SyntheticDFState st = make_synthetic_df_state(i, 314159);
    double hi = 4.0 * std::max(1.0, 2.0 * st.d_next);
    double h = hi / (grid_points - 1);
    double q_prev = 0.0, q_curr = 0.0;
    for (int j = 0; j < grid_points; ++j) {
      double q_next = majorant_eval(st.state, st.g, st.L, st.cfg, st.d_next,
                                    st.f_x, j * h, st.geom);
      if (j >= 2) {
        double second = q_next - 2.0 * q_curr + q_prev;
        m.update(second + 1e-9,
                 "state " + std::to_string(i) + " grid " + std::to_string(j));
      }
      q_prev = q_curr;
      q_curr = q_next;
    }
  }
  return m.result("df", "majorant convexity in R");
}

CheckResult df_majorization(int n_states) {
  Margin m;
  for (int i = 0; i < n_states; ++i) {
    const char* prob = i % 2 == 0 ? "star_1d" : "ripple";
    ProblemSpec p = make_problem(prob, 6, 100 + static_cast<std::uint64_t>(i));
    Geometry geom = Geometry::uniform(Norm::euclidean, 1);
    double L = smoothness_in(p, geom);
    Rng rng(777 + static_cast<std::uint64_t>(i));
    Point x = p.x0;
    for (std::size_t bi = 0; bi < x.block_count(); ++bi)
      x.block(bi).data += rng.gaussian_matrix(x.block(bi).data.rows(),
                                              x.block(bi).data.cols());
    Point mom = p.grad(x) + 0.3 * Point::vector("x", rng.gaussian_vector(6));
    Point s = -1.0 * lmo_ascent(mom, geom);
    Point y = x - p.x0;
    Point g = p.grad(x);
    double f_x = p.f(x);
    double beta = i % 2 == 0 ? 0.25 : 0.5;
    for (double R : {0.0, 0.3, 1.0, 2.7, 10.0}) {
      Point ray = R * s - y;
      Point z = x + beta * ray;
      double rn = primal_norm(ray, geom);
      double model =
          f_x + beta * g.dot(ray) + 0.5 * L * beta * beta * rn * rn;
      m.update(model + 1e-9 - p.f(z),
               std::string(prob) + " state " + std::to_string(i) + " R=" +
                   std::to_string(R));
    }
  }
  return m.result("df", "smoothness majorization along the ray");
}

CheckResult df_search_vs_grid(int n_states, std::int64_t grid_n, double tol) {
  Margin m;
  for (int i = 0; i < n_states; ++i) {
    SyntheticDFState st = make_synthetic_df_state(i, 271828);
    auto q_at = [&](double R) {
      return majorant_eval(st.state, st.g, st.L, st.cfg, st.d_next, st.f_x, R,
                           st.geom);
    };
    double r_found = radius_search(st.state, st.g, st.L, st.cfg, st.d_next,
                                   st.f_x, st.geom, 1e-10);
    double hi = std::max(1.0, 2.0 * st.d_next);
    while (q_at(hi) < q_at(hi / 2.0)) hi *= 2.0;
    auto oracle = testkit::grid_min(q_at, 0.0, hi, grid_n);
    // one-sided: the search must be at least as good as the grid value;
    // at a kink the grid's own error exceeds the tolerance
    m.update(oracle.min + tol - q_at(r_found), "state " + std::to_string(i));
  }
  return m.result("df", "scalar search matches grid oracle");
}

CheckResult df_onestep(std::int64_t T) {
  Margin m;
  for (const char* prob : {"quad_iso", "least_squares", "star_1d"}) {
    ProblemSpec p =
        make_problem(prob, std::string(prob) == "least_squares" ? 10 : 6, 5);
    Geometry geom = Geometry::uniform(Norm::euclidean, 1);
    double L = smoothness_in(p, geom);
    double D = primal_norm(*p.x_star - p.x0, geom);
    if (D == 0.0) continue;
    DFConfig cfg;
    cfg.alpha = 0.9;
    cfg.beta = default_df_beta(cfg.alpha, T);
    DFResult res = df_run(p, geom, cfg, T);
    double C0 = df_rate_C0(cfg);
    double b = cfg.beta;
    for (std::size_t k = 0; k + 1 <= res.rows.size(); ++k) {
      const auto& row = res.rows[k];
      double gap_next, y_next;
      if (k + 1 < res.rows.size()) {
        gap_next = *res.rows[k + 1].gap;
        y_next = res.rows[k + 1].y_norm;
      } else {
        gap_next = *res.gap_final;
        y_next = primal_norm(res.x_final - p.x0, geom);
      }
      double lyap_k = *row.gap + cfg.M * b * L * row.y_norm * row.y_norm;
      double lyap_next = gap_next + cfg.M * b * L * y_next * y_next;
      double lhs = lyap_next + cfg.rho * L * row.step_norm * row.step_norm;
      double rhs = (1.0 - b / 2.0) * lyap_k + C0 * L * b * b * D * D +
                   2.0 * b * D * row.e_dual;
      m.update(rhs + 1e-8 - lhs, std::string(prob) + " " + step_str(row.k));
    }
  }
  return m.result("df", "one-step majorized inequality");
}

CheckResult df_rate_guarantee(const std::vector<std::int64_t>& T_list) {
  Margin m;
  for (const char* prob : {"quad_iso", "least_squares", "star_1d"}) {
    ProblemSpec p =
        make_problem(prob, std::string(prob) == "least_squares" ? 10 : 6, 5);
    Geometry geom = Geometry::uniform(Norm::euclidean, 1);
    double L = smoothness_in(p, geom);
    double D = primal_norm(*p.x_star - p.x0, geom);
    double gap0 = p.f(p.x0) - *p.f_star;
    for (std::int64_t T : T_list) {
      DFConfig cfg;
      cfg.alpha = 0.9;
      cfg.beta = default_df_beta(cfg.alpha, T);
      DFResult res = df_run(p, geom, cfg, T);
      double bound = df_rate_bound(gap0, L, D, cfg, T);
      m.update(bound + 1e-8 - *res.gap_final,
               std::string(prob) + " T=" + std::to_string(T));
    }
  }
  return m.result("df", "last-iterate rate bound");
}

std::vector<CheckResult> practical_checks(int n_seeds, std::int64_t T) {
  Margin evals, bounds, increments, translation, determinism;
  PracticalCfg cfg;
  for (int s = 1; s <= n_seeds; ++s) {
    TinyModel model = make_tiny_model("tiny_logistic",
                                      static_cast<std::uint64_t>(s));
    PracticalResult res =
        practical_run(model, cfg, T, static_cast<std::uint64_t>(s) + 1);
    evals.update(-std::abs(static_cast<double>(res.grad_evals - T)),
                 "seed " + std::to_string(s));
    double prev = cfg.eta_init;
    for (const auto& row : res.rows) {
      bounds.update(std::min(row.base_scale - cfg.eta_min,
                             cfg.eta_max - row.base_scale),
                    "seed " + std::to_string(s) + " " + step_str(row.t));
      double max_inc =
          (1.0 + 1e-12) * (1.0 - cfg.smoothing) * (cfg.eta_max - cfg.eta_min);
      increments.update(max_inc - std::abs(row.base_scale - prev),
                        "seed " + std::to_string(s) + " " + step_str(row.t));
      prev = row.base_scale;
    }

    PracticalResult res2 =
        practical_run(model, cfg, T, static_cast<std::uint64_t>(s) + 1);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
      max_diff = std::max(max_diff,
                          std::abs(res.rows[i].loss - res2.rows[i].loss));
      max_diff = std::max(
          max_diff, std::abs(res.rows[i].base_scale - res2.rows[i].base_scale));
    }
    determinism.update(-max_diff, "seed " + std::to_string(s));
  }

  // score with no center and no proxy term ignores y entirely
  {
    Rng rng(99);
    PracticalCfg inv = cfg;
    inv.c_center = 0.0;
    inv.c_proxy = 0.0;
    for (int i = 0; i < 20; ++i) {
      std::vector<UpdateBlock> blocks;
      blocks.push_back(UpdateBlock{rng.gaussian_matrix(4, 3),
                                   rng.gaussian_matrix(4, 3),
                                   rng.gaussian_matrix(4, 3)});
      StepStats st = aggregate_stats(blocks);
      blocks[0].y.array() += rng.uniform(-5.0, 5.0);
      StepStats shifted = aggregate_stats(blocks);
      double a = select_scale(st, inv, inv.eta_init, 0.3);
      double b = select_scale(shifted, inv, inv.eta_init, 0.3);
      translation.update(-std::abs(a - b), "case " + std::to_string(i));
    }
  }

  return {evals.result("practical", "one gradient evaluation per step"),
          bounds.result("practical", "base scale within [eta_min, eta_max]"),
          increments.result("practical", "smoothing increment bound"),
          translation.result("practical",
                             "translation invariance without center/proxy"),
          determinism.result("practical", "seeded determinism")};
}

CheckResult csv_determinism() {
  Margin m;
  const char* cfg =
      R"({"problem":"quad_iso","dim":3,"seed":4,"algo":"da","T":50,"alpha":0.5})";
  std::string a = run_from_json(cfg).to_csv();
  std::string b = run_from_json(cfg).to_csv();
  m.update(a == b ? 1.0 : -1.0, "da quad_iso rerun");
  return m.result("harness", "CSV byte determinism");
}

}  // namespace checks

namespace {

void append(std::vector<CheckResult>& all, std::vector<CheckResult> more) {
  for (auto& r : more) all.push_back(std::move(r));
}

std::vector<CheckResult> geometry_suite() {
  return {checks::dual_norm_properties(500, 1),
          checks::lmo_pairing(500, 2),
          checks::hoelder_inequality(500, 3),
          checks::orthogonalize_spectrum(100, 4)};
}

std::vector<CheckResult> da_suite() {
  std::vector<CheckResult> out;
  append(out, checks::da_trace_checks(300, {0.5, 0.9}));
  out.push_back(checks::da_stationarity_guarantee({256, 1024}, {0.5, 0.9}));
  return out;
}

std::vector<CheckResult> sc_suite() {
  std::vector<CheckResult> out;
  append(out, checks::sc_trace_checks(
                  {"quad_iso", "least_squares", "logistic", "star_1d"},
                  {0.3, 0.6, 0.9}, 500));
  out.push_back(checks::sc_rate_guarantee({64, 512}, {0.3, 0.6, 0.9}));
  return out;
}

std::vector<CheckResult> df_suite() {
  return {checks::df_dcert_validity(5, 200),
          checks::df_q_convexity(50, 1000),
          checks::df_majorization(24),
          checks::df_search_vs_grid(60, 100000, 1e-6),
          checks::df_onestep(300),
          checks::df_rate_guarantee({32, 128, 512})};
}

std::vector<CheckResult> practical_suite() {
  return checks::practical_checks(2, 200);
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite) {
  std::vector<CheckResult> out;
  if (suite == "geometry") return geometry_suite();
  if (suite == "da") return da_suite();
  if (suite == "sc") return sc_suite();
  if (suite == "df") return df_suite();
  if (suite == "practical") return practical_suite();
  if (suite == "all") {
    append(out, geometry_suite());
    append(out, da_suite());
    append(out, sc_suite());
    append(out, df_suite());
    append(out, practical_suite());
    out.push_back(checks::csv_determinism());
    return out;
  }
  throw config_error("unknown suite '" + suite +
                     "' (expected geometry, da, sc, df, practical or all)");
}

std::string format_report(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.suite << ": " << r.name
       << " (worst margin " << r.worst_margin << ")";
    if (!r.detail.empty()) os << " -- " << r.detail;
    os << "\n";
  }
  int failed = failure_count(results);
  os << (failed == 0 ? "all checks passed" :
         std::to_string(failed) + " check(s) failed")
     << " (" << results.size() << " total)\n";
  return os.str();
}

int failure_count(const std::vector<CheckResult>& results) {
  int n = 0;
  for (const auto& r : results)
    if (!r.pass) ++n;
  return n;
}

}  // namespace muonscale
