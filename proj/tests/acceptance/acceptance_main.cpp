// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion pins its tolerances and parameters in code.

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "muonscale/checks.hpp"
#include "muonscale/da_muon.hpp"
#include "muonscale/df_muon.hpp"
#include "muonscale/df_practical.hpp"
#include "muonscale/errors.hpp"
#include "muonscale/muon_base.hpp"
#include "muonscale/problems.hpp"
#include "muonscale/runner.hpp"
#include "muonscale/sc_muon.hpp"
#include "muonscale/testkit.hpp"

using namespace muonscale;

namespace {

struct Outcome {
  bool pass = true;
  double margin = std::numeric_limits<double>::infinity();
  std::string detail;

  void fold(bool ok, double m, const std::string& d) {
    if (m < margin) {
      margin = m;
      if (!d.empty()) detail = d;
    }
    pass = pass && ok;
  }
  void fold(const CheckResult& r) { fold(r.pass, r.worst_margin, r.detail); }
};

int g_failures = 0;

void report(int id, const std::string& name, const Outcome& out,
            double seconds) {
  std::ostringstream os;
  os << (out.pass ? "[PASS] " : "[FAIL] ") << std::setw(2) << id << " " << name
     << " (margin " << std::setprecision(3) << std::scientific << out.margin
     << ", " << std::fixed << std::setprecision(1) << seconds << "s)";
  if (!out.pass && !out.detail.empty()) os << " -- " << out.detail;
  std::cout << os.str() << std::endl;
  if (!out.pass) ++g_failures;
}

template <typename Fn>
void criterion(int id, const std::string& name, Fn&& fn) {
  auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    fn(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = e.what();
    out.margin = -std::numeric_limits<double>::infinity();
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report(id, name, out, seconds);
}

const std::vector<std::int64_t> kPow2_32_4096 = {32,  64,   128,  256,
                                                 512, 1024, 2048, 4096};
const std::vector<std::int64_t> kPow2_64_4096 = {64,  128,  256, 512,
                                                 1024, 2048, 4096};

}  // namespace

int main() {
  std::cout << "muonscale acceptance suite\n";

  criterion(1, "lmo pairing identity + per-step optimality assertion",
            [](Outcome& out) {
              out.fold(checks::lmo_pairing(500, 2024, 1e-8));
              // exercise the tr_step assertion across algorithms and
              // geometries; any violation throws out of the run
              for (Norm tag :
                   {Norm::euclidean, Norm::linf_sign, Norm::spectral}) {
                ProblemSpec p = make_problem("quad_iso", 4, 1);
                Geometry geom = Geometry::uniform(tag, 1);
                fixed_muon_run(p, geom, 0.05, 0.9, 50);
                da_run(p, geom, DAOptions{}, 50);
                sc_run(p, geom, SCOptions{}, 50);
                DFConfig cfg;
                cfg.beta = default_df_beta(cfg.alpha, 50);
                df_run(p, geom, cfg, 50);
              }
            });

  criterion(2, "certified descent and Lyapunov decrease (sc)",
            [](Outcome& out) {
              auto results = checks::sc_trace_checks(
                  {"quad_iso", "least_squares", "logistic", "star_1d"},
                  {0.3, 0.6, 0.9}, 2000);
              for (const auto& r : results)
                if (r.name == "certified descent" || r.name == "Lyapunov descent")
                  out.fold(r);
            });

  criterion(3, "distance certificate stays below the true distance (df)",
            [](Outcome& out) { out.fold(checks::df_dcert_validity(10, 300)); });

  criterion(4, "scalar search vs 1e5-point grid oracle + convexity",
            [](Outcome& out) {
              out.fold(checks::df_search_vs_grid(200, 100000, 1e-6));
              out.fold(checks::df_q_convexity(50, 1000));
            });

  criterion(5, "last-iterate rate bound (df)", [](Outcome& out) {
    out.fold(checks::df_rate_guarantee(kPow2_32_4096));
  });

  criterion(6, "last-iterate rate bound on quad_iso (sc)", [](Outcome& out) {
    out.fold(checks::sc_rate_guarantee(kPow2_32_4096, {0.3, 0.6, 0.9}));
  });

  // Criteria 7 and 9 share the same distance-adaptive runs.
  {
    auto start = std::chrono::steady_clock::now();
    Outcome bound_out, tracking_out;
    try {
      for (const char* prob : {"ripple", "quad_iso"}) {
        ProblemSpec p = make_problem(prob, 8, 7);
        Geometry geom = Geometry::uniform(Norm::euclidean, 1);
        double L = smoothness_in(p, geom);
        double f0_gap = p.f(p.x0) - *p.f_star;
        for (double alpha : {0.5, 0.9}) {
          for (std::int64_t T : kPow2_64_4096) {
            DAOptions opts;
            opts.alpha = alpha;
            DAResult res = da_run(p, geom, opts, T);
            std::string tag = std::string(prob) + " alpha=" +
                              std::to_string(alpha) + " T=" + std::to_string(T);
            double D = std::max(res.r0, res.max_dist_from_x0);
            double bound = da_stationarity_bound(f0_gap, res.r0, D, L, alpha, T);
            bound_out.fold(bound >= res.min_grad_dual_next,
                          bound - res.min_grad_dual_next, tag);
            for (std::size_t k = 0; k < res.rows.size(); ++k) {
              double r_prev = k == 0 ? res.r0 : res.rows[k - 1].r_bar;
              double tb = momentum_tracking_bound(
                  L, r_prev, alpha, static_cast<std::int64_t>(k));
              double slack = tb + 1e-8 - res.rows[k].track_err;
              tracking_out.fold(slack >= 0.0, slack,
                                tag + " step " + std::to_string(k));
            }
          }
        }
      }
    } catch (const std::exception& e) {
      bound_out.pass = tracking_out.pass = false;
      bound_out.detail = tracking_out.detail = e.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    report(7, "stationarity bound with realized radius (da)", bound_out,
           seconds);
    report(9, "momentum tracking along da traces", tracking_out, 0.0);
  }

  criterion(8, "log-log rate slopes", [](Outcome& out) {
    Geometry geom = Geometry::uniform(Norm::euclidean, 1);

    ProblemSpec ls = make_problem("least_squares", 10, 5);
    std::vector<std::pair<double, double>> df_pts, sc_pts;
    // the df gap tracks its log(T)/T bound, so the fit needs horizons deep
    // enough for the log factor to fade
    for (std::int64_t T : {256, 512, 1024, 2048, 4096, 8192, 16384}) {
      DFConfig cfg;
      cfg.beta = default_df_beta(cfg.alpha, T);
      auto df_res = df_run(ls, geom, cfg, T);
      if (df_res.gap_final && *df_res.gap_final > 0.0)
        df_pts.emplace_back(static_cast<double>(T), *df_res.gap_final);
      auto sc_res = sc_run(ls, geom, SCOptions{}, T);
      if (sc_res.gap_final && *sc_res.gap_final > 0.0)
        sc_pts.emplace_back(static_cast<double>(T), *sc_res.gap_final);
    }
    auto df_fit = testkit::slope_fit(df_pts);
    out.fold(df_fit.slope <= -0.8, -0.8 - df_fit.slope,
             "df gap slope " + std::to_string(df_fit.slope) + " over " +
                 std::to_string(df_pts.size()) + " horizons");
    auto sc_fit = testkit::slope_fit(sc_pts);
    out.fold(sc_fit.slope <= -0.8, -0.8 - sc_fit.slope,
             "sc gap slope " + std::to_string(sc_fit.slope) + " over " +
                 std::to_string(sc_pts.size()) + " horizons");

    ProblemSpec ripple = make_problem("ripple", 8, 7);
    std::vector<std::pair<double, double>> da_pts;
    for (std::int64_t T : kPow2_64_4096) {
      DAOptions opts;
      auto res = da_run(ripple, geom, opts, T);
      if (res.min_grad_dual_next > 0.0)
        da_pts.emplace_back(static_cast<double>(T), res.min_grad_dual_next);
    }
    auto da_fit = testkit::slope_fit(da_pts);
    out.fold(da_fit.slope <= -0.35, -0.35 - da_fit.slope,
             "da min-grad slope " + std::to_string(da_fit.slope) + " over " +
                 std::to_string(da_pts.size()) + " horizons");
  });

  criterion(10, "practical mode sanity (tiny logistic)", [](Outcome& out) {
    PracticalCfg cfg;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      TinyModel model = make_tiny_model("tiny_logistic", seed);
      PracticalResult res = practical_run(model, cfg, 500, seed + 100);
      out.fold(res.grad_evals == 500,
               res.grad_evals == 500 ? 1.0 : -1.0,
               "seed " + std::to_string(seed) + " grad evals " +
                   std::to_string(res.grad_evals));
      double first = 0.0, last = 0.0;
      for (int i = 0; i < 50; ++i) {
        first += res.rows[i].loss / 50.0;
        last += res.rows[450 + i].loss / 50.0;
      }
      out.fold(last < first, first - last,
               "seed " + std::to_string(seed) + " deciles " +
                   std::to_string(first) + " -> " + std::to_string(last));
      for (const auto& row : res.rows)
        out.fold(true, std::min(row.base_scale - cfg.eta_min,
                                cfg.eta_max - row.base_scale),
                 "seed " + std::to_string(seed) + " scale bounds");
    }
  });

  criterion(11, "byte-identical CSV under identical config and seed",
            [](Outcome& out) {
              for (const char* cfg :
                   {R"({"problem":"quad_iso","dim":3,"seed":4,"algo":"da","T":60,"alpha":0.5})",
                    R"({"problem":"least_squares","dim":6,"seed":9,"algo":"df","T":60})",
                    R"({"problem":"tiny_logistic","seed":2,"algo":"df_practical","T":40})"}) {
                std::string a = run_from_json(cfg).to_csv();
                std::string b = run_from_json(cfg).to_csv();
                out.fold(a == b, a == b ? 1.0 : -1.0, cfg);
              }
            });

  std::cout << (g_failures == 0
                    ? "ACCEPTANCE: all criteria passed"
                    : "ACCEPTANCE: " + std::to_string(g_failures) +
                          " criterion(s) failed")
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
