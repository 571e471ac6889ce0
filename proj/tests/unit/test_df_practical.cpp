#include <doctest.h>

#include <cmath>
#include <numeric>

#include "muonscale/checks.hpp"
#include "muonscale/df_practical.hpp"
#include "muonscale/errors.hpp"
#include "muonscale/rng.hpp"
#include "muonscale/testkit.hpp"

using namespace muonscale;

TEST_CASE("aggregate statistics") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(2, 2);
  StepStats s = aggregate_stats({UpdateBlock{eye, eye, zero}});
  CHECK(s.A == 2.0);
  CHECK(s.B == 0.0);
  CHECK(s.C == 0.0);
  CHECK(s.G == 2.0);

  StepStats empty = aggregate_stats({});
  CHECK(empty.A == 0.0);
  CHECK(empty.G == 0.0);

  // naive elementwise accumulation oracle over two seeded blocks
  Rng rng(21);
  std::vector<UpdateBlock> blocks;
  for (int b = 0; b < 2; ++b)
    blocks.push_back(UpdateBlock{rng.gaussian_matrix(2, 2),
                                 rng.gaussian_matrix(2, 2),
                                 rng.gaussian_matrix(2, 2)});
  double A = 0, B = 0, C = 0, G = 0;
  for (const auto& blk : blocks)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        A += blk.u(i, j) * blk.u(i, j);
        B += blk.y(i, j) * blk.u(i, j);
        C += blk.y(i, j) * blk.y(i, j);
        G += blk.g(i, j) * blk.u(i, j);
      }
  StepStats got = aggregate_stats(blocks);
  CHECK(got.A == doctest::Approx(A).epsilon(1e-14));
  CHECK(got.B == doctest::Approx(B).epsilon(1e-14));
  CHECK(got.C == doctest::Approx(C).epsilon(1e-14));
  CHECK(got.G == doctest::Approx(G).epsilon(1e-14));
}

TEST_CASE("score examples") {
  PracticalCfg cfg;
  StepStats stats;
  stats.A = 3.0;
  stats.B = 0.4;
  stats.C = 1.1;
  stats.G = 2.4;

  // only the step term: vertex at G / (2 c_step A)
  PracticalCfg step_only = cfg;
  step_only.c_center = 0.0;
  step_only.c_proxy = 0.0;
  step_only.c_step = 0.1;
  double vertex = stats.G / (0.2 * stats.A);
  auto oracle = testkit::grid_min(
      [&](double eta) { return practical_score(eta, stats, step_only, 0.0); },
      0.0, 2.0 * vertex, 200001);
  CHECK(std::abs(oracle.argmin - vertex) <= 2.0 * vertex / 200000 + 1e-12);

  CHECK(practical_score(0.0, stats, cfg, 0.7) ==
        doctest::Approx(cfg.c_center * stats.C + cfg.c_proxy * 0.49));

  StepStats flat;  // G = 0, B = 0: nonnegative quadratic, minimum at 0
  flat.A = 2.0;
  flat.C = 5.0;
  PracticalCfg no_proxy = cfg;
  no_proxy.c_proxy = 0.0;
  for (double eta : {0.1, 0.5, 1.0})
    CHECK(practical_score(0.0, flat, no_proxy, 0.0) <=
          practical_score(eta, flat, no_proxy, 0.0));
}

TEST_CASE("select_scale clamps and smooths") {
  PracticalCfg cfg;  // grid over [0.006, 0.03]
  StepStats greedy;  // huge G makes the score decreasing: cap selected
  greedy.A = 1.0;
  greedy.G = 100.0;

  PracticalCfg raw = cfg;
  raw.smoothing = 0.0;
  CHECK(select_scale(greedy, raw, cfg.eta_init, 0.0) ==
        doctest::Approx(cfg.eta_max).epsilon(1e-12));

  // smoothing toward the previous scale: 0.7 * 0.015 + 0.3 * 0.03
  CHECK(select_scale(greedy, cfg, 0.015, 0.0) ==
        doctest::Approx(0.0195).epsilon(1e-12));

  StepStats timid;  // negative G makes the score increasing: floor selected
  timid.A = 1.0;
  timid.G = -100.0;
  CHECK(select_scale(timid, raw, cfg.eta_init, 0.0) ==
        doctest::Approx(cfg.eta_min).epsilon(1e-12));
}

TEST_CASE("select_scale hits an interior vertex within a refined cell") {
  PracticalCfg cfg;
  cfg.smoothing = 0.0;
  cfg.c_center = 0.0;
  cfg.c_proxy = 0.0;
  StepStats stats;
  stats.A = 10.0;
  stats.G = 2.0 * cfg.c_step * stats.A * 0.017;  // vertex at 0.017
  double selected = select_scale(stats, cfg, cfg.eta_init, 0.0);

  auto oracle = testkit::grid_min(
      [&](double eta) { return practical_score(eta, stats, cfg, 0.0); },
      cfg.eta_min, cfg.eta_max, 10000);
  double ratio = cfg.eta_max / cfg.eta_min;
  double cell = 0.017 * (std::pow(ratio, 1.0 / (cfg.grid_points - 1)) - 1.0);
  double refined_cell = 2.0 * cell / std::pow(2.0, cfg.refine_steps);
  CHECK(std::abs(selected - oracle.argmin) <=
        std::max(refined_cell, 2.0 * (cfg.eta_max - cfg.eta_min) / 9999.0));
}

TEST_CASE("warmup-cosine schedule shape") {
  CHECK(warmup_cosine(0, 500) == 0.0);
  CHECK(warmup_cosine(25, 500) == doctest::Approx(1.0));  // warmup = 25
  CHECK(warmup_cosine(12, 500) == doctest::Approx(12.0 / 25.0));
  CHECK(warmup_cosine(499, 500) < 0.01);
  for (std::int64_t t = 26; t < 499; t += 50)
    CHECK(warmup_cosine(t + 1, 500) <= warmup_cosine(t, 500));
}

TEST_CASE("practical run on the tiny logistic model") {
  TinyModel model = make_tiny_model("tiny_logistic", 1);
  PracticalCfg cfg;
  auto res = practical_run(model, cfg, 500, 2);
  CHECK(res.grad_evals == 500);
  CHECK(res.rows.size() == 500);
  CHECK(res.rows[0].effective_scale == 0.0);  // schedule is 0 at step 0

  double first = 0.0, last = 0.0;
  for (int i = 0; i < 50; ++i) {
    first += res.rows[i].loss / 50.0;
    last += res.rows[450 + i].loss / 50.0;
  }
  CHECK(last < first);
  for (const auto& row : res.rows) {
    CHECK(row.base_scale >= cfg.eta_min);
    CHECK(row.base_scale <= cfg.eta_max);
  }
}

TEST_CASE("step 0 leaves parameters untouched") {
  TinyModel model = make_tiny_model("tiny_logistic", 3);
  PracticalCfg cfg;
  auto res = practical_run(model, cfg, 1, 4);
  CHECK((res.params_final.block(0).data - model.params0.block(0).data)
            .norm() == 0.0);
}

TEST_CASE("tiny mlp trains") {
  TinyModel model = make_tiny_model("tiny_mlp", 5);
  PracticalCfg cfg;
  auto res = practical_run(model, cfg, 200, 6);
  CHECK(res.grad_evals == 200);
  double first = 0.0, last = 0.0;
  for (int i = 0; i < 20; ++i) {
    first += res.rows[i].loss / 20.0;
    last += res.rows[180 + i].loss / 20.0;
  }
  CHECK(last < first);
}

TEST_CASE("practical invariant suite") {
  for (const auto& r : checks::practical_checks(2, 120)) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}

TEST_CASE("config validation") {
  PracticalCfg cfg;
  cfg.eta_min = 0.05;  // above eta_init
  CHECK_THROWS_AS(cfg.validate(), config_error);
  PracticalCfg bad_smooth;
  bad_smooth.smoothing = 1.0;
  CHECK_THROWS_AS(bad_smooth.validate(), config_error);
  CHECK_THROWS_AS(make_tiny_model("nope", 1), config_error);
}
