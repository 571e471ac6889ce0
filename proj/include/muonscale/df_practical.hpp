#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "muonscale/point.hpp"
#include "muonscale/trace.hpp"

namespace muonscale {

// Practical stochastic variant of the distance-free scale rule: per step it
// orthogonalizes the momentum of every matrix block, pools Frobenius
// statistics across blocks, minimizes a three-coefficient scalar score on a
// capped grid with local refinement, smooths the selected scale, and applies
// it under a warmup-cosine schedule. No extra forward or backward passes.

struct PracticalCfg {
  double eta_min = 0.006;
  double eta_max = 0.03;
  double eta_init = 0.015;
  double smoothing = 0.70;
  int grid_points = 21;
  int refine_steps = 6;
  double c_step = 0.10;
  double c_center = 0.02;
  double c_proxy = 0.10;
  double alpha = 0.9;  // momentum EMA for the Muon direction
  int ns_iters = 5;

  void validate() const;
};

struct StepStats {
  double A = 0.0;  // sum ||u||_F^2
  double B = 0.0;  // sum <y, u>
  double C = 0.0;  // sum ||y||_F^2
  double G = 0.0;  // sum <g, u>
};

struct UpdateBlock {
  Eigen::MatrixXd u;
  Eigen::MatrixXd g;
  Eigen::MatrixXd y;
};

StepStats aggregate_stats(const std::vector<UpdateBlock>& blocks);

// score(eta) = -eta G + c_step eta^2 A + c_center ||y - eta u||_F^2 pooled
// (= C - 2 eta B + eta^2 A) + c_proxy (eta - d_proxy)^2.
double practical_score(double eta, const StepStats& stats,
                       const PracticalCfg& cfg, double d_proxy);

// Grid + shrinking three-point refinement over [eta_min, eta_max], then an
// exponential average toward the previous scale.
double select_scale(const StepStats& stats, const PracticalCfg& cfg,
                    double prev_scale, double d_proxy);

// Linear warmup over the first 5% of steps, cosine decay to zero after.
double warmup_cosine(std::int64_t t, std::int64_t T);

// All-matrix stochastic objective: loss_grad evaluates one minibatch and
// counts gradient evaluations.
struct TinyModel {
  std::string name;
  Point params0;
  int n_samples = 0;
  int batch_size = 0;
  std::function<double(const Point& params, const std::vector<int>& batch,
                       Point* grad_out)>
      loss_grad;
  std::shared_ptr<std::int64_t> grad_evals;
};

// tiny_logistic: softmax regression, one 16x3 weight block.
// tiny_mlp: tanh MLP with 16x12 and 12x3 weight blocks.
TinyModel make_tiny_model(const std::string& name, std::uint64_t seed);

struct PracticalRow {
  std::int64_t t;
  double loss;
  double grad_fro;
  double base_scale;
  double effective_scale;
};

struct PracticalResult {
  std::vector<PracticalRow> rows;
  Point params_final;
  std::int64_t grad_evals = 0;
  double d_proxy_final = 0.0;

  Trace to_trace() const;
};

PracticalResult practical_run(const TinyModel& model, const PracticalCfg& cfg,
                              std::int64_t T, std::uint64_t seed);

}  // namespace muonscale
