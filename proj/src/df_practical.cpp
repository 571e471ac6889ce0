#include "muonscale/df_practical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "muonscale/errors.hpp"
#include "muonscale/geometry.hpp"
#include "muonscale/rng.hpp"

namespace muonscale {

void PracticalCfg::validate() const {
  if (!(eta_min > 0.0 && eta_min <= eta_init && eta_init <= eta_max))
    throw config_error("practical cfg: need 0 < eta_min <= eta_init <= eta_max");
  if (!(smoothing >= 0.0 && smoothing < 1.0))
    throw config_error("practical cfg: smoothing must be in [0, 1)");
  if (grid_points < 2) throw config_error("practical cfg: grid_points >= 2");
  if (refine_steps < 0) throw config_error("practical cfg: refine_steps >= 0");
  if (c_step < 0.0 || c_center < 0.0 || c_proxy < 0.0)
    throw config_error("practical cfg: coefficients must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw config_error("practical cfg: alpha must be in (0, 1]");
  if (ns_iters < 1) throw config_error("practical cfg: ns_iters >= 1");
}

StepStats aggregate_stats(const std::vector<UpdateBlock>& blocks) {
  StepStats s;
  for (const auto& blk : blocks) {
    if (blk.u.rows() != blk.g.rows() || blk.u.cols() != blk.g.cols() ||
        blk.u.rows() != blk.y.rows() || blk.u.cols() != blk.y.cols())
      throw config_error("aggregate_stats: block shape mismatch");
    s.A += blk.u.squaredNorm();
    s.B += blk.y.cwiseProduct(blk.u).sum();
    s.C += blk.y.squaredNorm();
    s.G += blk.g.cwiseProduct(blk.u).sum();
  }
  return s;
}

double practical_score(double eta, const StepStats& stats,
                       const PracticalCfg& cfg, double d_proxy) {
  if (!(eta >= 0.0)) throw config_error("practical_score: eta must be >= 0");
  double center = stats.C - 2.0 * eta * stats.B + eta * eta * stats.A;
  double proxy = (eta - d_proxy) * (eta - d_proxy);
  return -eta * stats.G + cfg.c_step * eta * eta * stats.A +
         cfg.c_center * center + cfg.c_proxy * proxy;
}

double select_scale(const StepStats& stats, const PracticalCfg& cfg,
                    double prev_scale, double d_proxy) {
  auto score = [&](double eta) {
    return practical_score(eta, stats, cfg, d_proxy);
  };
  double best_eta = cfg.eta_min;
  double best_val = score(best_eta);
  double ratio = cfg.eta_max / cfg.eta_min;
  int n = cfg.grid_points;
  for (int i = 0; i < n; ++i) {
    double eta = cfg.eta_min *
                 std::pow(ratio, static_cast<double>(i) / (n - 1));
    double v = score(eta);
    if (v < best_val) {
      best_val = v;
      best_eta = eta;
    }
  }

  // Shrinking three-point refinement around the best grid candidate.
  double cell = best_eta * (std::pow(ratio, 1.0 / (n - 1)) - 1.0);
  double lo = std::max(cfg.eta_min, best_eta - cell);
  double hi = std::min(cfg.eta_max, best_eta + cell);
  for (int r = 0; r < cfg.refine_steps; ++r) {
    for (double eta : {lo, 0.5 * (lo + hi), hi}) {
      double v = score(eta);
      if (v < best_val) {
        best_val = v;
        best_eta = eta;
      }
    }
    double half = 0.25 * (hi - lo);
    lo = std::max(cfg.eta_min, best_eta - half);
    hi = std::min(cfg.eta_max, best_eta + half);
  }

  double candidate = std::clamp(best_eta, cfg.eta_min, cfg.eta_max);
  // final clamp: the convex combination can spill a ulp past the cap
  return std::clamp(cfg.smoothing * prev_scale +
                        (1.0 - cfg.smoothing) * candidate,
                    cfg.eta_min, cfg.eta_max);
}

double warmup_cosine(std::int64_t t, std::int64_t T) {
  std::int64_t warmup = (T + 19) / 20;  // ceil(0.05 T)
  if (t < warmup) return static_cast<double>(t) / static_cast<double>(warmup);
  double progress = static_cast<double>(t - warmup) /
                    static_cast<double>(std::max<std::int64_t>(1, T - warmup));
  return 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

namespace {

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd p = z;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double m = p.row(i).maxCoeff();
    p.row(i) = (p.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

double softmax_ce(const Eigen::MatrixXd& z, const std::vector<int>& labels,
                  const std::vector<int>& batch) {
  double loss = 0.0;
  for (std::size_t r = 0; r < batch.size(); ++r) {
    double m = z.row(r).maxCoeff();
    double lse = std::log((z.row(r).array() - m).exp().sum()) + m;
    loss += lse - z(r, labels[batch[r]]);
  }
  return loss / static_cast<double>(batch.size());
}

struct Blobs {
  Eigen::MatrixXd X;        // n x d features
  std::vector<int> labels;  // class per sample
};

Blobs make_blobs(int n, int d, int classes, Rng& rng) {
  Blobs data;
  data.X.resize(n, d);
  data.labels.resize(n);
  Eigen::MatrixXd centers = 2.0 * rng.gaussian_matrix(classes, d);
  for (int i = 0; i < n; ++i) {
    int c = static_cast<int>(rng.uniform_int(0, classes - 1));
    data.labels[i] = c;
    data.X.row(i) =
        centers.row(c) + rng.gaussian_vector(d).transpose();
  }
  return data;
}

TinyModel make_tiny_logistic(std::uint64_t seed) {
  Rng rng(seed);
  const int d = 16, classes = 3, n = 256;
  auto data = std::make_shared<Blobs>(make_blobs(n, d, classes, rng));

  TinyModel model;
  model.name = "tiny_logistic";
  model.n_samples = n;
  model.batch_size = 32;
  model.params0 = Point::matrix("W", Eigen::MatrixXd::Zero(d, classes));
  model.grad_evals = std::make_shared<std::int64_t>(0);
  auto counter = model.grad_evals;

  model.loss_grad = [data, counter](const Point& params,
                                    const std::vector<int>& batch,
                                    Point* grad_out) {
    ++*counter;
    const Eigen::MatrixXd& w = params.block(0).data;
    const auto bsz = static_cast<Eigen::Index>(batch.size());
    Eigen::MatrixXd xb(bsz, w.rows());
    for (Eigen::Index r = 0; r < bsz; ++r) xb.row(r) = data->X.row(batch[r]);
    Eigen::MatrixXd z = xb * w;
    double loss = softmax_ce(z, data->labels, batch);
    if (grad_out) {
      Eigen::MatrixXd p = softmax_rows(z);
      for (Eigen::Index r = 0; r < bsz; ++r)
        p(r, data->labels[batch[r]]) -= 1.0;
      Eigen::MatrixXd gw = xb.transpose() * p / static_cast<double>(bsz);
      *grad_out = Point::matrix("W", gw);
    }
    return loss;
  };
  return model;
}

TinyModel make_tiny_mlp(std::uint64_t seed) {
  Rng rng(seed);
  const int d = 16, hidden = 12, classes = 3, n = 256;
  auto data = std::make_shared<Blobs>(make_blobs(n, d, classes, rng));

  TinyModel model;
  model.name = "tiny_mlp";
  model.n_samples = n;
  model.batch_size = 32;
  model.params0 = Point();
  model.params0.add_matrix(
      "W1", rng.gaussian_matrix(d, hidden) / std::sqrt(static_cast<double>(d)));
  model.params0.add_matrix(
      "W2",
      rng.gaussian_matrix(hidden, classes) / std::sqrt(static_cast<double>(hidden)));
  model.grad_evals = std::make_shared<std::int64_t>(0);
  auto counter = model.grad_evals;

  model.loss_grad = [data, counter](const Point& params,
                                    const std::vector<int>& batch,
                                    Point* grad_out) {
    ++*counter;
    const Eigen::MatrixXd& w1 = params.block(0).data;
    const Eigen::MatrixXd& w2 = params.block(1).data;
    const auto bsz = static_cast<Eigen::Index>(batch.size());
    Eigen::MatrixXd xb(bsz, w1.rows());
    for (Eigen::Index r = 0; r < bsz; ++r) xb.row(r) = data->X.row(batch[r]);
    Eigen::MatrixXd h = (xb * w1).array().tanh();
    Eigen::MatrixXd z = h * w2;
    double loss = softmax_ce(z, data->labels, batch);
    if (grad_out) {
      Eigen::MatrixXd p = softmax_rows(z);
      for (Eigen::Index r = 0; r < bsz; ++r)
        p(r, data->labels[batch[r]]) -= 1.0;
      p /= static_cast<double>(bsz);
      Eigen::MatrixXd gw2 = h.transpose() * p;
      Eigen::MatrixXd dh =
          (p * w2.transpose()).cwiseProduct((1.0 - h.array().square()).matrix());
      Eigen::MatrixXd gw1 = xb.transpose() * dh;
      Point g;
      g.add_matrix("W1", gw1);
      g.add_matrix("W2", gw2);
      *grad_out = std::move(g);
    }
    return loss;
  };
  return model;
}

}  // namespace

TinyModel make_tiny_model(const std::string& name, std::uint64_t seed) {
  if (name == "tiny_logistic") return make_tiny_logistic(seed);
  if (name == "tiny_mlp") return make_tiny_mlp(seed);
  throw config_error("unknown tiny model '" + name + "'");
}

Trace PracticalResult::to_trace() const {
  Trace t({"k", "f", "gap", "grad_dual_norm", "eta", "effective_scale"});
  for (const auto& r : rows)
    t.append_row({static_cast<double>(r.t), r.loss, std::nullopt, r.grad_fro,
                  r.base_scale, r.effective_scale});
  t.set_stat("f_final", rows.empty() ? 0.0 : rows.back().loss);
  t.set_stat("grad_evals", static_cast<double>(grad_evals));
  t.set_stat("d_proxy_final", d_proxy_final);
  return t;
}

PracticalResult practical_run(const TinyModel& model, const PracticalCfg& cfg,
                              std::int64_t T, std::uint64_t seed) {
  if (T < 1) throw config_error("practical_run: T must be >= 1");
  cfg.validate();

  Rng rng(seed);
  Point params = model.params0;
  std::size_t n_blocks = params.block_count();

  std::vector<Eigen::MatrixXd> momentum(n_blocks);
  bool momentum_init = false;

  double prev_scale = cfg.eta_init;
  double s_acc = 0.0, b_acc = 0.0, d_proxy = 0.0;
  std::int64_t evals_before = *model.grad_evals;

  PracticalResult res;
  for (std::int64_t t = 0; t < T; ++t) {
    std::vector<int> batch(model.batch_size);
    for (int& idx : batch)
      idx = static_cast<int>(rng.uniform_int(0, model.n_samples - 1));

    Point grad;
    double loss = model.loss_grad(params, batch, &grad);
    if (!std::isfinite(loss)) throw divergence_error("non-finite loss", t);

    double grad_fro = 0.0;
    std::vector<UpdateBlock> blocks(n_blocks);
    for (std::size_t j = 0; j < n_blocks; ++j) {
      const Eigen::MatrixXd& gj = grad.block(j).data;
      grad_fro += gj.squaredNorm();
      if (!momentum_init)
        momentum[j] = gj;
      else
        momentum[j] = (1.0 - cfg.alpha) * momentum[j] + cfg.alpha * gj;
      Eigen::MatrixXd uj =
          momentum[j].norm() > 0.0
              ? orthogonalize(momentum[j], OrthoMode::newton_schulz,
                              cfg.ns_iters)
              : Eigen::MatrixXd::Zero(momentum[j].rows(), momentum[j].cols());
      blocks[j] = UpdateBlock{std::move(uj), gj,
                              params.block(j).data - model.params0.block(j).data};
    }
    momentum_init = true;
    grad_fro = std::sqrt(grad_fro);

    StepStats stats = aggregate_stats(blocks);
    // Scalar analogue of the distance certificate, pooled over blocks.
    s_acc += stats.G;
    for (std::size_t j = 0; j < n_blocks; ++j)
      b_acc -= blocks[j].g.cwiseProduct(blocks[j].y).sum();
    d_proxy = std::max(
        d_proxy, std::max(b_acc, 0.0) / std::max(std::abs(s_acc), 1e-12));

    double scale = select_scale(stats, cfg, prev_scale, d_proxy);
    double effective = warmup_cosine(t, T) * scale;

    for (std::size_t j = 0; j < n_blocks; ++j)
      params.block(j).data -= effective * blocks[j].u;

    res.rows.push_back({t, loss, grad_fro, scale, effective});
    prev_scale = scale;
  }

  res.params_final = params;
  res.grad_evals = *model.grad_evals - evals_before;
  res.d_proxy_final = d_proxy;
  return res;
}

}  // namespace muonscale
