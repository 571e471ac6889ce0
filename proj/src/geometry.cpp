#include "muonscale/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "muonscale/errors.hpp"

namespace muonscale {

Norm norm_from_string(const std::string& s) {
  if (s == "euclidean") return Norm::euclidean;
  if (s == "linf_sign") return Norm::linf_sign;
  if (s == "spectral") return Norm::spectral;
  throw config_error("unknown geometry '" + s +
                     "' (expected euclidean, linf_sign or spectral)");
}

std::string to_string(Norm n) {
  switch (n) {
    case Norm::euclidean: return "euclidean";
    case Norm::linf_sign: return "linf_sign";
    case Norm::spectral: return "spectral";
  }
  return "?";
}

void Geometry::require_match(const Point& p) const {
  if (p.block_count() != tags_.size())
    throw config_error("geometry has " + std::to_string(tags_.size()) +
                       " block tags but point has " +
                       std::to_string(p.block_count()) + " blocks");
}

namespace {

Eigen::JacobiSVD<Eigen::MatrixXd> thin_svd(const Eigen::MatrixXd& a) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

}  // namespace

double block_primal_norm(const Eigen::MatrixXd& a, Norm tag) {
  switch (tag) {
    case Norm::euclidean:
      return a.norm();
    case Norm::linf_sign:
      return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
    case Norm::spectral: {
      if (a.size() == 0) return 0.0;
      auto svd = thin_svd(a);
      return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    }
  }
  return 0.0;
}

double block_dual_norm(const Eigen::MatrixXd& a, Norm tag) {
  switch (tag) {
    case Norm::euclidean:
      return a.norm();
    case Norm::linf_sign:
      return a.cwiseAbs().sum();
    case Norm::spectral: {
      if (a.size() == 0) return 0.0;
      return thin_svd(a).singularValues().sum();
    }
  }
  return 0.0;
}

Eigen::MatrixXd block_lmo(const Eigen::MatrixXd& a, Norm tag) {
  switch (tag) {
    case Norm::euclidean: {
      double n = a.norm();
      if (n == 0.0) return Eigen::MatrixXd::Zero(a.rows(), a.cols());
      return a / n;
    }
    case Norm::linf_sign: {
      // Zero entries map to 0: the minimal-norm maximizer.
      return a.unaryExpr(
          [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
    }
    case Norm::spectral:
      return orthogonalize(a, OrthoMode::exact);
  }
  return a;
}

double primal_norm(const Point& p, const Geometry& geom) {
  geom.require_match(p);
  double m = 0.0;
  for (std::size_t i = 0; i < p.block_count(); ++i)
    m = std::max(m, block_primal_norm(p.block(i).data, geom.tag(i)));
  return m;
}

double dual_norm(const Point& p, const Geometry& geom) {
  geom.require_match(p);
  double s = 0.0;
  for (std::size_t i = 0; i < p.block_count(); ++i)
    s += block_dual_norm(p.block(i).data, geom.tag(i));
  return s;
}

Point lmo_ascent(const Point& m, const Geometry& geom) {
  geom.require_match(m);
  Point u = m;
  for (std::size_t i = 0; i < u.block_count(); ++i)
    u.block(i).data = block_lmo(m.block(i).data, geom.tag(i));
  return u;
}

Eigen::MatrixXd orthogonalize(const Eigen::MatrixXd& a, OrthoMode mode,
                              int iters) {
  if (mode == OrthoMode::exact) {
    if (a.size() == 0 || a.isZero(0.0))
      return Eigen::MatrixXd::Zero(a.rows(), a.cols());
    auto svd = thin_svd(a);
    const auto& sv = svd.singularValues();
    double cutoff = 1e-12 * sv(0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    return svd.matrixU().leftCols(rank) *
           svd.matrixV().leftCols(rank).transpose();
  }

  // Quintic Newton-Schulz iteration with the widely used coefficients.
  constexpr double ca = 3.4445, cb = -4.7750, cc = 2.0315;
  double fro = a.norm();
  if (fro == 0.0)
    throw config_error("newton_schulz orthogonalize on zero matrix");
  Eigen::MatrixXd x = a / fro;
  bool transposed = x.rows() > x.cols();
  if (transposed) x = x.transpose().eval();
  for (int i = 0; i < iters; ++i) {
    Eigen::MatrixXd g = x * x.transpose();
    Eigen::MatrixXd b = cb * g + cc * g * g;
    x = ca * x + b * x;
  }
  if (transposed) x = x.transpose().eval();
  return x;
}

}  // namespace muonscale
