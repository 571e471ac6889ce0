#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "muonscale/point.hpp"

namespace muonscale {

// Per-block norm tags. The primal/dual pairs are l2/l2, linf/l1 and
// spectral/nuclear; the linear minimization oracle of each pair normalizes,
// takes signs, or orthogonalizes respectively.
enum class Norm { euclidean, linf_sign, spectral };

Norm norm_from_string(const std::string& s);
std::string to_string(Norm n);

// A product geometry over the blocks of a Point. The product primal norm is
// the max over blocks, so the unit ball is a product of block balls and the
// LMO factorizes blockwise; the dual norm is then the sum of block duals.
class Geometry {
 public:
  Geometry() = default;
  explicit Geometry(std::vector<Norm> tags) : tags_(std::move(tags)) {}

  static Geometry uniform(Norm tag, std::size_t n_blocks) {
    return Geometry(std::vector<Norm>(n_blocks, tag));
  }

  std::size_t block_count() const { return tags_.size(); }
  Norm tag(std::size_t i) const { return tags_[i]; }

  bool all_inner_product() const {
    for (Norm t : tags_)
      if (t != Norm::euclidean) return false;
    return true;
  }

  void require_match(const Point& p) const;

 private:
  std::vector<Norm> tags_;
};

// Block-level norms and LMO.
double block_primal_norm(const Eigen::MatrixXd& a, Norm tag);
double block_dual_norm(const Eigen::MatrixXd& a, Norm tag);
Eigen::MatrixXd block_lmo(const Eigen::MatrixXd& a, Norm tag);

// Product-level operations.
double primal_norm(const Point& p, const Geometry& geom);
double dual_norm(const Point& p, const Geometry& geom);

// u with ||u|| <= 1 maximizing <m, u>; satisfies <m, u> == dual_norm(m).
// m == 0 maps to the zero point, and zero entries of sign blocks map to 0.
Point lmo_ascent(const Point& m, const Geometry& geom);

enum class OrthoMode { exact, newton_schulz };

// Polar-factor style orthogonalization of a single matrix. exact mode takes
// U V^T from a reduced SVD, dropping singular values below 1e-12 * sigma_max;
// newton_schulz runs the quintic odd-polynomial iteration on A scaled by its
// Frobenius norm and requires A != 0.
Eigen::MatrixXd orthogonalize(const Eigen::MatrixXd& a, OrthoMode mode,
                              int iters = 5);

}  // namespace muonscale
