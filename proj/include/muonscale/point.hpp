#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "muonscale/errors.hpp"

namespace muonscale {

// A block-structured element of the parameter space: an ordered sequence of
// named dense blocks. Rank-1 blocks are stored as n-by-1 matrices and keep a
// flag so they round-trip as vectors. Block names are unique and shapes are
// fixed once a block is added.
class Point {
 public:
  struct Block {
    std::string name;
    Eigen::MatrixXd data;
    bool vector_shaped = false;
  };

  Point() = default;

  static Point vector(std::string name, Eigen::VectorXd v) {
    Point p;
    p.add_vector(std::move(name), std::move(v));
    return p;
  }

  static Point matrix(std::string name, Eigen::MatrixXd m) {
    Point p;
    p.add_matrix(std::move(name), std::move(m));
    return p;
  }

  void add_vector(std::string name, Eigen::VectorXd v) {
    check_new_name(name);
    blocks_.push_back(Block{std::move(name), std::move(v), true});
  }

  void add_matrix(std::string name, Eigen::MatrixXd m) {
    check_new_name(name);
    blocks_.push_back(Block{std::move(name), std::move(m), false});
  }

  std::size_t block_count() const { return blocks_.size(); }
  const Block& block(std::size_t i) const { return blocks_[i]; }
  Block& block(std::size_t i) { return blocks_[i]; }

  bool same_shape(const Point& other) const {
    if (blocks_.size() != other.blocks_.size()) return false;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (blocks_[i].data.rows() != other.blocks_[i].data.rows() ||
          blocks_[i].data.cols() != other.blocks_[i].data.cols())
        return false;
    }
    return true;
  }

  Point zeros_like() const {
    Point p = *this;
    for (auto& b : p.blocks_) b.data.setZero();
    return p;
  }

  Point& operator+=(const Point& o) {
    require_shape(o);
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      blocks_[i].data += o.blocks_[i].data;
    return *this;
  }

  Point& operator-=(const Point& o) {
    require_shape(o);
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      blocks_[i].data -= o.blocks_[i].data;
    return *this;
  }

  Point& operator*=(double s) {
    for (auto& b : blocks_) b.data *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }

  // Frobenius pairing summed over blocks.
  double dot(const Point& o) const {
    require_shape(o);
    double acc = 0.0;
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      acc += blocks_[i].data.cwiseProduct(o.blocks_[i].data).sum();
    return acc;
  }

  bool all_finite() const {
    for (const auto& b : blocks_)
      if (!b.data.allFinite()) return false;
    return true;
  }

 private:
  void check_new_name(const std::string& name) const {
    for (const auto& b : blocks_)
      if (b.name == name)
        throw config_error("duplicate block name '" + name + "'");
  }

  void require_shape(const Point& o) const {
    if (!same_shape(o)) throw config_error("point shape mismatch");
  }

  std::vector<Block> blocks_;
};

inline double inner(const Point& a, const Point& b) { return a.dot(b); }

}  // namespace muonscale
