#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "muonscale/checks.hpp"
#include "muonscale/errors.hpp"
#include "muonscale/geometry.hpp"
#include "muonscale/rng.hpp"

using namespace muonscale;

namespace {

Eigen::VectorXd vec3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("dual norms per tag") {
  Geometry euclid = Geometry::uniform(Norm::euclidean, 1);
  Geometry sign = Geometry::uniform(Norm::linf_sign, 1);
  Geometry spec = Geometry::uniform(Norm::spectral, 1);

  Eigen::VectorXd m(2);
  m << 3.0, 4.0;
  CHECK(dual_norm(Point::vector("x", m), euclid) == doctest::Approx(5.0));

  CHECK(dual_norm(Point::vector("x", vec3(2, -1, 0)), sign) ==
        doctest::Approx(3.0));

  Eigen::MatrixXd d = Eigen::Vector2d(3.0, -2.0).asDiagonal();
  CHECK(dual_norm(Point::matrix("w", d), spec) == doctest::Approx(5.0));
}

TEST_CASE("dual norm rejects shape mismatch") {
  Geometry two = Geometry::uniform(Norm::euclidean, 2);
  CHECK_THROWS_AS(dual_norm(Point::vector("x", vec3(1, 2, 3)), two),
                  config_error);
}

TEST_CASE("lmo directions per tag") {
  Geometry euclid = Geometry::uniform(Norm::euclidean, 1);
  Eigen::VectorXd m(2);
  m << 3.0, 4.0;
  Point u = lmo_ascent(Point::vector("x", m), euclid);
  CHECK(u.block(0).data(0) == doctest::Approx(0.6));
  CHECK(u.block(0).data(1) == doctest::Approx(0.8));

  Geometry sign = Geometry::uniform(Norm::linf_sign, 1);
  Point us = lmo_ascent(Point::vector("x", vec3(2, -1, 0)), sign);
  CHECK(us.block(0).data(0) == 1.0);
  CHECK(us.block(0).data(1) == -1.0);
  CHECK(us.block(0).data(2) == 0.0);  // zero entries stay zero

  Geometry spec = Geometry::uniform(Norm::spectral, 1);
  Eigen::MatrixXd d = Eigen::Vector2d(3.0, -2.0).asDiagonal();
  Point um = lmo_ascent(Point::matrix("w", d), spec);
  CHECK(um.block(0).data(0, 0) == doctest::Approx(1.0));
  CHECK(um.block(0).data(1, 1) == doctest::Approx(-1.0));
  CHECK(std::abs(um.block(0).data(0, 1)) < 1e-12);
}

TEST_CASE("lmo of zero point is zero") {
  for (Norm tag : {Norm::euclidean, Norm::linf_sign, Norm::spectral}) {
    Geometry geom = Geometry::uniform(tag, 1);
    Point z = Point::matrix("w", Eigen::MatrixXd::Zero(3, 2));
    Point u = lmo_ascent(z, geom);
    CHECK(u.block(0).data.norm() == 0.0);
    CHECK(dual_norm(z, geom) == 0.0);
  }
}

TEST_CASE("orthogonalize exact mode") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  CHECK((orthogonalize(eye, OrthoMode::exact) - eye).norm() < 1e-14);

  Eigen::MatrixXd d = Eigen::Vector2d(3.0, -2.0).asDiagonal();
  Eigen::MatrixXd expected = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  CHECK((orthogonalize(d, OrthoMode::exact) - expected).norm() < 1e-12);

  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 2);
  CHECK(orthogonalize(zero, OrthoMode::exact).norm() == 0.0);
}

TEST_CASE("orthogonalize rank deficient input keeps spectrum in {0,1}") {
  Rng rng(42);
  Eigen::MatrixXd a = rng.gaussian_vector(4) * rng.gaussian_vector(3).transpose();
  Eigen::MatrixXd q = orthogonalize(a, OrthoMode::exact);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(q);
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    double s = svd.singularValues()(i);
    CHECK(std::min(std::abs(s), std::abs(s - 1.0)) < 1e-10);
  }
}

TEST_CASE("newton-schulz approximates the polar factor") {
  Rng rng(32);
  Eigen::MatrixXd g = rng.gaussian_matrix(3, 2);
  Eigen::MatrixXd m = orthogonalize(g, OrthoMode::newton_schulz, 5);
  // exact-SVD oracle for the nuclear norm
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  double nuclear = svd.singularValues().sum();
  double pairing = g.cwiseProduct(m).sum();
  CHECK(std::abs(pairing - nuclear) / nuclear <= 5e-2);

  CHECK_THROWS_AS(
      orthogonalize(Eigen::MatrixXd::Zero(2, 2), OrthoMode::newton_schulz),
      config_error);
}

TEST_CASE("multi-block product geometry") {
  Point p;
  p.add_vector("a", vec3(3, 0, 0));
  p.add_matrix("b", Eigen::Vector2d(2.0, -1.0).asDiagonal());
  Geometry geom({Norm::euclidean, Norm::spectral});
  CHECK(primal_norm(p, geom) == doctest::Approx(3.0));  // max over blocks
  CHECK(dual_norm(p, geom) == doctest::Approx(6.0));    // sum over blocks
  Point u = lmo_ascent(p, geom);
  CHECK(p.dot(u) == doctest::Approx(dual_norm(p, geom)));
}

TEST_CASE("geometry invariant suite") {
  CHECK(checks::dual_norm_properties(200, 1).pass);
  CHECK(checks::lmo_pairing(200, 2).pass);
  CHECK(checks::hoelder_inequality(200, 3).pass);
  CHECK(checks::orthogonalize_spectrum(50, 4).pass);
}
