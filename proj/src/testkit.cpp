#include "muonscale/testkit.hpp"

#include <cmath>

#include "muonscale/errors.hpp"

namespace muonscale {
namespace testkit {

GridMin grid_min(const std::function<double(double)>& fn, double lo, double hi,
                 std::int64_t n) {
  if (!(lo < hi) || n < 2) throw oracle_error("grid_min: need lo < hi, n >= 2");
  GridMin best;
  best.argmin = lo;
  best.min = fn(lo);
  if (!std::isfinite(best.min))
    throw oracle_error("grid_min: non-finite value at lo");
  for (std::int64_t i = 1; i < n; ++i) {
    double t = lo + (hi - lo) * static_cast<double>(i) /
                        static_cast<double>(n - 1);
    double v = fn(t);
    if (!std::isfinite(v))
      throw oracle_error("grid_min: non-finite value at t=" + std::to_string(t));
    if (v < best.min) {
      best.min = v;
      best.argmin = t;
    }
  }
  return best;
}

SlopeFit slope_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw oracle_error("slope_fit: need >= 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [t, v] : points) {
    if (!(t > 0.0) || !(v > 0.0))
      throw oracle_error("slope_fit: nonpositive point");
    double x = std::log(t), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double n = static_cast<double>(points.size());
  double vx = sxx - sx * sx / n;
  double vy = syy - sy * sy / n;
  double cov = sxy - sx * sy / n;
  SlopeFit fit;
  fit.n = points.size();
  fit.slope = cov / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_squared = vy <= 0.0 ? 1.0 : (cov * cov) / (vx * vy);
  return fit;
}

ReferenceResult reference_minimize(const ProblemSpec& p, std::int64_t steps) {
  if (!p.convex) throw oracle_error("reference_minimize: problem not convex");
  Point x = p.x0;
  double f_prev = p.f(x);
  double step = 1.0 / p.L;
  const std::int64_t checkpoint = 1000;
  for (std::int64_t k = 0; k < steps; ++k) {
    x -= step * p.grad(x);
    if ((k + 1) % checkpoint == 0 || k + 1 == steps) {
      double f_now = p.f(x);
      if (f_now > f_prev + 1e-12 * std::max(1.0, std::abs(f_prev)))
        throw oracle_error("reference_minimize: f increased (wrong L?)");
      f_prev = f_now;
    }
  }
  return ReferenceResult{x, p.f(x)};
}

}  // namespace testkit
}  // namespace muonscale
