#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "muonscale/point.hpp"
#include "muonscale/problems.hpp"

namespace muonscale {
namespace testkit {

// Dense scalar grid minimizer over [lo, hi] with n uniform points. Ties go to
// the smallest argument. Used as the independent oracle for the scalar radius
// search.
struct GridMin {
  double argmin = 0.0;
  double min = 0.0;
};
GridMin grid_min(const std::function<double(double)>& fn, double lo, double hi,
                 std::int64_t n);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;
};

// Least-squares line through (log T, log value). Requires >= 3 points with
// positive values.
SlopeFit slope_fit(const std::vector<std::pair<double, double>>& points);

// Plain gradient descent at step 1/L. f is checked to be nonincreasing at
// checkpoints; an increase signals a wrong smoothness constant.
struct ReferenceResult {
  Point x_ref;
  double f_ref = 0.0;
};
ReferenceResult reference_minimize(const ProblemSpec& p, std::int64_t steps);

}  // namespace testkit
}  // namespace muonscale
