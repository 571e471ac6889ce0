#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "muonscale/trace.hpp"

namespace muonscale {

// Parsed harness run configuration. The JSON document is a single flat
// object; unknown keys and keys that do not apply to the chosen algorithm are
// rejected.
struct RunConfig {
  std::string problem;
  std::string algo;
  std::string geometry = "euclidean";
  std::string omega = "one";
  int dim = 10;
  std::uint64_t seed = 0;
  std::int64_t T = 0;

  std::optional<double> alpha, beta, rho, lambda, bigM;
  std::optional<double> r0, d0, eta, eta_max;
  std::optional<double> eta_min, eta_init, smoothing, c_step, c_center, c_proxy;
  std::optional<int> grid_points, refine_steps, ns_iters;
  std::string out;  // consumed by callers, carried for convenience
};

RunConfig parse_run_config(const std::string& json_text);

Trace run_from_config(const RunConfig& cfg);
Trace run_from_json(const std::string& json_text);

}  // namespace muonscale
