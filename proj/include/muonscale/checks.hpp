#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "muonscale/df_muon.hpp"

namespace muonscale {

// One executable invariant. worst_margin is the most adverse slack observed
// (bound minus quantity, after the invariant's own tolerance); failures carry
// the offending step or case in detail.
struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double worst_margin = 0.0;
  std::string detail;
};

// suite in {geometry, da, sc, df, practical, all}.
std::vector<CheckResult> run_suite(const std::string& suite);

std::string format_report(const std::vector<CheckResult>& results);
int failure_count(const std::vector<CheckResult>& results);

namespace checks {

// geometry
CheckResult dual_norm_properties(int n_per_geometry, std::uint64_t seed);
CheckResult lmo_pairing(int n_per_geometry, std::uint64_t seed,
                        double rel_tol = 1e-8);
CheckResult hoelder_inequality(int n_per_geometry, std::uint64_t seed);
CheckResult orthogonalize_spectrum(int n_cases, std::uint64_t seed);

// da
std::vector<CheckResult> da_trace_checks(std::int64_t T,
                                         const std::vector<double>& alphas);
CheckResult da_stationarity_guarantee(const std::vector<std::int64_t>& T_list,
                    const std::vector<double>& alphas);

// sc
std::vector<CheckResult> sc_trace_checks(
    const std::vector<std::string>& problems, const std::vector<double>& alphas,
    std::int64_t T);
CheckResult sc_rate_guarantee(const std::vector<std::int64_t>& T_list,
                    const std::vector<double>& alphas);

// df
CheckResult df_dcert_validity(int n_seeds, std::int64_t T);
CheckResult df_q_convexity(int n_states, int grid_points);
CheckResult df_majorization(int n_states);
CheckResult df_search_vs_grid(int n_states, std::int64_t grid_n, double tol);
CheckResult df_onestep(std::int64_t T);
CheckResult df_rate_guarantee(const std::vector<std::int64_t>& T_list);

// practical
std::vector<CheckResult> practical_checks(int n_seeds, std::int64_t T);

// harness
CheckResult csv_determinism();

// Synthetic scalar-search instance used by the df checks; `index` cycles
// through euclidean, sign and spectral geometries.
struct SyntheticDFState {
  RayState state;
  Point g;
  double L = 1.0;
  DFConfig cfg;
  double d_next = 0.0;
  double f_x = 1.0;
  Geometry geom;
};
SyntheticDFState make_synthetic_df_state(int index, std::uint64_t seed);

}  // namespace checks
}  // namespace muonscale
