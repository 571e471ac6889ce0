#include "muonscale/runner.hpp"

#include <json.hpp>
#include <set>

#include "muonscale/da_muon.hpp"
#include "muonscale/df_muon.hpp"
#include "muonscale/df_practical.hpp"
#include "muonscale/errors.hpp"
#include "muonscale/muon_base.hpp"
#include "muonscale/problems.hpp"
#include "muonscale/sc_muon.hpp"

namespace muonscale {

namespace {

using nlohmann::json;

const std::set<std::string> kCommonKeys = {"problem", "algo", "geometry",
                                           "dim",     "seed", "T",
                                           "out"};

const std::set<std::string>& algo_keys(const std::string& algo) {
  static const std::set<std::string> fixed = {"eta", "alpha"};
  static const std::set<std::string> da = {"r0", "alpha", "eta_max"};
  static const std::set<std::string> sc = {"alpha"};
  static const std::set<std::string> df = {"alpha", "beta",  "rho", "lambda",
                                           "bigM",  "omega", "d0"};
  static const std::set<std::string> practical = {
      "eta_min",     "eta_max",      "eta_init", "smoothing",
      "grid_points", "refine_steps", "c_step",   "c_center",
      "c_proxy",     "alpha",        "ns_iters"};
  if (algo == "fixed") return fixed;
  if (algo == "da") return da;
  if (algo == "sc") return sc;
  if (algo == "df") return df;
  if (algo == "df_practical") return practical;
  throw config_error("unknown algo '" + algo +
                     "' (expected fixed, da, sc, df or df_practical)");
}

double get_number(const json& j, const std::string& key) {
  if (!j.at(key).is_number())
    throw config_error("config key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

std::int64_t get_integer(const json& j, const std::string& key) {
  if (!j.at(key).is_number_integer())
    throw config_error("config key '" + key + "' must be an integer");
  return j.at(key).get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.at(key).is_string())
    throw config_error("config key '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config must be a JSON object");

  RunConfig cfg;
  if (!j.contains("algo")) throw config_error("config requires 'algo'");
  cfg.algo = get_string(j, "algo");
  const auto& extra = algo_keys(cfg.algo);

  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!kCommonKeys.count(key) && !extra.count(key))
      throw config_error("unknown config key '" + key + "' for algo '" +
                         cfg.algo + "'");
  }

  if (!j.contains("problem")) throw config_error("config requires 'problem'");
  cfg.problem = get_string(j, "problem");
  if (!j.contains("T")) throw config_error("config requires 'T'");
  cfg.T = get_integer(j, "T");
  if (cfg.T < 1) throw config_error("T must be >= 1");

  if (j.contains("geometry")) cfg.geometry = get_string(j, "geometry");
  if (j.contains("dim")) {
    cfg.dim = static_cast<int>(get_integer(j, "dim"));
    if (cfg.algo == "df_practical")
      throw config_error("'dim' does not apply to df_practical models");
  }
  if (j.contains("seed")) {
    std::int64_t s = get_integer(j, "seed");
    if (s < 0) throw config_error("seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("out")) cfg.out = get_string(j, "out");
  if (j.contains("omega")) {
    cfg.omega = get_string(j, "omega");
    if (cfg.omega != "one" && cfg.omega != "normalized")
      throw config_error("omega must be 'one' or 'normalized'");
  }

  auto opt_num = [&](const char* key, std::optional<double>& slot) {
    if (j.contains(key)) slot = get_number(j, key);
  };
  auto opt_int = [&](const char* key, std::optional<int>& slot) {
    if (j.contains(key)) slot = static_cast<int>(get_integer(j, key));
  };
  opt_num("alpha", cfg.alpha);
  opt_num("beta", cfg.beta);
  opt_num("rho", cfg.rho);
  opt_num("lambda", cfg.lambda);
  opt_num("bigM", cfg.bigM);
  opt_num("r0", cfg.r0);
  opt_num("d0", cfg.d0);
  opt_num("eta", cfg.eta);
  opt_num("eta_max", cfg.eta_max);
  opt_num("eta_min", cfg.eta_min);
  opt_num("eta_init", cfg.eta_init);
  opt_num("smoothing", cfg.smoothing);
  opt_num("c_step", cfg.c_step);
  opt_num("c_center", cfg.c_center);
  opt_num("c_proxy", cfg.c_proxy);
  opt_int("grid_points", cfg.grid_points);
  opt_int("refine_steps", cfg.refine_steps);
  opt_int("ns_iters", cfg.ns_iters);

  if (cfg.algo == "fixed" && !cfg.eta)
    throw config_error("algo 'fixed' requires 'eta'");
  return cfg;
}

Trace run_from_config(const RunConfig& cfg) {
  if (cfg.algo == "df_practical") {
    TinyModel model = make_tiny_model(cfg.problem, cfg.seed);
    PracticalCfg pc;
    if (cfg.eta_min) pc.eta_min = *cfg.eta_min;
    if (cfg.eta_max) pc.eta_max = *cfg.eta_max;
    if (cfg.eta_init) pc.eta_init = *cfg.eta_init;
    if (cfg.smoothing) pc.smoothing = *cfg.smoothing;
    if (cfg.grid_points) pc.grid_points = *cfg.grid_points;
    if (cfg.refine_steps) pc.refine_steps = *cfg.refine_steps;
    if (cfg.c_step) pc.c_step = *cfg.c_step;
    if (cfg.c_center) pc.c_center = *cfg.c_center;
    if (cfg.c_proxy) pc.c_proxy = *cfg.c_proxy;
    if (cfg.alpha) pc.alpha = *cfg.alpha;
    if (cfg.ns_iters) pc.ns_iters = *cfg.ns_iters;
    // Batch sampling derives from the run seed; the model data has its own
    // stream from the same seed.
    return practical_run(model, pc, cfg.T, cfg.seed + 1).to_trace();
  }

  ProblemSpec p = make_problem(cfg.problem, cfg.dim, cfg.seed);
  Geometry geom = Geometry::uniform(norm_from_string(cfg.geometry),
                                    p.x0.block_count());
  double alpha = cfg.alpha.value_or(0.9);

  if (cfg.algo == "fixed")
    return fixed_muon_run(p, geom, *cfg.eta, alpha, cfg.T).to_trace();

  if (cfg.algo == "da") {
    DAOptions opts;
    opts.alpha = alpha;
    if (cfg.r0) {
      if (!(*cfg.r0 > 0.0)) throw config_error("r0 must be > 0");
      opts.r0 = *cfg.r0;
    }
    if (cfg.eta_max) opts.eta_max = *cfg.eta_max;
    return da_run(p, geom, opts, cfg.T).to_trace();
  }

  if (cfg.algo == "sc") {
    SCOptions opts;
    opts.alpha = alpha;
    return sc_run(p, geom, opts, cfg.T).to_trace();
  }

  if (cfg.algo == "df") {
    DFConfig dc;
    dc.alpha = alpha;
    dc.beta = cfg.beta ? *cfg.beta : default_df_beta(dc.alpha, cfg.T);
    if (cfg.rho) dc.rho = *cfg.rho;
    if (cfg.lambda) dc.lambda = *cfg.lambda;
    if (cfg.bigM) dc.M = *cfg.bigM;
    if (cfg.d0) dc.d0 = *cfg.d0;
    dc.omega = cfg.omega == "normalized" ? OmegaRule::normalized
                                         : OmegaRule::one;
    return df_run(p, geom, dc, cfg.T).to_trace();
  }

  throw config_error("unknown algo '" + cfg.algo + "'");
}

Trace run_from_json(const std::string& json_text) {
  return run_from_config(parse_run_config(json_text));
}

}  // namespace muonscale
