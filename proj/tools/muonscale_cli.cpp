// Command-line front end for the muonscale shared library. All numerical
// work happens behind the C API in muonscale.h; this binary only parses
// arguments, assembles the flat JSON run configuration, and formats output.

#include <muonscale.h>

#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

int fail(ms_status status) {
  std::cerr << "error (" << ms_status_name(status) << "): " << ms_last_error()
            << "\n";
  return static_cast<int>(status);
}

struct RunFlags {
  std::optional<std::string> problem, geometry, omega, config_path, out;
  std::optional<std::int64_t> T, seed;
  std::optional<int> dim, grid_points, refine_steps, ns_iters;
  std::optional<double> alpha, beta, rho, lambda, bigM, r0, d0, eta, eta_max,
      eta_min, eta_init, smoothing, c_step, c_center, c_proxy;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--problem", f.problem, "problem or tiny model name");
  cmd->add_option("--dim", f.dim, "problem dimension");
  cmd->add_option("--seed", f.seed, "run seed");
  cmd->add_option("--geometry", f.geometry,
                  "euclidean, linf_sign or spectral");
  cmd->add_option("--T", f.T, "iteration count");
  cmd->add_option("--alpha", f.alpha, "momentum coefficient");
  cmd->add_option("--beta", f.beta, "recentering coefficient (df)");
  cmd->add_option("--rho", f.rho, "df movement regularizer");
  cmd->add_option("--lambda", f.lambda, "df proxy regularizer");
  cmd->add_option("--bigM", f.bigM, "df anchor regularizer");
  cmd->add_option("--r0", f.r0, "initial radius (da)");
  cmd->add_option("--d0", f.d0, "initial distance certificate (df)");
  cmd->add_option("--eta", f.eta, "fixed radius (fixed)");
  cmd->add_option("--eta-max", f.eta_max, "radius cap (da clamp, practical)");
  cmd->add_option("--eta-min", f.eta_min, "scale floor (practical)");
  cmd->add_option("--eta-init", f.eta_init, "initial scale (practical)");
  cmd->add_option("--smoothing", f.smoothing, "scale smoothing (practical)");
  cmd->add_option("--grid-points", f.grid_points, "scale grid (practical)");
  cmd->add_option("--refine-steps", f.refine_steps,
                  "local refinement steps (practical)");
  cmd->add_option("--c-step", f.c_step, "step coefficient (practical)");
  cmd->add_option("--c-center", f.c_center, "center coefficient (practical)");
  cmd->add_option("--c-proxy", f.c_proxy, "proxy coefficient (practical)");
  cmd->add_option("--ns-iters", f.ns_iters,
                  "orthogonalization iterations (practical)");
  cmd->add_option("--omega", f.omega, "certificate weights: one | normalized");
  cmd->add_option("--config", f.config_path, "flat JSON config file");
  cmd->add_option("--out", f.out, "output CSV path");
}

// Config file first, then CLI flags override.
int build_config(const RunFlags& f, const std::string& algo, json& out) {
  out = json::object();
  if (f.config_path) {
    std::ifstream in(*f.config_path);
    if (!in) {
      std::cerr << "error: cannot read config file '" << *f.config_path
                << "'\n";
      return 2;
    }
    try {
      in >> out;
    } catch (const json::exception& e) {
      std::cerr << "error: config file is not valid JSON: " << e.what()
                << "\n";
      return 2;
    }
    if (!out.is_object()) {
      std::cerr << "error: config file must hold a JSON object\n";
      return 2;
    }
  }
  if (!algo.empty()) out["algo"] = algo;
  if (f.problem) out["problem"] = *f.problem;
  if (f.geometry) out["geometry"] = *f.geometry;
  if (f.omega) out["omega"] = *f.omega;
  if (f.T) out["T"] = *f.T;
  if (f.seed) out["seed"] = *f.seed;
  if (f.dim) out["dim"] = *f.dim;
  if (f.grid_points) out["grid_points"] = *f.grid_points;
  if (f.refine_steps) out["refine_steps"] = *f.refine_steps;
  if (f.ns_iters) out["ns_iters"] = *f.ns_iters;
  if (f.alpha) out["alpha"] = *f.alpha;
  if (f.beta) out["beta"] = *f.beta;
  if (f.rho) out["rho"] = *f.rho;
  if (f.lambda) out["lambda"] = *f.lambda;
  if (f.bigM) out["bigM"] = *f.bigM;
  if (f.r0) out["r0"] = *f.r0;
  if (f.d0) out["d0"] = *f.d0;
  if (f.eta) out["eta"] = *f.eta;
  if (f.eta_max) out["eta_max"] = *f.eta_max;
  if (f.eta_min) out["eta_min"] = *f.eta_min;
  if (f.eta_init) out["eta_init"] = *f.eta_init;
  if (f.smoothing) out["smoothing"] = *f.smoothing;
  if (f.c_step) out["c_step"] = *f.c_step;
  if (f.c_center) out["c_center"] = *f.c_center;
  if (f.c_proxy) out["c_proxy"] = *f.c_proxy;
  return 0;
}

int cmd_run(const RunFlags& flags, const std::string& algo) {
  json cfg;
  if (int rc = build_config(flags, algo, cfg)) return rc;
  std::string out_path;
  if (flags.out)
    out_path = *flags.out;
  else if (cfg.contains("out") && cfg["out"].is_string())
    out_path = cfg["out"].get<std::string>();

  if (!out_path.empty()) {
    cfg["out"] = out_path;
    ms_status st = ms_run_to_csv(cfg.dump().c_str(), out_path.c_str());
    if (st != MS_OK) return fail(st);
    return 0;
  }
  ms_trace* trace = nullptr;
  ms_status st = ms_run(cfg.dump().c_str(), &trace);
  if (st != MS_OK) return fail(st);
  char* csv = nullptr;
  st = ms_trace_csv_string(trace, &csv);
  if (st == MS_OK && csv) std::fputs(csv, stdout);
  ms_string_free(csv);
  ms_trace_free(trace);
  return st == MS_OK ? 0 : fail(st);
}

int cmd_check(const std::string& suite) {
  char* report = nullptr;
  int failures = 0;
  ms_status st = ms_check(suite.c_str(), &report, &failures);
  if (report) {
    std::fputs(report, stdout);
    ms_string_free(report);
  }
  if (st == MS_OK) return 0;
  if (st == MS_ERR_CHECK_FAILED) return 1;
  return fail(st);
}

int cmd_rates(const RunFlags& flags, const std::string& algo,
              const std::vector<std::int64_t>& T_list) {
  if (T_list.size() < 4) {
    std::cerr << "error: rates needs at least 4 horizons\n";
    return 2;
  }
  const bool use_grad = algo == "da";
  const char* metric = use_grad ? "min_grad_dual_next" : "gap_final";

  std::vector<double> xs, ys;
  std::ostringstream csv;
  csv << "metric,T,value\n";
  std::vector<std::int64_t> excluded;
  for (std::int64_t T : T_list) {
    RunFlags per = flags;
    per.T = T;
    json cfg;
    if (int rc = build_config(per, algo, cfg)) return rc;
    cfg.erase("out");
    ms_trace* trace = nullptr;
    ms_status st = ms_run(cfg.dump().c_str(), &trace);
    if (st != MS_OK) return fail(st);
    double value = 0.0;
    int have = ms_trace_stat(trace, metric, &value);
    ms_trace_free(trace);
    if (!have) {
      std::cerr << "error: run produced no '" << metric << "' statistic\n";
      return static_cast<int>(MS_ERR_INTERNAL);
    }
    csv << metric << "," << T << "," << fmt_double(value) << "\n";
    if (value > 0.0) {
      xs.push_back(static_cast<double>(T));
      ys.push_back(value);
    } else {
      excluded.push_back(T);
    }
  }

  if (xs.size() < 3) {
    std::cerr << "error: fewer than 3 positive values, cannot fit\n";
    return static_cast<int>(MS_ERR_INTERNAL);
  }
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
  ms_status st =
      ms_slope_fit(xs.data(), ys.data(), xs.size(), &slope, &intercept, &r2);
  if (st != MS_OK) return fail(st);
  csv << "slope,," << fmt_double(slope) << "\n";
  csv << "intercept,," << fmt_double(intercept) << "\n";
  csv << "r_squared,," << fmt_double(r2) << "\n";

  std::cout << "metric=" << metric << " slope=" << fmt_double(slope)
            << " intercept=" << fmt_double(intercept)
            << " r2=" << fmt_double(r2) << " n=" << xs.size();
  if (!excluded.empty()) {
    std::cout << " excluded_nonpositive=";
    for (std::size_t i = 0; i < excluded.size(); ++i)
      std::cout << (i ? "," : "") << excluded[i];
  }
  std::cout << "\n";

  if (flags.out) {
    std::ofstream f(*flags.out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot open '" << *flags.out << "'\n";
      return static_cast<int>(MS_ERR_IO);
    }
    f << csv.str();
  } else {
    std::cout << csv.str();
  }
  return 0;
}

int cmd_sweep(const RunFlags& flags, const std::string& algo,
              const std::string& param, const std::vector<std::string>& values,
              const std::string& out_dir) {
  if (param.empty() || values.empty()) {
    std::cerr << "error: sweep requires --param and --values\n";
    return 2;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create '" << out_dir << "'\n";
    return static_cast<int>(MS_ERR_IO);
  }

  std::ostringstream summary;
  summary << "param,value,status,f_final,gap_final\n";
  int worst = 0;
  for (const auto& raw : values) {
    json cfg;
    if (int rc = build_config(flags, algo, cfg)) return rc;
    cfg.erase("out");
    json parsed;
    try {
      parsed = json::parse(raw);
    } catch (const json::exception&) {
      parsed = raw;  // keep as string (e.g. geometry names)
    }
    cfg[param] = parsed;

    std::string run_path = out_dir + "/" + param + "_" + raw + ".csv";
    ms_trace* trace = nullptr;
    ms_status st = ms_run(cfg.dump().c_str(), &trace);
    std::string f_final = "", gap_final = "";
    if (st == MS_OK) {
      double v = 0.0;
      if (ms_trace_stat(trace, "f_final", &v)) f_final = fmt_double(v);
      if (ms_trace_stat(trace, "gap_final", &v)) gap_final = fmt_double(v);
      ms_status wst = ms_trace_write_csv(trace, run_path.c_str());
      if (wst != MS_OK) st = wst;
    }
    if (trace) ms_trace_free(trace);
    if (st != MS_OK) {
      std::cerr << "sweep " << param << "=" << raw << " failed ("
                << ms_status_name(st) << "): " << ms_last_error() << "\n";
      worst = std::max(worst, static_cast<int>(st));
    }
    summary << param << "," << raw << "," << ms_status_name(st) << ","
            << f_final << "," << gap_final << "\n";
  }

  std::ofstream f(out_dir + "/summary.csv", std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write sweep summary\n";
    return static_cast<int>(MS_ERR_IO);
  }
  f << summary.str();
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"muonscale: adaptive trust-region scaling for Muon-type "
               "optimizers"};
  app.set_version_flag("--version", std::string(ms_version()));
  app.require_subcommand(1);

  RunFlags run_flags;
  std::string run_algo;
  auto* run = app.add_subcommand("run", "execute one run and emit CSV");
  run->add_option("--algo", run_algo,
                  "fixed | da | sc | df | df_practical");
  add_run_flags(run, run_flags);

  std::string suite = "all";
  auto* check = app.add_subcommand("check", "run an invariant suite");
  check->add_option("suite", suite, "geometry | da | sc | df | practical | all");

  RunFlags rates_flags;
  std::string rates_algo;
  std::vector<std::int64_t> rates_T;
  auto* rates =
      app.add_subcommand("rates", "fit log-log convergence slopes over horizons");
  rates->add_option("--algo", rates_algo, "algorithm");
  rates->add_option("--T-list", rates_T, "horizons (>= 4)")->delimiter(',');
  add_run_flags(rates, rates_flags);

  RunFlags sweep_flags;
  std::string sweep_algo, sweep_param, sweep_dir = "sweep_out";
  std::vector<std::string> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "run a one-parameter sweep");
  sweep->add_option("--algo", sweep_algo, "algorithm");
  sweep->add_option("--param", sweep_param, "config key to vary");
  sweep->add_option("--values", sweep_values, "comma-separated values")
      ->delimiter(',');
  sweep->add_option("--out-dir", sweep_dir, "output directory");
  add_run_flags(sweep, sweep_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed()) return cmd_run(run_flags, run_algo);
  if (check->parsed()) return cmd_check(suite);
  if (rates->parsed()) return cmd_rates(rates_flags, rates_algo, rates_T);
  if (sweep->parsed())
    return cmd_sweep(sweep_flags, sweep_algo, sweep_param, sweep_values,
                     sweep_dir);
  return 2;
}
