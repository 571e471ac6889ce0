#include "muonscale.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "muonscale/checks.hpp"
#include "muonscale/errors.hpp"
#include "muonscale/runner.hpp"
#include "muonscale/testkit.hpp"
#include "muonscale/trace.hpp"

struct ms_trace {
  muonscale::Trace trace;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ms_status record_error(ms_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
ms_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const muonscale::config_error& e) {
    return record_error(MS_ERR_USAGE, e.what());
  } catch (const muonscale::divergence_error& e) {
    return record_error(MS_ERR_DIVERGED, e.what());
  } catch (const muonscale::invariant_error& e) {
    return record_error(MS_ERR_INVARIANT, e.what());
  } catch (const muonscale::oracle_error& e) {
    return record_error(MS_ERR_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return record_error(MS_ERR_INTERNAL, e.what());
  } catch (...) {
    return record_error(MS_ERR_INTERNAL, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* ms_version(void) { return "1.0.0"; }

const char* ms_status_name(ms_status status) {
  switch (status) {
    case MS_OK: return "ok";
    case MS_ERR_CHECK_FAILED: return "check_failed";
    case MS_ERR_USAGE: return "usage_error";
    case MS_ERR_DIVERGED: return "diverged";
    case MS_ERR_INVARIANT: return "invariant_violation";
    case MS_ERR_IO: return "io_error";
    case MS_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* ms_last_error(void) { return g_last_error.c_str(); }

ms_status ms_run(const char* config_json, ms_trace** out_trace) {
  if (!config_json || !out_trace)
    return record_error(MS_ERR_USAGE, "null argument");
  *out_trace = nullptr;
  return guarded([&]() {
    auto trace = muonscale::run_from_json(config_json);
    *out_trace = new ms_trace{std::move(trace)};
    return MS_OK;
  });
}

ms_status ms_run_to_csv(const char* config_json, const char* csv_path) {
  if (!config_json || !csv_path)
    return record_error(MS_ERR_USAGE, "null argument");
  return guarded([&]() {
    auto trace = muonscale::run_from_json(config_json);
    try {
      trace.write_csv(csv_path);
    } catch (const muonscale::config_error& e) {
      return record_error(MS_ERR_IO, e.what());
    }
    return MS_OK;
  });
}

size_t ms_trace_rows(const ms_trace* trace) {
  return trace ? trace->trace.rows() : 0;
}

size_t ms_trace_cols(const ms_trace* trace) {
  return trace ? trace->trace.columns().size() : 0;
}

const char* ms_trace_col_name(const ms_trace* trace, size_t col) {
  if (!trace || col >= trace->trace.columns().size()) return nullptr;
  return trace->trace.columns()[col].c_str();
}

int ms_trace_cell(const ms_trace* trace, size_t row, size_t col,
                  double* value) {
  if (!trace || !value) return 0;
  auto cell = trace->trace.cell(row, col);
  if (!cell) return 0;
  *value = *cell;
  return 1;
}

int ms_trace_stat(const ms_trace* trace, const char* name, double* value) {
  if (!trace || !name || !value) return 0;
  auto stat = trace->trace.stat(name);
  if (!stat) return 0;
  *value = *stat;
  return 1;
}

ms_status ms_trace_write_csv(const ms_trace* trace, const char* path) {
  if (!trace || !path) return record_error(MS_ERR_USAGE, "null argument");
  return guarded([&]() {
    try {
      trace->trace.write_csv(path);
    } catch (const muonscale::config_error& e) {
      return record_error(MS_ERR_IO, e.what());
    }
    return MS_OK;
  });
}

ms_status ms_trace_csv_string(const ms_trace* trace, char** out) {
  if (!trace || !out) return record_error(MS_ERR_USAGE, "null argument");
  return guarded([&]() {
    *out = dup_string(trace->trace.to_csv());
    return *out ? MS_OK : record_error(MS_ERR_INTERNAL, "allocation failed");
  });
}

void ms_trace_free(ms_trace* trace) { delete trace; }

ms_status ms_check(const char* suite, char** report_out, int* failures_out) {
  if (!suite) return record_error(MS_ERR_USAGE, "null suite");
  if (report_out) *report_out = nullptr;
  if (failures_out) *failures_out = 0;
  return guarded([&]() {
    auto results = muonscale::run_suite(suite);
    int failed = muonscale::failure_count(results);
    if (report_out) *report_out = dup_string(muonscale::format_report(results));
    if (failures_out) *failures_out = failed;
    if (failed > 0)
      return record_error(MS_ERR_CHECK_FAILED,
                          std::to_string(failed) + " check(s) failed");
    return MS_OK;
  });
}

ms_status ms_slope_fit(const double* xs, const double* ys, size_t n,
                       double* slope, double* intercept, double* r_squared) {
  if (!xs || !ys || !slope) return record_error(MS_ERR_USAGE, "null argument");
  return guarded([&]() {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(n);
    for (size_t i = 0; i < n; ++i) pts.emplace_back(xs[i], ys[i]);
    try {
      auto fit = muonscale::testkit::slope_fit(pts);
      *slope = fit.slope;
      if (intercept) *intercept = fit.intercept;
      if (r_squared) *r_squared = fit.r_squared;
    } catch (const muonscale::oracle_error& e) {
      return record_error(MS_ERR_USAGE, e.what());
    }
    return MS_OK;
  });
}

void ms_string_free(char* s) { std::free(s); }

}  // extern "C"
