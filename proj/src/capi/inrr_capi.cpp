#include "inrr/inrr.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "inrr/harness/config.hpp"
#include "inrr/harness/run.hpp"
#include "inrr/numerics/error.hpp"

struct inrr_config {
  inrr::harness::ConfigDocument doc;
};

struct inrr_report {
  inrr::harness::RunReport report;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, std::string>> artifacts;
};

namespace {

thread_local std::string g_last_error;

inrr_status fail(inrr_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps the exception in flight to a status.
inrr_status translate() {
  try {
    throw;
  } catch (const inrr::ConfigError& e) {
    return fail(INRR_ERR_CONFIG, e.what());
  } catch (const inrr::NumericError& e) {
    return fail(INRR_ERR_NUMERIC, e.what());
  } catch (const inrr::ParseError& e) {
    return fail(INRR_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(INRR_ERR_IO, e.what());
  } catch (const inrr::ContractError& e) {
    return fail(INRR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const inrr::DimensionError& e) {
    return fail(INRR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const inrr::Error& e) {
    return fail(INRR_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(INRR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(INRR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(INRR_ERR_INTERNAL, "unknown error");
  }
}

template <typename F>
inrr_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return INRR_OK;
  } catch (...) {
    return translate();
  }
}

inrr_status copy_out(const std::string& value, char* buf, std::size_t size, std::size_t* needed) {
  if (needed) *needed = value.size() + 1;
  if (!buf) return size == 0 ? INRR_OK : fail(INRR_ERR_INVALID_ARGUMENT, "null buffer with nonzero size");
  if (size < value.size() + 1) return fail(INRR_ERR_INVALID_ARGUMENT, "buffer too small");
  std::memcpy(buf, value.c_str(), value.size() + 1);
  return INRR_OK;
}

inrr_status run_as(const inrr_config* config, inrr_report** out, const char* task) {
  if (!config || !out) return fail(INRR_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    inrr::harness::ConfigDocument doc = config->doc;
    if (task) doc.set("experiment.task", task);
    auto report = std::make_unique<inrr_report>();
    report->report = inrr::harness::run_task(doc.resolve());
    for (const auto& kv : report->report.metrics) report->metrics.emplace_back(kv.first, kv.second);
    for (const auto& kv : report->report.artifacts) report->artifacts.emplace_back(kv.first, kv.second.string());
    *out = report.release();
  });
}

}  // namespace

extern "C" {

const char* inrr_version(void) { return "1.0.0"; }

const char* inrr_status_string(inrr_status status) {
  switch (status) {
    case INRR_OK: return "ok";
    case INRR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case INRR_ERR_CONFIG: return "config error";
    case INRR_ERR_NUMERIC: return "numeric failure";
    case INRR_ERR_IO: return "i/o error";
    case INRR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* inrr_last_error(void) { return g_last_error.c_str(); }

inrr_status inrr_config_load(const char* path, inrr_config** out) {
  if (!path || !out) return fail(INRR_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new inrr_config{inrr::harness::ConfigDocument::load(path)}; });
}

inrr_status inrr_config_parse(const char* text, const char* base_dir, inrr_config** out) {
  if (!text || !out) return fail(INRR_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new inrr_config{inrr::harness::ConfigDocument::parse(text, base_dir ? base_dir : "")};
  });
}

inrr_status inrr_config_set(inrr_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(INRR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { config->doc.set(key, value); });
}

inrr_status inrr_config_get(const inrr_config* config, const char* key, char* buf, size_t size, size_t* needed) {
  if (!config || !key) return fail(INRR_ERR_INVALID_ARGUMENT, "null argument");
  std::string value;
  const inrr_status s = guarded([&] { value = config->doc.get(key).value_or(""); });
  if (s != INRR_OK) return s;
  return copy_out(value, buf, size, needed);
}

inrr_status inrr_config_validate(const inrr_config* config) {
  if (!config) return fail(INRR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { (void)config->doc.resolve(); });
}

inrr_status inrr_config_resolved(const inrr_config* config, char* buf, size_t size, size_t* needed) {
  if (!config) return fail(INRR_ERR_INVALID_ARGUMENT, "null argument");
  std::string text;
  const inrr_status s = guarded([&] { text = inrr::harness::format_config(config->doc.resolve()); });
  if (s != INRR_OK) return s;
  return copy_out(text, buf, size, needed);
}

void inrr_config_free(inrr_config* config) { delete config; }

inrr_status inrr_run(const inrr_config* config, inrr_report** out) { return run_as(config, out, nullptr); }
inrr_status inrr_sweep(const inrr_config* config, inrr_report** out) { return run_as(config, out, "ntk_sweep"); }
inrr_status inrr_bias(const inrr_config* config, inrr_report** out) { return run_as(config, out, "implicit_bias"); }

size_t inrr_report_metric_count(const inrr_report* report) { return report ? report->metrics.size() : 0; }

inrr_status inrr_report_metric(const inrr_report* report, size_t index, const char** name, double* value) {
  if (!report) return fail(INRR_ERR_INVALID_ARGUMENT, "null report");
  if (index >= report->metrics.size()) return fail(INRR_ERR_INVALID_ARGUMENT, "metric index out of range");
  if (name) *name = report->metrics[index].first.c_str();
  if (value) *value = report->metrics[index].second;
  return INRR_OK;
}

inrr_status inrr_report_metric_by_name(const inrr_report* report, const char* name, double* value) {
  if (!report || !name || !value) return fail(INRR_ERR_INVALID_ARGUMENT, "null argument");
  for (const auto& [k, v] : report->metrics) {
    if (k == name) {
      *value = v;
      return INRR_OK;
    }
  }
  return fail(INRR_ERR_INVALID_ARGUMENT, std::string("no metric named '") + name + "'");
}

size_t inrr_report_artifact_count(const inrr_report* report) { return report ? report->artifacts.size() : 0; }

inrr_status inrr_report_artifact(const inrr_report* report, size_t index, const char** role, const char** path) {
  if (!report) return fail(INRR_ERR_INVALID_ARGUMENT, "null report");
  if (index >= report->artifacts.size()) return fail(INRR_ERR_INVALID_ARGUMENT, "artifact index out of range");
  if (role) *role = report->artifacts[index].first.c_str();
  if (path) *path = report->artifacts[index].second.c_str();
  return INRR_OK;
}

size_t inrr_report_log_length(const inrr_report* report) { return report ? report->report.log.size() : 0; }

inrr_status inrr_report_log_row(const inrr_report* report, size_t index, inrr_log_row* out) {
  if (!report || !out) return fail(INRR_ERR_INVALID_ARGUMENT, "null argument");
  if (index >= report->report.log.size()) return fail(INRR_ERR_INVALID_ARGUMENT, "log index out of range");
  const auto& r = report->report.log[index];
  *out = inrr_log_row{r.step, r.observed_mse, r.unobserved_mse, r.psnr_unobserved,
                      r.penalty, r.effective_rank, r.wall_seconds};
  return INRR_OK;
}

void inrr_report_free(inrr_report* report) { delete report; }

}  // extern "C"
