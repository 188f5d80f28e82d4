#include "gwborder/gwborder.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <new>
#include <string>

#include "gwborder/border.hpp"
#include "gwborder/error.hpp"
#include "gwborder/family.hpp"
#include "gwborder/oracle.hpp"
#include "gwborder/parallel.hpp"
#include "gwborder/render.hpp"
#include "gwborder/sampler.hpp"

struct gwb_family {
  gwb::OffspringFamily fam;
};

struct gwb_report {
  std::string family;
  gwb::EstimateReport report;
};

struct gwb_oracle {
  gwb::OracleReport report;
};

struct gwb_string {
  std::string text;
};

namespace {

thread_local std::string last_error;

gwb_status fail(gwb_status code, const std::string& what) {
  last_error = what;
  return code;
}

gwb_status status_of(gwb::Errc code) {
  switch (code) {
    case gwb::Errc::invalid_argument: return GWB_ERR_INVALID;
    case gwb::Errc::mismatch: return GWB_ERR_MISMATCH;
    case gwb::Errc::insufficient: return GWB_ERR_INSUFFICIENT;
    case gwb::Errc::not_in_kstar: return GWB_ERR_NOT_IN_KSTAR;
    case gwb::Errc::domain: return GWB_ERR_DOMAIN;
    case gwb::Errc::internal: return GWB_ERR_INTERNAL;
  }
  return GWB_ERR_INTERNAL;
}

// Runs body, translating exceptions into status codes.
template <typename Body>
gwb_status guard(Body&& body) noexcept {
  try {
    body();
    return GWB_OK;
  } catch (const gwb::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GWB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GWB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GWB_ERR_INTERNAL, "unknown failure");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw gwb::Error(gwb::Errc::invalid_argument, what);
}

gwb::Format to_format(gwb_format f) {
  require(f == GWB_FORMAT_CSV || f == GWB_FORMAT_JSON, "unknown output format");
  return f == GWB_FORMAT_JSON ? gwb::Format::json : gwb::Format::csv;
}

void emit(std::string text, gwb_string** out) {
  require(out != nullptr, "null output pointer");
  *out = new gwb_string{std::move(text)};
}

}  // namespace

extern "C" {

const char* gwb_version(void) { return "1.0.0"; }

const char* gwb_last_error(void) { return last_error.c_str(); }

void gwb_set_threads(unsigned threads) { gwb::set_worker_limit(threads); }

const char* gwb_string_data(const gwb_string* s) { return s ? s->text.c_str() : ""; }

size_t gwb_string_size(const gwb_string* s) { return s ? s->text.size() : 0; }

void gwb_string_free(gwb_string* s) { delete s; }

gwb_status gwb_family_builtin(const char* name, gwb_family** out) {
  return guard([&] {
    require(name != nullptr && out != nullptr, "null argument");
    *out = new gwb_family{gwb::OffspringFamily::builtin(name)};
  });
}

gwb_status gwb_family_from_json(const char* text, gwb_family** out) {
  return guard([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new gwb_family{gwb::OffspringFamily::from_json(text)};
  });
}

void gwb_family_free(gwb_family* fam) { delete fam; }

const char* gwb_family_name(const gwb_family* fam) { return fam ? fam->fam.name().c_str() : ""; }

unsigned gwb_family_span(const gwb_family* fam) { return fam ? fam->fam.span() : 0; }

gwb_status gwb_apex(const gwb_family* fam, gwb_apex_info* out) {
  return guard([&] {
    require(fam != nullptr && out != nullptr, "null argument");
    const auto a = gwb::apex(fam->fam);
    *out = gwb_apex_info{a.tau, a.rho, a.psi_tau, a.sigma_tau, a.span};
  });
}

gwb_status gwb_limit_constant(const gwb_family* fam, unsigned k, double* out) {
  return guard([&] {
    require(fam != nullptr && out != nullptr, "null argument");
    *out = gwb::limit_constant(fam->fam, k).value;
  });
}

gwb_status gwb_exact_ratio(const gwb_family* fam, unsigned k, size_t n, gwb_string** out) {
  return guard([&] {
    require(fam != nullptr, "null argument");
    emit(gwb::to_string(gwb::exact_conditional_prob(fam->fam, k, n)), out);
  });
}

gwb_status gwb_series_coeff(const gwb_family* fam, unsigned k, size_t n, gwb_string** out) {
  return guard([&] {
    require(fam != nullptr, "null argument");
    emit(gwb::to_string(gwb::iterate_scheme(fam->fam, k, n).series[n]), out);
  });
}

void gwb_gw_config_init(gwb_gw_config* cfg) {
  if (!cfg) return;
  const gwb::GWConfig d;
  *cfg = gwb_gw_config{d.target_n, d.k, d.samples, d.max_attempts, d.seed, 0, 0.0, d.node_cap, d.exact_limit};
}

gwb_status gwb_simulate(const gwb_family* fam, const gwb_gw_config* cfg, gwb_report** out) {
  return guard([&] {
    require(fam != nullptr && cfg != nullptr && out != nullptr, "null argument");
    gwb::GWConfig c;
    c.target_n = cfg->target_n;
    c.k = cfg->k;
    c.samples = cfg->samples;
    c.max_attempts = cfg->max_attempts;
    c.seed = cfg->seed;
    if (cfg->has_t) c.t = cfg->t;
    c.node_cap = cfg->node_cap;
    c.exact_limit = cfg->exact_limit;
    *out = new gwb_report{fam->fam.name(), gwb::conditioned_estimate(fam->fam, c)};
  });
}

gwb_status gwb_report_estimate(const gwb_report* report, gwb_estimate* out) {
  return guard([&] {
    require(report != nullptr && out != nullptr, "null argument");
    const auto& r = report->report;
    *out = gwb_estimate{r.t,
                        r.p_hat,
                        r.ci_half_width,
                        r.accepted,
                        r.attempts,
                        r.insufficient ? 1 : 0,
                        r.mean_protected,
                        r.mean_protected_ci,
                        r.mean_protected_rooted,
                        r.mean_protected_rooted_ci,
                        r.limit ? 1 : 0,
                        r.limit.value_or(std::numeric_limits<double>::quiet_NaN())};
  });
}

void gwb_report_free(gwb_report* report) { delete report; }

gwb_status gwb_oracle_run(const gwb_family* fam, size_t n_max, unsigned k, const char* dump_path, gwb_oracle** out) {
  return guard([&] {
    require(fam != nullptr && out != nullptr, "null argument");
    if (dump_path) {
      std::ofstream dump(dump_path, std::ios::binary);
      if (!dump) throw gwb::Error(gwb::Errc::invalid_argument, std::string("cannot open ") + dump_path);
      auto report = gwb::cross_check(fam->fam, n_max, k, &dump);
      dump.flush();
      if (!dump) throw gwb::Error(gwb::Errc::internal, std::string("write failed: ") + dump_path);
      *out = new gwb_oracle{std::move(report)};
    } else {
      *out = new gwb_oracle{gwb::cross_check(fam->fam, n_max, k)};
    }
  });
}

int gwb_oracle_ok(const gwb_oracle* oracle) { return oracle && oracle->report.ok ? 1 : 0; }

void gwb_oracle_free(gwb_oracle* oracle) { delete oracle; }

gwb_status gwb_render_apex(const gwb_family* fam, gwb_format format, gwb_string** out) {
  return guard([&] {
    require(fam != nullptr, "null argument");
    emit(gwb::render_apex(fam->fam, to_format(format)), out);
  });
}

gwb_status gwb_render_coeffs(const gwb_family* fam, unsigned k, size_t n_max, gwb_format format, gwb_string** out) {
  return guard([&] {
    require(fam != nullptr, "null argument");
    const auto f = to_format(format);
    emit(gwb::render_table(gwb::convergence_table(fam->fam, k, n_max), f), out);
  });
}

gwb_status gwb_render_limit(const gwb_family* fam, unsigned k, gwb_format format, gwb_string** out) {
  return guard([&] {
    require(fam != nullptr, "null argument");
    const auto f = to_format(format);
    emit(gwb::render_limit(fam->fam.name(), gwb::limit_constant(fam->fam, k), f), out);
  });
}

gwb_status gwb_render_simulate(const gwb_report* report, gwb_format format, gwb_string** out) {
  return guard([&] {
    require(report != nullptr, "null argument");
    emit(gwb::render_estimate(report->family, report->report, to_format(format)), out);
  });
}

gwb_status gwb_render_mean_protected(const gwb_report* report, gwb_format format, gwb_string** out) {
  return guard([&] {
    require(report != nullptr, "null argument");
    emit(gwb::render_mean_protected(report->family, report->report, to_format(format)), out);
  });
}

gwb_status gwb_render_oracle(const gwb_oracle* oracle, gwb_format format, gwb_string** out) {
  return guard([&] {
    require(oracle != nullptr, "null argument");
    emit(gwb::render_oracle(oracle->report, to_format(format)), out);
  });
}

}  // extern "C"
