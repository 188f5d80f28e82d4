#include "gwborder/render.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "json.hpp"

namespace gwb {

namespace {

using Json = nlohmann::ordered_json;

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round15(x);
}

template <typename T>
Json optional_number(const std::optional<T>& x) {
  return x ? number(static_cast<double>(*x)) : Json(nullptr);
}

Json envelope(const char* command, const std::string& family) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["family"] = family;
  return j;
}

std::string finish(const Json& j) { return j.dump(2) + "\n"; }

// Empty cell for missing or non-finite values.
std::string cell(double x) { return std::isfinite(x) ? format_double(x) : std::string(); }

template <typename T>
std::string cell(const std::optional<T>& x) {
  return x ? cell(static_cast<double>(*x)) : std::string();
}

std::string join(std::initializer_list<std::string> fields) {
  std::string s;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) s += ',';
    s += f;
    first = false;
  }
  return s + "\n";
}

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

double round15(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_double(x).c_str(), nullptr);
}

std::string render_apex(const OffspringFamily& fam, Format format) {
  const auto k = apex(fam);
  if (format == Format::json) {
    auto j = envelope("apex", fam.name());
    j["tau"] = number(k.tau);
    j["rho"] = number(k.rho);
    j["psi_tau"] = number(k.psi_tau);
    j["sigma_tau"] = number(k.sigma_tau);
    j["Q"] = k.span;
    j["in_kstar"] = true;
    return finish(j);
  }
  return join({"family", "tau", "rho", "psi_tau", "sigma_tau", "Q", "in_kstar"}) +
         join({fam.name(), cell(k.tau), cell(k.rho), cell(k.psi_tau), cell(k.sigma_tau), std::to_string(k.span),
               "true"});
}

std::string render_table(const BorderTable& table, Format format) {
  if (format == Format::json) {
    auto j = envelope("coeffs", table.family);
    j["k"] = table.k;
    j["Q"] = table.span;
    j["limit"] = optional_number(table.limit);
    Json rows = Json::array();
    for (const auto& r : table.rows) {
      Json row;
      row["n"] = r.n;
      row["A_n"] = to_string(r.a_n);
      row["A_n_k"] = to_string(r.a_n_k);
      row["ratio"] = to_string(r.ratio);
      row["ratio_value"] = number(to_double(r.ratio));
      row["gap"] = optional_number(r.gap);
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return finish(j);
  }
  std::string s = join({"n", "A_n", "A_n_k", "ratio", "gap"});
  for (const auto& r : table.rows) {
    s += join({std::to_string(r.n), to_string(r.a_n), to_string(r.a_n_k), to_string(r.ratio), cell(r.gap)});
  }
  return s;
}

std::string render_limit(const std::string& family, const LimitConstant& limit, Format format) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double diff = limit.closed_form ? std::abs(limit.value - *limit.closed_form) : nan;
  if (format == Format::json) {
    auto j = envelope("limit", family);
    j["k"] = limit.k;
    j["c_k"] = number(limit.value);
    j["closed_form"] = optional_number(limit.closed_form);
    j["abs_diff"] = number(diff);
    j["underflow"] = limit.underflow;
    Json traj = Json::array();
    for (double g : limit.trajectory) traj.push_back(number(g));
    j["trajectory"] = std::move(traj);
    return finish(j);
  }
  return join({"family", "k", "c_k", "closed_form", "abs_diff", "underflow"}) +
         join({family, std::to_string(limit.k), cell(limit.value), cell(limit.closed_form), cell(diff),
               flag(limit.underflow)});
}

std::string render_estimate(const std::string& family, const EstimateReport& r, Format format) {
  const double exact_value =
      r.exact_reference ? to_double(*r.exact_reference) : std::numeric_limits<double>::quiet_NaN();
  const std::string exact = r.exact_reference ? to_string(*r.exact_reference) : std::string();
  if (format == Format::json) {
    auto j = envelope("simulate", family);
    j["p_hat"] = number(r.p_hat);
    j["ci95"] = number(r.ci_half_width);
    j["accepted"] = r.accepted;
    j["attempts"] = r.attempts;
    j["exact"] = r.exact_reference ? Json(exact) : Json(nullptr);
    j["exact_value"] = number(exact_value);
    j["limit"] = optional_number(r.limit);
    j["target"] = Json{{"n", r.target_n}, {"k", r.k}};
    j["seed"] = r.seed;
    j["t"] = number(r.t);
    j["attempts_per_accept"] = number(r.attempts_per_accept);
    j["insufficient"] = r.insufficient;
    return finish(j);
  }
  return join({"family", "n", "k", "t", "p_hat", "ci95", "accepted", "attempts", "exact", "exact_value", "limit",
               "seed", "insufficient"}) +
         join({family, std::to_string(r.target_n), std::to_string(r.k), cell(r.t), cell(r.p_hat),
               cell(r.ci_half_width), std::to_string(r.accepted), std::to_string(r.attempts), exact, cell(exact_value),
               cell(r.limit), std::to_string(r.seed), flag(r.insufficient)});
}

std::string render_mean_protected(const std::string& family, const EstimateReport& r, Format format) {
  if (format == Format::json) {
    auto j = envelope("mean-protected", family);
    j["mean"] = number(r.mean_protected);
    j["ci95"] = number(r.mean_protected_ci);
    j["mean_rooted"] = number(r.mean_protected_rooted);
    j["ci95_rooted"] = number(r.mean_protected_rooted_ci);
    j["accepted"] = r.accepted;
    j["attempts"] = r.attempts;
    j["limit"] = optional_number(r.limit);
    j["target"] = Json{{"n", r.target_n}, {"k", r.k}};
    j["seed"] = r.seed;
    j["t"] = number(r.t);
    j["insufficient"] = r.insufficient;
    return finish(j);
  }
  return join({"family", "n", "k", "t", "mean", "ci95", "mean_rooted", "ci95_rooted", "accepted", "attempts",
               "limit", "seed", "insufficient"}) +
         join({family, std::to_string(r.target_n), std::to_string(r.k), cell(r.t), cell(r.mean_protected),
               cell(r.mean_protected_ci), cell(r.mean_protected_rooted), cell(r.mean_protected_rooted_ci),
               std::to_string(r.accepted), std::to_string(r.attempts), cell(r.limit), std::to_string(r.seed),
               flag(r.insufficient)});
}

std::string render_oracle(const OracleReport& report, Format format) {
  if (format == Format::json) {
    auto j = envelope("oracle", report.family);
    j["k"] = report.k;
    j["n_max"] = report.n_max;
    j["ok"] = report.ok;
    j["status"] = report.ok ? "OK: all coefficients match" : "MISMATCH";
    Json rows = Json::array();
    for (const auto& r : report.rows) {
      Json row;
      row["n"] = r.n;
      row["trees"] = r.trees;
      row["U_n"] = to_string(r.u);
      row["A_n"] = to_string(r.a_n);
      row["V_n"] = to_string(r.v);
      row["A_n_k"] = to_string(r.a_n_k);
      row["match"] = r.match;
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return finish(j);
  }
  std::string s = join({"n", "trees", "U_n", "A_n", "V_n", "A_n_k", "match"});
  for (const auto& r : report.rows) {
    s += join({std::to_string(r.n), std::to_string(r.trees), to_string(r.u), to_string(r.a_n), to_string(r.v),
               to_string(r.a_n_k), flag(r.match)});
  }
  return s;
}

}  // namespace gwb
