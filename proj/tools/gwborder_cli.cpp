// gw-border: command-line front end over the C interface.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gwborder/gwborder.h"

namespace {

struct Options {
  std::string family;
  std::string psi_file;
  std::size_t trunc = 256;
  std::string format = "csv";
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

// Status codes map onto the documented exit codes: 2 for anything the
// caller got wrong (including a family without an apex), 3 and 4 as is,
// 1 for internal failures.
int exit_code(gwb_status s) {
  switch (s) {
    case GWB_OK: return 0;
    case GWB_ERR_INVALID:
    case GWB_ERR_NOT_IN_KSTAR:
    case GWB_ERR_DOMAIN: return 2;
    case GWB_ERR_MISMATCH: return 3;
    case GWB_ERR_INSUFFICIENT: return 4;
    case GWB_ERR_INTERNAL: return 1;
  }
  return 1;
}

struct Failure {
  gwb_status status;
};

void check(gwb_status s) {
  if (s != GWB_OK) throw Failure{s};
}

class Family {
 public:
  explicit Family(const Options& opt) {
    if (!opt.psi_file.empty()) {
      std::ifstream in(opt.psi_file, std::ios::binary);
      if (!in) {
        std::fprintf(stderr, "error: cannot read %s\n", opt.psi_file.c_str());
        throw Failure{GWB_ERR_INVALID};
      }
      std::ostringstream text;
      text << in.rdbuf();
      check(gwb_family_from_json(text.str().c_str(), &fam_));
    } else {
      check(gwb_family_builtin(opt.family.c_str(), &fam_));
    }
  }
  ~Family() { gwb_family_free(fam_); }
  Family(const Family&) = delete;
  Family& operator=(const Family&) = delete;
  const gwb_family* get() const { return fam_; }

 private:
  gwb_family* fam_ = nullptr;
};

class Text {
 public:
  Text() = default;
  ~Text() { gwb_string_free(s_); }
  Text(const Text&) = delete;
  Text& operator=(const Text&) = delete;
  gwb_string** out() { return &s_; }
  void print() const { std::fwrite(gwb_string_data(s_), 1, gwb_string_size(s_), stdout); }

 private:
  gwb_string* s_ = nullptr;
};

struct SimulateArgs {
  std::size_t n = 0;
  unsigned k = 0;
  std::uint64_t samples = 10'000;
  std::uint64_t max_attempts = 0;
  double t = 0.0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance to the border in Galton-Watson trees: exact series, limits, simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  auto* fam_opt = app.add_option("--family", opt.family, "built-in psi")
                      ->check(CLI::IsMember({"cayley", "plane", "binary", "motzkin", "unary"}));
  auto* file_opt = app.add_option("--psi-file", opt.psi_file, "JSON file with a custom psi");
  fam_opt->excludes(file_opt);
  app.add_option("--trunc", opt.trunc, "series truncation")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", opt.seed, "RNG seed");
  app.add_option("--threads", opt.threads, "worker cap, 0 for all cores");

  auto* apex = app.add_subcommand("apex", "apex, rho, psi(tau), sigma(tau), span");

  unsigned coeff_k = 0;
  std::size_t coeff_n_max = 0;
  auto* coeffs = app.add_subcommand("coeffs", "exact A_n, A_n^(k) and their ratio");
  coeffs->add_option("--k", coeff_k, "border level")->required();
  coeffs->add_option("--n-max", coeff_n_max, "last n, defaults to --trunc");

  unsigned limit_k = 0;
  auto* limit = app.add_subcommand("limit", "limit constant c_k");
  limit->add_option("--k", limit_k, "border level")->required();

  SimulateArgs sim;
  auto add_sim_options = [&](CLI::App* sub) {
    sub->add_option("--n", sim.n, "tree size")->required();
    sub->add_option("--k", sim.k, "border level")->required();
    sub->add_option("--samples", sim.samples, "accepted samples")->check(CLI::PositiveNumber);
    sub->add_option("--max-attempts", sim.max_attempts, "attempt budget, 0 for automatic");
    sub->add_option("--t", sim.t, "tilt, defaults to the apex")->check(CLI::PositiveNumber);
  };
  auto* simulate = app.add_subcommand("simulate", "rejection estimate of P(border >= k | size n)");
  add_sim_options(simulate);
  auto* mean = app.add_subcommand("mean-protected", "mean proportion of nodes at distance >= k from the border");
  add_sim_options(mean);

  std::size_t oracle_n_max = 0;
  unsigned oracle_k = 0;
  std::string dump;
  auto* oracle = app.add_subcommand("oracle", "enumerate every tree and compare with the series");
  oracle->add_option("--n-max", oracle_n_max, "largest size, at most 14")->required();
  oracle->add_option("--k", oracle_k, "border level")->required();
  oracle->add_option("--dump", dump, "write one JSON line per tree");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (opt.family.empty() && opt.psi_file.empty()) {
    std::fprintf(stderr, "error: one of --family or --psi-file is required\n");
    return 2;
  }

  const gwb_format format = opt.format == "json" ? GWB_FORMAT_JSON : GWB_FORMAT_CSV;
  gwb_set_threads(opt.threads);
  int rc = 0;
  try {
    const Family fam(opt);
    Text out;
    if (apex->parsed()) {
      check(gwb_render_apex(fam.get(), format, out.out()));
    } else if (coeffs->parsed()) {
      const std::size_t n_max = coeff_n_max == 0 ? opt.trunc : coeff_n_max;
      check(gwb_render_coeffs(fam.get(), coeff_k, n_max, format, out.out()));
    } else if (limit->parsed()) {
      check(gwb_render_limit(fam.get(), limit_k, format, out.out()));
    } else if (simulate->parsed() || mean->parsed()) {
      gwb_gw_config cfg;
      gwb_gw_config_init(&cfg);
      cfg.target_n = sim.n;
      cfg.k = sim.k;
      cfg.samples = sim.samples;
      cfg.max_attempts = sim.max_attempts;
      cfg.seed = opt.seed;
      if (sim.t > 0.0) {
        cfg.has_t = 1;
        cfg.t = sim.t;
      }
      gwb_report* report = nullptr;
      check(gwb_simulate(fam.get(), &cfg, &report));
      gwb_estimate est;
      gwb_report_estimate(report, &est);
      const gwb_status s = simulate->parsed() ? gwb_render_simulate(report, format, out.out())
                                              : gwb_render_mean_protected(report, format, out.out());
      gwb_report_free(report);
      check(s);
      if (est.insufficient) {
        std::fprintf(stderr, "error: attempt budget exhausted after %llu accepted of %llu\n",
                     static_cast<unsigned long long>(est.accepted), static_cast<unsigned long long>(sim.samples));
        rc = 4;
      }
    } else if (oracle->parsed()) {
      gwb_oracle* result = nullptr;
      check(gwb_oracle_run(fam.get(), oracle_n_max, oracle_k, dump.empty() ? nullptr : dump.c_str(), &result));
      const bool ok = gwb_oracle_ok(result) != 0;
      const gwb_status s = gwb_render_oracle(result, format, out.out());
      gwb_oracle_free(result);
      check(s);
      if (format == GWB_FORMAT_CSV) std::fprintf(stderr, "%s\n", ok ? "OK: all coefficients match" : "MISMATCH");
      if (!ok) rc = 3;
    }
    out.print();
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", gwb_last_error());
    return exit_code(f.status);
  }
  return rc;
}
