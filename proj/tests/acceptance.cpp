// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Independent references are computed here from closed forms or by
// enumeration, never taken from the code under test.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gwborder/border.hpp"
#include "gwborder/family.hpp"
#include "gwborder/oracle.hpp"
#include "gwborder/sampler.hpp"

using namespace gwb;

namespace {

constexpr double kZ95 = 1.959964;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Rational catalan(unsigned long m) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), 2 * m, m);
  Rational q(c, m + 1);
  q.canonicalize();
  return q;
}

OffspringFamily fam(const char* name) { return OffspringFamily::builtin(name); }

// A_n for each built-in from its closed form.
Outcome c1_goldens() {
  Outcome o;
  const auto plane = solve_g(fam("plane"), 30);
  for (unsigned long n = 1; n <= 30; ++n) {
    o.require(plane[n] == catalan(n - 1), "plane A_" + std::to_string(n));
  }
  const auto cayley = solve_g(fam("cayley"), 30);
  for (unsigned long n = 1; n <= 30; ++n) {
    mpz_class p;
    mpz_class f;
    mpz_ui_pow_ui(p.get_mpz_t(), n, n - 1);
    mpz_fac_ui(f.get_mpz_t(), n);
    Rational want(p, f);
    want.canonicalize();
    o.require(cayley[n] == want, "cayley A_" + std::to_string(n));
  }
  const auto binary = solve_g(fam("binary"), 31);
  for (unsigned long n = 1; n <= 31; ++n) {
    const Rational want = n % 2 == 1 ? catalan((n - 1) / 2) : Rational(0);
    o.require(binary[n] == want, "binary A_" + std::to_string(n));
  }
  o.detail = o.pass ? "plane, cayley n <= 30 and binary n <= 31 exact" : o.detail;
  return o;
}

Outcome c2_oracle() {
  Outcome o;
  const char* names[] = {"plane", "cayley", "binary", "motzkin"};
  std::vector<OffspringFamily> fams;
  std::vector<std::vector<ExactSeries>> levels;
  for (const char* name : names) {
    fams.push_back(fam(name));
    levels.push_back(iterate_levels(fams.back(), solve_g(fams.back(), 12), 5));
  }
  std::size_t compared = 0;
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto census = take_census(n);
    for (std::size_t f = 0; f < fams.size(); ++f) {
      for (unsigned k = 0; k <= 5; ++k) {
        const auto agg = aggregate(fams[f], census, k);
        o.require(agg.u == levels[f][0][n] && agg.v == levels[f][k][n],
                  std::string(names[f]) + " n=" + std::to_string(n) + " k=" + std::to_string(k));
        ++compared;
      }
    }
  }
  if (o.pass) o.detail = std::to_string(compared) + " (A_n, A_n^(k)) pairs equal";
  return o;
}

Outcome c3_limits() {
  Outcome o;
  const double e = std::exp(1.0);
  const double c2 = std::exp(-1.0 / e);
  const double c3 = (1.0 / e) * std::exp(-1.0 / e) * std::exp((std::exp(1.0 - 1.0 / e) - 1.0) / e);
  double worst = 0.0;
  auto check = [&](double got, double want, const std::string& what) {
    worst = std::max(worst, std::abs(got - want));
    o.require(std::abs(got - want) <= 1e-10, what);
  };
  check(limit_constant(fam("cayley"), 2).value, c2, "cayley k=2");
  check(limit_constant(fam("cayley"), 3).value, c3, "cayley k=3");
  for (unsigned k = 0; k <= 12; ++k) {
    const double x = std::ldexp(1.0, 2 * static_cast<int>(k));
    check(limit_constant(fam("plane"), k).value, 9.0 * x / ((2.0 + x) * (2.0 + x)), "plane k=" + std::to_string(k));
    check(limit_constant(fam("binary"), k).value, std::pow(2.0, static_cast<double>(k) - std::pow(2.0, k) + 1.0),
          "binary k=" + std::to_string(k));
  }
  if (o.pass) o.detail = "max abs error " + fmt("%.3g", worst);
  return o;
}

Outcome c4_cross() {
  Outcome o;
  const auto cayley = fam("cayley");
  for (unsigned k = 0; k <= 12; ++k) {
    o.require(std::abs(cayley_recurrence(k) - limit_constant(cayley, k).value) <= 1e-10,
              "cayley k=" + std::to_string(k));
  }
  // Points of the closed domain |z| <= rho, |w| <= tau.
  const auto plane = fam("plane");
  const auto binary = fam("binary");
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> zp(-0.25, 0.25);
  std::uniform_real_distribution<double> wp(-0.5, 0.5);
  std::uniform_real_distribution<double> zb(-0.5, 0.5);
  std::uniform_real_distribution<double> wb(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const unsigned k = 1 + static_cast<unsigned>(rng() % 12);
    const double z1 = zp(rng), w1 = wp(rng);
    const double d1 = std::abs(plane_closed_iterate(z1, w1, k) - iterate_G(plane, z1, w1, k));
    const double z2 = zb(rng), w2 = wb(rng);
    const double d2 = std::abs(binary_closed_iterate(z2, w2, k) - iterate_G(binary, z2, w2, k));
    worst = std::max({worst, d1, d2});
    o.require(d1 <= 1e-12 && d2 <= 1e-12, "closed iterate at point " + std::to_string(i));
  }
  if (o.pass) o.detail = "k <= 12 recurrence agrees; closed iterates max diff " + fmt("%.3g", worst);
  return o;
}

Outcome c5_trend() {
  Outcome o;
  const auto plane = fam("plane");
  const auto g = solve_g(plane, 2049);
  const auto levels = iterate_levels(plane, g, 2);
  const Rational limit(4, 9);
  std::vector<Rational> gaps;
  std::string values;
  for (std::size_t n : {129u, 513u, 2049u}) {
    const Rational r = levels[2][n] / g[n];
    gaps.push_back(abs(r - limit));
    values += " n=" + std::to_string(n) + ":" + fmt("%.6f", to_double(r));
  }
  o.require(gaps[0] > gaps[1] && gaps[1] > gaps[2], "gap not strictly decreasing");
  const double rel = to_double(gaps[2] / limit);
  o.require(rel <= 0.05, "relative gap at n=2049 is " + fmt("%.4f", rel));
  if (o.pass) o.detail = "ratios" + values + ", relative gap " + fmt("%.2e", rel);
  return o;
}

Outcome c6_monte_carlo() {
  Outcome o;
  struct Case {
    const char* name;
    std::size_t n;
  };
  std::string details;
  for (const Case c : {Case{"plane", 10}, Case{"binary", 9}, Case{"cayley", 8}}) {
    const auto f = fam(c.name);
    const auto agg = aggregate(f, c.n, 2);
    const double exact = to_double(agg.v / agg.u);
    GWConfig cfg;
    cfg.target_n = c.n;
    cfg.k = 2;
    cfg.samples = 100'000;
    cfg.seed = 0;
    const auto r = conditioned_estimate(f, cfg);
    const double sigma = r.ci_half_width / kZ95;
    const double z = std::abs(r.p_hat - exact) / sigma;
    o.require(r.accepted == cfg.samples && z <= 3.0, std::string(c.name) + " off by " + fmt("%.2f", z) + " sigma");
    details += std::string(details.empty() ? "" : ", ") + c.name + " " + fmt("%.2f", z) + " sigma";
  }
  if (o.pass) o.detail = details;
  return o;
}

Outcome c7_mean_protected() {
  Outcome o;
  const auto cayley = fam("cayley");
  GWConfig cfg;
  cfg.target_n = 400;
  cfg.k = 2;
  cfg.samples = 20'000;
  const auto r = mean_protected(cayley, cfg);
  const double target = std::exp(-1.0 / std::exp(1.0));
  o.require(r.accepted >= 20'000, "accepted " + std::to_string(r.accepted));
  o.require(std::abs(r.mean_protected - target) <= 0.05, "mean " + fmt("%.6f", r.mean_protected));
  GWConfig zero = cfg;
  zero.k = 0;
  zero.samples = 200;
  const auto r0 = mean_protected(cayley, zero);
  o.require(r0.mean_protected == 1.0, "k=0 mean " + fmt("%.17g", r0.mean_protected));
  if (o.pass) {
    o.detail = "mean " + fmt("%.5f", r.mean_protected) + " +- " + fmt("%.5f", r.mean_protected_ci) + " vs " +
               fmt("%.5f", target) + "; k=0 gives 1";
  }
  return o;
}

Outcome c8_otter() {
  Outcome o;
  struct Case {
    const char* name;
    std::size_t n;
  };
  std::string details;
  for (const Case c : {Case{"plane", 101}, Case{"binary", 201}, Case{"cayley", 50}}) {
    const auto f = fam(c.name);
    const double q = otter_asymptotic(f, c.n) / to_double(solve_g(f, c.n)[c.n]);
    o.require(q >= 0.98 && q <= 1.02, std::string(c.name) + " ratio " + fmt("%.5f", q));
    details += std::string(details.empty() ? "" : ", ") + c.name + " " + fmt("%.5f", q);
  }
  if (o.pass) o.detail = details;
  return o;
}

Outcome c9_generalized() {
  Outcome o;
  for (const char* name : {"plane", "cayley", "binary", "motzkin"}) {
    const auto f = fam(name);
    for (unsigned k = 0; k <= 5; ++k) {
      o.require(generalized_scheme(f, {0}, k, 30) == iterate_scheme(f, k, 30).series,
                std::string(name) + " k=" + std::to_string(k));
    }
  }
  const double c = limit_constant_generalized(fam("plane"), {0, 1}, 1);
  o.require(std::abs(c - 0.75) <= 1e-12, "plane {0,1} limit " + fmt("%.15g", c));
  if (o.pass) o.detail = "I = {0} matches for k <= 5; plane {0,1} limit " + fmt("%.15g", c);
  return o;
}

struct Run {
  std::string out;
  int status = -1;
};

Run run(const std::string& cmd) {
  Run r;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  r.status = pclose(p);
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome c10_determinism() {
  Outcome o;
  const std::string cli = GWB_CLI_PATH;
  const std::vector<std::string> commands = {
      "apex --family plane",
      "apex --family binary",
      "coeffs --family plane --k 2 --n-max 40",
      "coeffs --family cayley --k 3 --trunc 30",
      "limit --family cayley --k 3",
      "limit --family binary --k 12",
      "simulate --family plane --n 10 --k 2 --samples 20000 --seed 5",
      "simulate --family cayley --n 25 --k 2 --samples 5000 --seed 11",
      "mean-protected --family cayley --n 40 --k 2 --samples 3000 --seed 3",
      "oracle --family binary --n-max 9 --k 2",
  };
  std::size_t runs = 0;
  for (const auto& c : commands) {
    for (const char* format : {"csv", "json"}) {
      const std::string base = cli + " " + c + " --format " + format;
      const auto a = run(base + " --threads 1");
      const auto b = run(base + " --threads 8");
      o.require(a.status == 0 && b.status == 0, "nonzero exit: " + c);
      o.require(!a.out.empty() && a.out == b.out, "output differs: " + c + " " + format);
      runs += 2;
    }
  }
  const std::string d1 = "acceptance_dump_1.jsonl";
  const std::string d2 = "acceptance_dump_8.jsonl";
  const std::string dump = cli + " oracle --family motzkin --n-max 8 --k 1 --dump ";
  const auto a = run(dump + d1 + " --threads 1");
  const auto b = run(dump + d2 + " --threads 8");
  const std::string t1 = slurp(d1);
  o.require(a.status == 0 && b.status == 0 && a.out == b.out && !t1.empty() && t1 == slurp(d2), "oracle dump differs");
  std::remove(d1.c_str());
  std::remove(d2.c_str());
  runs += 2;
  if (o.pass) o.detail = std::to_string(runs) + " runs, byte-identical pairs";
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;  // 0: no runtime bound
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "coefficient goldens", 1.0, c1_goldens},
      {2, "oracle equivalence", 10.0, c2_oracle},
      {3, "limit constants", 1.0, c3_limits},
      {4, "recurrence and closed-form agreement", 0.0, c4_cross},
      {5, "convergence trend", 30.0, c5_trend},
      {6, "Monte Carlo vs exact", 60.0, c6_monte_carlo},
      {7, "mean protected nodes", 0.0, c7_mean_protected},
      {8, "Otter asymptotic", 0.0, c8_otter},
      {9, "generalized scheme", 0.0, c9_generalized},
      {10, "CLI determinism", 0.0, c10_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", c.budget_s) + " s budget";
    }
    std::printf("criterion %2d %s: %s (%s) [%.2f s]\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
