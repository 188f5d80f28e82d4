#include "gwborder/family.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "json.hpp"

#include "gwborder/error.hpp"
#include "gwborder/parallel.hpp"

namespace gwb {

namespace {

Rational inverse_factorial(std::size_t j) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), j);
  return Rational(mpz_class(1), f);
}

Rational rational_pow(const Rational& base, unsigned e) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

void check_k_membership(const std::vector<Rational>& b, const std::string& name) {
  if (b.empty() || sgn(b[0]) <= 0) {
    throw Error(Errc::invalid_argument, "family '" + name + "': b_0 must be positive");
  }
  bool nonconstant = false;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (sgn(b[j]) < 0) {
      throw Error(Errc::invalid_argument,
                  "family '" + name + "': coefficient b_" + std::to_string(j) + " is negative");
    }
    if (j > 0 && sgn(b[j]) > 0) nonconstant = true;
  }
  if (!nonconstant) throw Error(Errc::invalid_argument, "family '" + name + "': psi is constant");
}

constexpr double kSumTolerance = 1e-17;
constexpr std::size_t kMaxTerms = 50'000'000;

}  // namespace

OffspringFamily OffspringFamily::polynomial(std::string name, std::vector<Rational> coeffs) {
  for (auto& c : coeffs) c.canonicalize();
  while (coeffs.size() > 1 && sgn(coeffs.back()) == 0) coeffs.pop_back();
  check_k_membership(coeffs, name);

  OffspringFamily fam;
  fam.name_ = std::move(name);
  fam.kind_ = PsiKind::polynomial;
  fam.poly_ = std::move(coeffs);
  unsigned q = 0;
  for (std::size_t j = 1; j < fam.poly_.size(); ++j) {
    if (sgn(fam.poly_[j]) > 0) q = std::gcd(q, static_cast<unsigned>(j));
  }
  fam.span_ = q;
  fam.logderiv_q_ = fam.poly_;
  for (std::size_t j = 1; j < fam.poly_.size(); ++j) {
    fam.logderiv_p_.push_back(fam.poly_[j] * static_cast<unsigned long>(j));
  }
  return fam;
}

OffspringFamily OffspringFamily::builtin(std::string_view name) {
  if (name == "cayley") {
    OffspringFamily fam;
    fam.name_ = "cayley";
    fam.kind_ = PsiKind::exponential;
    fam.known_apex_ = 1.0;
    fam.logderiv_p_ = {Rational(1)};
    fam.logderiv_q_ = {Rational(1)};
    return fam;
  }
  if (name == "plane") {
    OffspringFamily fam;
    fam.name_ = "plane";
    fam.kind_ = PsiKind::geometric;
    fam.radius_ = 1.0;
    fam.known_apex_ = 0.5;
    fam.logderiv_p_ = {Rational(1)};
    fam.logderiv_q_ = {Rational(1), Rational(-1)};
    return fam;
  }
  if (name == "binary") {
    auto fam = polynomial("binary", {Rational(1), Rational(0), Rational(1)});
    fam.known_apex_ = 1.0;
    return fam;
  }
  if (name == "motzkin") {
    auto fam = polynomial("motzkin", {Rational(1), Rational(1), Rational(1)});
    fam.known_apex_ = 1.0;
    return fam;
  }
  if (name == "unary") return polynomial("unary", {Rational(1), Rational(1)});
  throw Error(Errc::invalid_argument, "unknown family '" + std::string(name) +
                                          "' (expected cayley, plane, binary, motzkin or unary)");
}

OffspringFamily OffspringFamily::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::invalid_argument, std::string("family JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("coeffs") || !doc["coeffs"].is_array()) {
    throw Error(Errc::invalid_argument, "family JSON: expected an object with a \"coeffs\" array");
  }
  const bool egf = doc.value("egf", false);
  std::vector<Rational> coeffs;
  for (const auto& entry : doc["coeffs"]) {
    Rational c;
    if (entry.is_string()) {
      c = parse_rational(entry.get<std::string>());
    } else if (entry.is_number_integer()) {
      c = Rational(std::to_string(entry.get<long long>()));
    } else {
      throw Error(Errc::invalid_argument, "family JSON: coefficients must be \"p/q\" strings");
    }
    if (egf) c *= inverse_factorial(coeffs.size());
    coeffs.push_back(c);
  }
  return polynomial(doc.value("name", std::string("custom")), std::move(coeffs));
}

std::optional<std::size_t> OffspringFamily::degree() const {
  if (kind_ != PsiKind::polynomial) return std::nullopt;
  return poly_.size() - 1;
}

Rational OffspringFamily::coeff(std::size_t j) const {
  switch (kind_) {
    case PsiKind::polynomial:
      return j < poly_.size() ? poly_[j] : Rational(0);
    case PsiKind::geometric:
      return Rational(1);
    case PsiKind::exponential:
      return inverse_factorial(j);
  }
  return Rational(0);
}

ExactSeries OffspringFamily::psi_series(std::size_t trunc) const {
  std::vector<Rational> c(trunc + 1);
  if (kind_ == PsiKind::exponential) {
    mpz_class f = 1;
    for (std::size_t j = 0; j <= trunc; ++j) {
      if (j > 0) f *= static_cast<unsigned long>(j);
      c[j] = Rational(mpz_class(1), f);
    }
  } else {
    for (std::size_t j = 0; j <= trunc; ++j) c[j] = coeff(j);
  }
  return ExactSeries(std::move(c));
}

ExactSeries OffspringFamily::apply(const ExactSeries& h) const {
  if (sgn(h[0]) != 0) throw Error(Errc::invalid_argument, "psi(h) needs h(0) = 0");
  const std::size_t t = h.trunc();
  switch (kind_) {
    case PsiKind::geometric:
      return reciprocal(sub(ExactSeries::constant(Rational(1), t), h));
    case PsiKind::exponential:
      return exp(h);
    case PsiKind::polynomial: {
      ExactSeries acc = ExactSeries::constant(poly_.back(), t);
      for (std::size_t j = poly_.size() - 1; j-- > 0;) {
        acc = add(mul(acc, h), ExactSeries::constant(poly_[j], t));
      }
      return acc;
    }
  }
  throw Error(Errc::internal, "unreachable psi kind");
}

// q P' = power * p P, read off at z^(m-1):
//   q_0 m P_m = power * sum_i p_i P_(m-1-i) - sum_{i>=1} q_i (m-i) P_(m-i).
std::vector<Rational> OffspringFamily::power_coefficients(unsigned power, std::size_t upto) const {
  std::vector<Rational> out(upto + 1);
  out[0] = rational_pow(coeff(0), power);
  const Rational& q0 = logderiv_q_[0];
  Rational term;
  for (std::size_t m = 1; m <= upto; ++m) {
    Rational acc;
    for (std::size_t i = 0; i < logderiv_p_.size() && i + 1 <= m; ++i) {
      if (sgn(logderiv_p_[i]) == 0) continue;
      mpq_mul(term.get_mpq_t(), logderiv_p_[i].get_mpq_t(), out[m - 1 - i].get_mpq_t());
      mpq_add(acc.get_mpq_t(), acc.get_mpq_t(), term.get_mpq_t());
    }
    acc *= power;
    for (std::size_t i = 1; i < logderiv_q_.size() && i <= m; ++i) {
      if (sgn(logderiv_q_[i]) == 0 || i == m) continue;
      term = logderiv_q_[i] * out[m - i];
      term *= static_cast<unsigned long>(m - i);
      acc -= term;
    }
    acc /= q0 * static_cast<unsigned long>(m);
    out[m] = acc;
  }
  return out;
}

double OffspringFamily::psi(double t, unsigned d) const { return psi_partial(t, d, {}); }

double OffspringFamily::psi_partial(double t, unsigned d, std::span<const std::size_t> excluded) const {
  if (d > 2) throw Error(Errc::invalid_argument, "psi: derivative order above 2");
  if (!(std::abs(t) < radius_)) {
    throw Error(Errc::domain, "psi evaluated outside its disk of convergence");
  }
  auto skip = [&](std::size_t j) { return std::binary_search(excluded.begin(), excluded.end(), j); };
  if (kind_ == PsiKind::polynomial) {
    double acc = 0.0;
    for (std::size_t j = poly_.size(); j-- > d;) {
      double c = skip(j) ? 0.0 : to_double(poly_[j]);
      for (unsigned r = 0; r < d; ++r) c *= static_cast<double>(j - r);
      acc = acc * t + c;
    }
    return acc;
  }
  // term_j = b_j j!/(j-d)! t^(j-d); successive ratios are nonincreasing for
  // both rule kinds, so term * r / (1 - r) bounds the tail once r < 1.
  double term = (kind_ == PsiKind::geometric && d == 2) ? 2.0 : 1.0;
  double sum = skip(d) ? 0.0 : term;
  for (std::size_t j = d + 1; j < kMaxTerms; ++j) {
    const double coeff_ratio = kind_ == PsiKind::exponential ? 1.0 / static_cast<double>(j) : 1.0;
    const double ratio = coeff_ratio * t * static_cast<double>(j) / static_cast<double>(j - d);
    term *= ratio;
    if (!skip(j)) sum += term;
    const double r = std::abs(ratio);
    if (term == 0.0) return sum;
    if (r < 1.0 && std::abs(term) * r / (1.0 - r) <= kSumTolerance * std::abs(sum)) return sum;
  }
  throw Error(Errc::domain, "psi series did not converge at t = " + std::to_string(t));
}

double mean_fn(const OffspringFamily& fam, double t) {
  if (t < 0.0 || !(t < fam.radius())) throw Error(Errc::domain, "mean_fn: t outside [0, R)");
  if (t == 0.0) return 0.0;
  return t * fam.psi(t, 1) / fam.psi(t, 0);
}

double variance_fn(const OffspringFamily& fam, double t) {
  if (!(t > 0.0) || !(t < fam.radius())) throw Error(Errc::domain, "variance_fn: t outside (0, R)");
  const double p0 = fam.psi(t, 0);
  const double p1 = fam.psi(t, 1);
  const double p2 = fam.psi(t, 2);
  const double dm = (p1 + t * p2) / p0 - t * p1 * p1 / (p0 * p0);
  return t * dm;
}

KhinchinQuantities apex(const OffspringFamily& fam) {
  KhinchinQuantities out;
  out.span = fam.span();
  if (auto known = fam.known_apex()) {
    out.tau = *known;
  } else {
    if (fam.degree() && *fam.degree() < 2) {
      throw Error(Errc::not_in_kstar, "family '" + fam.name() +
                                          "' is not in K*: m(t) stays below 1 (psi has degree 1)");
    }
    const double cap = std::isfinite(fam.radius()) ? fam.radius() * (1.0 - 1e-9) : 1e300;
    double lo = 0.0;
    double hi = std::min(1.0, cap);
    while (mean_fn(fam, hi) <= 1.0) {
      if (hi >= cap) {
        throw Error(Errc::not_in_kstar,
                    "family '" + fam.name() + "' is not in K*: m(t) <= 1 on the checkable range");
      }
      lo = hi;
      hi = std::min(2.0 * hi, cap);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (mean_fn(fam, mid) > 1.0 ? hi : lo) = mid;
    }
    out.tau = 0.5 * (lo + hi);
  }
  out.psi_tau = fam.psi(out.tau);
  out.rho = out.tau / out.psi_tau;
  out.sigma_tau = std::sqrt(variance_fn(fam, out.tau));
  return out;
}

ExactSeries solve_g(const OffspringFamily& fam, std::size_t trunc) {
  if (trunc < 1) throw Error(Errc::invalid_argument, "solve_g: trunc must be at least 1");
  std::vector<Rational> a(trunc + 1);
  parallel_for(trunc, [&](std::size_t i) {
    const std::size_t n = i + 1;
    if ((n - 1) % fam.span() != 0) return;
    const auto p = fam.power_coefficients(static_cast<unsigned>(n), n - 1);
    a[n] = p[n - 1] / static_cast<unsigned long>(n);
  });
  return ExactSeries(std::move(a));
}

Rational lagrange_coefficient_naive(const OffspringFamily& fam, std::size_t n) {
  if (n == 0) return Rational(0);
  const auto p = pow(fam.psi_series(n - 1), static_cast<unsigned>(n));
  return p[n - 1] / static_cast<unsigned long>(n);
}

Rational coeff_H_of_g(const OffspringFamily& fam, const ExactSeries& H, std::size_t n) {
  if (n < 1) throw Error(Errc::invalid_argument, "coeff_H_of_g: n must be at least 1");
  if (H.trunc() < n) {
    throw Error(Errc::invalid_argument, "coeff_H_of_g: H must be known to order " + std::to_string(n));
  }
  const auto p = fam.power_coefficients(static_cast<unsigned>(n), n - 1);
  Rational acc;
  for (std::size_t i = 0; i < n; ++i) {
    acc += H[i + 1] * static_cast<unsigned long>(i + 1) * p[n - 1 - i];
  }
  return acc / static_cast<unsigned long>(n);
}

double otter_log_asymptotic(const OffspringFamily& fam, std::size_t n) {
  const auto k = apex(fam);
  if (n == 0 || (n - 1) % k.span != 0) {
    throw Error(Errc::invalid_argument, "otter_asymptotic: n must satisfy n = 1 mod " +
                                            std::to_string(k.span));
  }
  const double nn = static_cast<double>(n);
  return std::log(k.span / std::sqrt(2.0 * std::numbers::pi)) + std::log(k.tau / k.sigma_tau) -
         1.5 * std::log(nn) + nn * std::log(k.psi_tau / k.tau);
}

double otter_asymptotic(const OffspringFamily& fam, std::size_t n) {
  return std::exp(otter_log_asymptotic(fam, n));
}

double log_value(const Rational& q) {
  if (sgn(q) <= 0) throw Error(Errc::domain, "log of a nonpositive rational");
  long en = 0;
  long ed = 0;
  const double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  const double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::log(mn / md) + static_cast<double>(en - ed) * std::numbers::ln2;
}

FloatSeries tilted_pgf(const OffspringFamily& fam, double t) {
  if (!(t > 0.0) || !(t < fam.radius())) throw Error(Errc::domain, "tilted_pgf: t outside (0, R)");
  const double norm = fam.psi(t);
  std::vector<double> p;
  if (auto deg = fam.degree()) {
    double tj = 1.0;
    for (std::size_t j = 0; j <= *deg; ++j, tj *= t) p.push_back(to_double(fam.coeff(j)) * tj / norm);
    return FloatSeries(std::move(p));
  }
  double term = 1.0 / norm;  // b_0 = 1 for both rule kinds
  p.push_back(term);
  for (std::size_t j = 1; j < kMaxTerms; ++j) {
    const double ratio = (fam.kind() == PsiKind::exponential ? 1.0 / static_cast<double>(j) : 1.0) * t;
    term *= ratio;
    p.push_back(term);
    if (ratio < 1.0 && term * ratio / (1.0 - ratio) < 1e-16) break;
  }
  return FloatSeries(std::move(p));
}

ProgenyPgf progeny_pgf(const OffspringFamily& fam, double t, std::size_t trunc) {
  if (t < 0.0 || !(t < fam.radius())) throw Error(Errc::domain, "progeny_pgf: t outside [0, R)");
  std::vector<double> c(trunc + 1, 0.0);
  ProgenyPgf out{FloatSeries::zero(trunc), false};
  if (t == 0.0) {
    if (trunc >= 1) c[1] = 1.0;
    out.series = FloatSeries(std::move(c));
    return out;
  }
  try {
    out.defective = t > apex(fam).tau;
  } catch (const Error& e) {
    if (e.code() != Errc::not_in_kstar) throw;
  }
  const auto g = solve_g(fam, trunc);
  const long double x = static_cast<long double>(t) / fam.psi(t);
  for (std::size_t n = 1; n <= trunc; ++n) {
    c[n] = static_cast<double>(to_long_double(g[n]) * std::pow(x, static_cast<long double>(n)) / t);
  }
  out.series = FloatSeries(std::move(c));
  return out;
}

double extinction_prob(const OffspringFamily& fam, double t) {
  if (t < 0.0 || !(t < fam.radius())) throw Error(Errc::domain, "extinction_prob: t outside [0, R)");
  if (t == 0.0) return 1.0;
  try {
    if (t <= apex(fam).tau) return 1.0;
  } catch (const Error& e) {
    if (e.code() != Errc::not_in_kstar) throw;
    return 1.0;  // m(t) < 1 everywhere: subcritical for every t
  }
  const double norm = fam.psi(t);
  double x = 0.0;
  for (int it = 0; it < 10'000'000; ++it) {
    const double next = fam.psi(t * x) / norm;
    if (std::abs(next - x) <= 1e-16) return next;
    x = next;
  }
  throw Error(Errc::internal, "extinction_prob: fixed-point iteration did not settle");
}

}  // namespace gwb
