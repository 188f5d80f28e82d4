#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gwborder/series.hpp"

namespace gwb {

// How psi is represented. Polynomials carry their coefficients; the other two
// kinds are rules b_j = 1 and b_j = 1/j! with closed-form composition.
enum class PsiKind { polynomial, geometric, exponential };

// An offspring generating function psi(z) = sum b_j z^j with b_0 > 0,
// nonnegative coefficients, and at least one b_j > 0 for j >= 1.
//
// Immutable after construction; all members are safe to call concurrently.
class OffspringFamily {
 public:
  // cayley (e^z), plane (1/(1-z)), binary (1+z^2), motzkin (1+z+z^2),
  // unary (1+z).
  static OffspringFamily builtin(std::string_view name);
  static OffspringFamily polynomial(std::string name, std::vector<Rational> coeffs);
  // {"coeffs": ["1","0","1"], "egf": false, "name": "optional"}; with "egf"
  // true entry j is divided by j!.
  static OffspringFamily from_json(std::string_view text);

  const std::string& name() const noexcept { return name_; }
  PsiKind kind() const noexcept { return kind_; }
  // Radius of convergence; +inf for entire psi.
  double radius() const noexcept { return radius_; }
  // Degree for polynomial psi, nullopt otherwise.
  std::optional<std::size_t> degree() const;

  Rational coeff(std::size_t j) const;
  bool in_support(std::size_t j) const { return sgn(coeff(j)) > 0; }

  // Q = gcd of {j > 0 : b_j > 0}. For the rule kinds this is 1; for
  // polynomials it is exact.
  unsigned span() const noexcept { return span_; }

  // Apex when known in closed form (built-ins).
  std::optional<double> known_apex() const noexcept { return known_apex_; }

  ExactSeries psi_series(std::size_t trunc) const;

  // psi(h) truncated at h.trunc(); h must vanish at 0.
  ExactSeries apply(const ExactSeries& h) const;

  // Coefficients 0..=upto of psi(z)^power, from the first-order linear ODE
  // q P' = power * p P where psi'/psi = p/q.
  std::vector<Rational> power_coefficients(unsigned power, std::size_t upto) const;

  // d-th derivative of psi at t (d <= 2). Polynomials are summed directly;
  // rule kinds are summed until the ratio-test tail bound drops below
  // 1e-17 of the partial sum.
  double psi(double t, unsigned d = 0) const;

  // Same sum with the indices in `excluded` (sorted) left out, e.g. {0}
  // gives psi(t) - b_0 without cancellation for small t.
  double psi_partial(double t, unsigned d, std::span<const std::size_t> excluded) const;

 private:
  OffspringFamily() = default;

  std::string name_;
  PsiKind kind_ = PsiKind::polynomial;
  std::vector<Rational> poly_;  // polynomial kind only
  double radius_ = std::numeric_limits<double>::infinity();
  unsigned span_ = 1;
  std::optional<double> known_apex_;
  // psi'/psi = p/q as polynomial coefficient lists.
  std::vector<Rational> logderiv_p_;
  std::vector<Rational> logderiv_q_;
};

struct KhinchinQuantities {
  double tau = 0.0;
  double rho = 0.0;
  unsigned span = 1;
  double sigma_tau = 0.0;
  double psi_tau = 0.0;
};

// Mean function m(t) = t psi'(t) / psi(t) on [0, R).
double mean_fn(const OffspringFamily& fam, double t);
// sigma^2(t) = t m'(t) on (0, R), with m' from psi' and psi''.
double variance_fn(const OffspringFamily& fam, double t);

// Apex tau (m(tau) = 1) and derived quantities. Throws Errc::not_in_kstar
// when m stays <= 1 on [0, R).
KhinchinQuantities apex(const OffspringFamily& fam);

// Solution g of g = z psi(g) with A_n = coeff_{n-1}(psi^n) / n, exact.
ExactSeries solve_g(const OffspringFamily& fam, std::size_t trunc);

// A_n by Lagrange's formula using a literal series power; the slow route,
// kept as an independent check on solve_g.
Rational lagrange_coefficient_naive(const OffspringFamily& fam, std::size_t n);

// coeff_n(H(g)) = coeff_{n-1}(H'(z) psi(z)^n) / n for n >= 1.
Rational coeff_H_of_g(const OffspringFamily& fam, const ExactSeries& H, std::size_t n);

// Right-hand side of the Otter / Meir-Moon asymptotic for A_n, n = 1 mod Q.
double otter_asymptotic(const OffspringFamily& fam, std::size_t n);
// Natural log of the same quantity; finite for every n.
double otter_log_asymptotic(const OffspringFamily& fam, std::size_t n);

// Natural log of a positive rational.
double log_value(const Rational& q);

// pgf of Y_t: coefficients b_j t^j / psi(t), truncated where the remaining
// mass drops below 1e-16 (exact degree for polynomials).
FloatSeries tilted_pgf(const OffspringFamily& fam, double t);

struct ProgenyPgf {
  FloatSeries series;
  bool defective = false;  // t > tau: total progeny is infinite with positive probability
};

// pgf of #T_t: coeff_n = A_n t^(n-1) / psi(t)^n.
ProgenyPgf progeny_pgf(const OffspringFamily& fam, double t, std::size_t trunc);

// q(t): 1 on [0, tau]; beyond, the least fixed point of psi_t.
double extinction_prob(const OffspringFamily& fam, double t);

}  // namespace gwb
