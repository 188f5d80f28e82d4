#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace gwb {

using Rational = mpq_class;

// Parses "p", "p/q" or "-p/q" into a canonical rational. Throws Error on
// malformed text or a zero denominator.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
// Extended-range conversion; finite for any rational that fits in a long double.
long double to_long_double(const Rational& q);

// Truncated formal power series c_0 + c_1 z + ... + c_T z^T. The truncation
// order T is explicit state: every coefficient above T is unknown, and binary
// operations return the smaller of the operand truncations.
//
// Coeff is either Rational (exact mode) or double (float mode). Exact
// coefficients are kept canonical; float coefficients are always finite.
template <typename Coeff>
class Series {
 public:
  using coeff_type = Coeff;

  // The zero series with truncation order 0.
  Series() : coeffs_(1, Coeff(0)) {}

  // Truncation order is coeffs.size() - 1; coeffs must be non-empty.
  explicit Series(std::vector<Coeff> coeffs);

  static Series zero(std::size_t trunc) { return Series(std::vector<Coeff>(trunc + 1, Coeff(0))); }
  static Series constant(const Coeff& c, std::size_t trunc);
  // c * z^degree, truncated at trunc (zero if degree > trunc).
  static Series monomial(const Coeff& c, std::size_t degree, std::size_t trunc);

  std::size_t trunc() const noexcept { return coeffs_.size() - 1; }
  const Coeff& operator[](std::size_t i) const { return coeffs_.at(i); }
  std::span<const Coeff> coeffs() const noexcept { return coeffs_; }

  // Drops every coefficient above t; t must not exceed trunc().
  Series truncated(std::size_t t) const;

  bool operator==(const Series& other) const { return coeffs_ == other.coeffs_; }

 private:
  std::vector<Coeff> coeffs_;
};

using ExactSeries = Series<Rational>;
using FloatSeries = Series<double>;

template <typename C>
Series<C> add(const Series<C>& a, const Series<C>& b);
template <typename C>
Series<C> sub(const Series<C>& a, const Series<C>& b);
template <typename C>
Series<C> scale(const Series<C>& a, const C& factor);

// Cauchy product truncated at min(a.trunc, b.trunc). In exact mode the
// convolution runs over integer numerators brought to a common denominator,
// parallelized across output indices.
template <typename C>
Series<C> mul(const Series<C>& a, const Series<C>& b);

// a^e by repeated squaring; pow(a, 0) is the constant 1 at a's truncation.
template <typename C>
Series<C> pow(const Series<C>& a, unsigned e);

// outer(inner) by Horner's rule. inner must have a zero constant term.
template <typename C>
Series<C> compose(const Series<C>& outer, const Series<C>& inner);

// Multiplication by z^d. The truncation order grows by d.
template <typename C>
Series<C> shift(const Series<C>& a, std::size_t d);

// d/dz; truncation order drops by one (stays 0 for a constant).
template <typename C>
Series<C> derivative(const Series<C>& a);

// 1/a, requires a[0] != 0.
template <typename C>
Series<C> reciprocal(const Series<C>& a);

// exp(h), requires h[0] == 0.
template <typename C>
Series<C> exp(const Series<C>& h);

// Horner evaluation of the truncated polynomial at t.
double eval(const FloatSeries& a, double t);
double eval(const ExactSeries& a, double t);

FloatSeries to_float(const ExactSeries& a);

// True when every coefficient has denominator 1.
bool is_integral(const ExactSeries& a);

}  // namespace gwb
