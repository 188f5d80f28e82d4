#include "gwborder/series.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "gwborder/error.hpp"
#include "gwborder/parallel.hpp"

namespace gwb {

Rational parse_rational(const std::string& text) {
  auto digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  const auto slash = body.find('/');
  const bool ok = slash == std::string_view::npos
                      ? digits(body)
                      : digits(body.substr(0, slash)) && digits(body.substr(slash + 1));
  if (!ok) throw Error(Errc::invalid_argument, "malformed rational '" + text + "'");

  std::string clean = text;
  if (!clean.empty() && clean.front() == '+') clean.erase(0, 1);
  mpq_class q;
  if (slash != std::string_view::npos) {
    mpz_class den(std::string(body.substr(slash + 1)));
    if (den == 0) throw Error(Errc::invalid_argument, "zero denominator in '" + text + "'");
  }
  q.set_str(clean, 10);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

long double to_long_double(const Rational& q) {
  if (sgn(q) == 0) return 0.0L;
  long en = 0;
  long ed = 0;
  const double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  const double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::ldexp(static_cast<long double>(mn) / md, static_cast<int>(en - ed));
}

namespace {

// Numerators of c[0..=upto] over their least common denominator.
struct ScaledIntegers {
  std::vector<mpz_class> num;
  mpz_class den{1};
};

ScaledIntegers scale_to_integers(std::span<const Rational> c, std::size_t upto) {
  ScaledIntegers out;
  for (std::size_t i = 0; i <= upto; ++i) {
    mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), c[i].get_den_mpz_t());
  }
  out.num.resize(upto + 1);
  for (std::size_t i = 0; i <= upto; ++i) {
    mpz_divexact(out.num[i].get_mpz_t(), out.den.get_mpz_t(), c[i].get_den_mpz_t());
    out.num[i] *= c[i].get_num();
  }
  return out;
}

Rational make_rational(const mpz_class& num, const mpz_class& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

template <typename C>
void check_coeff(const C& c) {
  if constexpr (std::is_same_v<C, double>) {
    if (!std::isfinite(c)) throw Error(Errc::domain, "non-finite coefficient in float series");
  }
}

ExactSeries mul_exact(const ExactSeries& a, const ExactSeries& b) {
  const std::size_t t = std::min(a.trunc(), b.trunc());
  const auto sa = scale_to_integers(a.coeffs(), t);
  const auto sb = scale_to_integers(b.coeffs(), t);
  const mpz_class den = sa.den * sb.den;
  std::vector<Rational> out(t + 1);
  parallel_for(t + 1, [&](std::size_t m) {
    mpz_class acc;
    for (std::size_t i = 0; i <= m; ++i) {
      if (mpz_sgn(sa.num[i].get_mpz_t()) == 0) continue;
      const auto& rhs = sb.num[m - i];
      if (mpz_sgn(rhs.get_mpz_t()) == 0) continue;
      mpz_addmul(acc.get_mpz_t(), sa.num[i].get_mpz_t(), rhs.get_mpz_t());
    }
    out[m] = make_rational(acc, den);
  });
  return ExactSeries(std::move(out));
}

FloatSeries mul_float(const FloatSeries& a, const FloatSeries& b) {
  const std::size_t t = std::min(a.trunc(), b.trunc());
  std::vector<double> out(t + 1, 0.0);
  for (std::size_t m = 0; m <= t; ++m) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= m; ++i) acc += a[i] * b[m - i];
    out[m] = acc;
  }
  return FloatSeries(std::move(out));
}

// With a = N/D and c = N_0: 1/a = D * G_m / c^(m+1) where
// G_0 = 1, G_m = -sum_{i=1..m} N_i c^(i-1) G_(m-i). All-integer recurrence.
ExactSeries reciprocal_exact(const ExactSeries& a) {
  const std::size_t t = a.trunc();
  const auto s = scale_to_integers(a.coeffs(), t);
  const mpz_class& c = s.num[0];
  std::vector<mpz_class> weighted(t + 1);
  mpz_class c_pow = 1;  // c^(i-1)
  for (std::size_t i = 1; i <= t; ++i) {
    weighted[i] = s.num[i] * c_pow;
    c_pow *= c;
  }
  std::vector<mpz_class> g(t + 1);
  g[0] = 1;
  for (std::size_t m = 1; m <= t; ++m) {
    mpz_class acc;
    for (std::size_t i = 1; i <= m; ++i) {
      if (mpz_sgn(weighted[i].get_mpz_t()) == 0) continue;
      mpz_addmul(acc.get_mpz_t(), weighted[i].get_mpz_t(), g[m - i].get_mpz_t());
    }
    g[m] = -acc;
  }
  std::vector<Rational> out(t + 1);
  mpz_class c_den = c;  // c^(m+1)
  for (std::size_t m = 0; m <= t; ++m) {
    out[m] = make_rational(s.den * g[m], c_den);
    c_den *= c;
  }
  return ExactSeries(std::move(out));
}

// Writing h_i = H_i / (i! D) with integers H_i, the coefficients of exp(h)
// are F_m / (m! D^m) where
//   F_0 = 1, F_m = sum_{i=1..m} C(m-1, i-1) H_i D^(i-1) F_(m-i).
// For egf-integral h (every Cayley level) D = 1 and the sizes stay small.
ExactSeries exp_exact(const ExactSeries& h) {
  const std::size_t t = h.trunc();
  std::vector<Rational> scaled(t + 1);
  mpz_class fact = 1;
  for (std::size_t i = 1; i <= t; ++i) {
    fact *= static_cast<unsigned long>(i);
    scaled[i] = h[i] * fact;
  }
  const auto s = scale_to_integers(scaled, t);
  std::vector<mpz_class> weighted(t + 1);
  mpz_class d_pow = 1;  // D^(i-1)
  for (std::size_t i = 1; i <= t; ++i) {
    weighted[i] = s.num[i] * d_pow;
    d_pow *= s.den;
  }
  std::vector<mpz_class> f(t + 1);
  f[0] = 1;
  mpz_class binom;
  mpz_class term;
  for (std::size_t m = 1; m <= t; ++m) {
    mpz_class acc;
    binom = 1;  // C(m-1, i-1)
    for (std::size_t i = 1; i <= m; ++i) {
      if (mpz_sgn(weighted[i].get_mpz_t()) != 0 && mpz_sgn(f[m - i].get_mpz_t()) != 0) {
        mpz_mul(term.get_mpz_t(), binom.get_mpz_t(), weighted[i].get_mpz_t());
        mpz_addmul(acc.get_mpz_t(), term.get_mpz_t(), f[m - i].get_mpz_t());
      }
      binom *= static_cast<unsigned long>(m - i);
      mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), static_cast<unsigned long>(i));
    }
    f[m] = std::move(acc);
  }
  std::vector<Rational> out(t + 1);
  out[0] = 1;
  mpz_class den = 1;  // m! D^m
  for (std::size_t m = 1; m <= t; ++m) {
    den *= static_cast<unsigned long>(m);
    den *= s.den;
    out[m] = make_rational(f[m], den);
  }
  return ExactSeries(std::move(out));
}

}  // namespace

template <typename C>
Series<C>::Series(std::vector<C> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(Errc::invalid_argument, "series needs at least one coefficient");
  for (auto& c : coeffs_) {
    if constexpr (std::is_same_v<C, Rational>) {
      c.canonicalize();
    } else {
      check_coeff(c);
    }
  }
}

template <typename C>
Series<C> Series<C>::constant(const C& c, std::size_t trunc) {
  std::vector<C> v(trunc + 1, C(0));
  v[0] = c;
  return Series(std::move(v));
}

template <typename C>
Series<C> Series<C>::monomial(const C& c, std::size_t degree, std::size_t trunc) {
  std::vector<C> v(trunc + 1, C(0));
  if (degree <= trunc) v[degree] = c;
  return Series(std::move(v));
}

template <typename C>
Series<C> Series<C>::truncated(std::size_t t) const {
  if (t > trunc()) throw Error(Errc::invalid_argument, "cannot raise truncation order by truncating");
  return Series(std::vector<C>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(t) + 1));
}

template <typename C>
Series<C> add(const Series<C>& a, const Series<C>& b) {
  const std::size_t t = std::min(a.trunc(), b.trunc());
  std::vector<C> out(t + 1);
  for (std::size_t i = 0; i <= t; ++i) out[i] = a[i] + b[i];
  return Series<C>(std::move(out));
}

template <typename C>
Series<C> sub(const Series<C>& a, const Series<C>& b) {
  const std::size_t t = std::min(a.trunc(), b.trunc());
  std::vector<C> out(t + 1);
  for (std::size_t i = 0; i <= t; ++i) out[i] = a[i] - b[i];
  return Series<C>(std::move(out));
}

template <typename C>
Series<C> scale(const Series<C>& a, const C& factor) {
  std::vector<C> out(a.trunc() + 1);
  for (std::size_t i = 0; i <= a.trunc(); ++i) out[i] = a[i] * factor;
  return Series<C>(std::move(out));
}

template <typename C>
Series<C> mul(const Series<C>& a, const Series<C>& b) {
  if constexpr (std::is_same_v<C, Rational>) {
    return mul_exact(a, b);
  } else {
    return mul_float(a, b);
  }
}

template <typename C>
Series<C> pow(const Series<C>& a, unsigned e) {
  Series<C> result = Series<C>::constant(C(1), a.trunc());
  Series<C> base = a;
  while (e > 0) {
    if (e & 1U) result = mul(result, base);
    e >>= 1U;
    if (e > 0) base = mul(base, base);
  }
  return result;
}

template <typename C>
Series<C> compose(const Series<C>& outer, const Series<C>& inner) {
  if (inner[0] != C(0)) {
    throw Error(Errc::invalid_argument, "compose: inner series must have a zero constant term");
  }
  const std::size_t t = std::min(outer.trunc(), inner.trunc());
  const Series<C> in = inner.truncated(t);
  Series<C> result = Series<C>::constant(outer[t], t);
  for (std::size_t j = t; j-- > 0;) {
    result = add(mul(result, in), Series<C>::constant(outer[j], t));
  }
  return result;
}

template <typename C>
Series<C> shift(const Series<C>& a, std::size_t d) {
  std::vector<C> out(a.trunc() + d + 1, C(0));
  for (std::size_t i = 0; i <= a.trunc(); ++i) out[i + d] = a[i];
  return Series<C>(std::move(out));
}

template <typename C>
Series<C> derivative(const Series<C>& a) {
  if (a.trunc() == 0) return Series<C>::zero(0);
  std::vector<C> out(a.trunc());
  for (std::size_t i = 1; i <= a.trunc(); ++i) {
    if constexpr (std::is_same_v<C, Rational>) {
      out[i - 1] = a[i] * static_cast<unsigned long>(i);
    } else {
      out[i - 1] = a[i] * static_cast<double>(i);
    }
  }
  return Series<C>(std::move(out));
}

template <typename C>
Series<C> reciprocal(const Series<C>& a) {
  if (a[0] == C(0)) throw Error(Errc::invalid_argument, "reciprocal: zero constant term");
  if constexpr (std::is_same_v<C, Rational>) {
    return reciprocal_exact(a);
  } else {
    const std::size_t t = a.trunc();
    std::vector<double> f(t + 1, 0.0);
    f[0] = 1.0 / a[0];
    for (std::size_t m = 1; m <= t; ++m) {
      double acc = 0.0;
      for (std::size_t i = 1; i <= m; ++i) acc += a[i] * f[m - i];
      f[m] = -acc / a[0];
    }
    return FloatSeries(std::move(f));
  }
}

// E' = h' E, i.e. m E_m = sum_{i=1..m} i h_i E_(m-i).
template <typename C>
Series<C> exp(const Series<C>& h) {
  if (h[0] != C(0)) throw Error(Errc::invalid_argument, "exp: series must have a zero constant term");
  const std::size_t t = h.trunc();
  std::vector<C> e(t + 1, C(0));
  e[0] = C(1);
  if constexpr (std::is_same_v<C, Rational>) {
    return exp_exact(h);
  } else {
    for (std::size_t m = 1; m <= t; ++m) {
      double acc = 0.0;
      for (std::size_t i = 1; i <= m; ++i) acc += static_cast<double>(i) * h[i] * e[m - i];
      e[m] = acc / static_cast<double>(m);
    }
  }
  return Series<C>(std::move(e));
}

double eval(const FloatSeries& a, double t) {
  double acc = 0.0;
  for (std::size_t j = a.trunc() + 1; j-- > 0;) acc = acc * t + a[j];
  return acc;
}

double eval(const ExactSeries& a, double t) {
  long double acc = 0.0L;
  for (std::size_t j = a.trunc() + 1; j-- > 0;) acc = acc * t + to_long_double(a[j]);
  return static_cast<double>(acc);
}

double to_double(const Rational& q) { return static_cast<double>(to_long_double(q)); }

FloatSeries to_float(const ExactSeries& a) {
  std::vector<double> out(a.trunc() + 1);
  for (std::size_t i = 0; i <= a.trunc(); ++i) out[i] = to_double(a[i]);
  return FloatSeries(std::move(out));
}

bool is_integral(const ExactSeries& a) {
  return std::all_of(a.coeffs().begin(), a.coeffs().end(), [](const Rational& q) { return q.get_den() == 1; });
}

#define GWB_INSTANTIATE(C)                                            \
  template class Series<C>;                                           \
  template Series<C> add(const Series<C>&, const Series<C>&);         \
  template Series<C> sub(const Series<C>&, const Series<C>&);         \
  template Series<C> scale(const Series<C>&, const C&);               \
  template Series<C> mul(const Series<C>&, const Series<C>&);         \
  template Series<C> pow(const Series<C>&, unsigned);                 \
  template Series<C> compose(const Series<C>&, const Series<C>&);     \
  template Series<C> shift(const Series<C>&, std::size_t);            \
  template Series<C> derivative(const Series<C>&);                    \
  template Series<C> reciprocal(const Series<C>&);                    \
  template Series<C> exp(const Series<C>&);

GWB_INSTANTIATE(Rational)
GWB_INSTANTIATE(double)

#undef GWB_INSTANTIATE

}  // namespace gwb
