#include "gwborder/border.hpp"

#include <algorithm>
#include <cmath>

#include "gwborder/error.hpp"

namespace gwb {

namespace {

constexpr std::size_t kHead[] = {0};

void check_exact_level(unsigned k) {
  if (k > kMaxExactLevel) {
    throw Error(Errc::invalid_argument,
                "level " + std::to_string(k) + " exceeds the exact-series cap " + std::to_string(kMaxExactLevel));
  }
}

void check_scalar_level(unsigned k) {
  if (k > kMaxScalarLevel) {
    throw Error(Errc::invalid_argument,
                "level " + std::to_string(k) + " exceeds the scalar cap " + std::to_string(kMaxScalarLevel));
  }
}

bool is_binary_polynomial(const OffspringFamily& fam) {
  return fam.degree() == 2u && fam.coeff(0) == 1 && fam.coeff(1) == 0 && fam.coeff(2) == 1;
}

// Sorted, deduplicated, containing 0, inside the support, and missing at
// least one support index.
std::vector<std::size_t> validate_index_set(const OffspringFamily& fam, std::vector<std::size_t> index_set) {
  std::sort(index_set.begin(), index_set.end());
  index_set.erase(std::unique(index_set.begin(), index_set.end()), index_set.end());
  if (index_set.empty() || index_set.front() != 0) {
    throw Error(Errc::invalid_argument, "index set must contain 0");
  }
  for (std::size_t i : index_set) {
    if (!fam.in_support(i)) {
      throw Error(Errc::invalid_argument, "index " + std::to_string(i) + " is outside the support of psi");
    }
  }
  if (auto deg = fam.degree()) {
    std::size_t support = 0;
    for (std::size_t j = 0; j <= *deg; ++j) support += fam.in_support(j) ? 1 : 0;
    if (support == index_set.size()) {
      throw Error(Errc::invalid_argument, "index set must be a proper subset of the support of psi");
    }
  }
  return index_set;
}

ExactSeries next_level(const OffspringFamily& fam, const ExactSeries& prev) {
  const std::size_t t = prev.trunc();
  auto inner = sub(fam.apply(prev), ExactSeries::constant(fam.coeff(0), t));
  return shift(inner, 1).truncated(t);
}

}  // namespace

std::vector<ExactSeries> iterate_levels(const OffspringFamily& fam, const ExactSeries& g, unsigned k) {
  check_exact_level(k);
  std::vector<ExactSeries> levels{g};
  levels.reserve(k + 1);
  for (unsigned j = 1; j <= k; ++j) levels.push_back(next_level(fam, levels.back()));
  return levels;
}

BorderSeries iterate_scheme(const OffspringFamily& fam, unsigned k, std::size_t trunc) {
  check_exact_level(k);
  auto g = solve_g(fam, trunc);
  for (unsigned j = 1; j <= k; ++j) g = next_level(fam, g);
  return BorderSeries{k, std::move(g), fam.name()};
}

Rational exact_conditional_prob(const OffspringFamily& fam, unsigned k, std::size_t n) {
  const unsigned q = fam.span();
  if (n < 1 || (n - 1) % q != 0) {
    throw Error(Errc::invalid_argument, "n = " + std::to_string(n) + " is outside the valid class: Q = " +
                                            std::to_string(q) + ", need n = 1 mod " + std::to_string(q));
  }
  check_exact_level(k);
  const auto g = solve_g(fam, n);
  if (k == 0) return Rational(1);
  const auto levels = iterate_levels(fam, g, k);
  return levels.back()[n] / g[n];
}

LimitConstant limit_constant(const OffspringFamily& fam, unsigned k) {
  check_scalar_level(k);
  const auto kq = apex(fam);
  LimitConstant out;
  out.k = k;
  out.trajectory.reserve(k);
  double g = kq.tau;
  for (unsigned j = 0; j < k; ++j) {
    out.trajectory.push_back(g);
    if (g == 0.0) out.underflow = true;
    out.value *= kq.rho * fam.psi(g, 1);
    g = kq.rho * fam.psi_partial(g, 0, kHead);
  }
  if (!std::isfinite(out.value) || out.value < 0.0 || out.value > 1.0 + 1e-12) {
    throw Error(Errc::internal, "limit constant left [0, 1] at k = " + std::to_string(k));
  }

  if (fam.kind() == PsiKind::exponential) {
    out.closed_form = cayley_recurrence(k);
  } else if (fam.kind() == PsiKind::geometric) {
    const double x = std::ldexp(1.0, -2 * static_cast<int>(std::min(k, 600u)));  // 4^-k
    out.closed_form = 9.0 * x / ((1.0 + 2.0 * x) * (1.0 + 2.0 * x));
  } else if (is_binary_polynomial(fam)) {
    // 2^(k - 2^k + 1) is below the smallest subnormal from k = 11 on.
    out.closed_form = k > 10 ? 0.0 : std::ldexp(1.0, static_cast<int>(k) - (1 << k) + 1);
  }
  return out;
}

double cayley_recurrence(unsigned k) {
  check_scalar_level(k);
  const double inv_e = std::exp(-1.0);
  double c = 1.0;
  double G = 1.0;  // G_0(1/e, 1) = 1
  for (unsigned j = 1; j <= k; ++j) {
    c *= inv_e * std::exp(G);
    G = inv_e * std::expm1(G);
  }
  return c;
}

double plane_closed_iterate(double z, double w, unsigned k) {
  if (k == 0) return w;
  const double zk = std::pow(z, static_cast<double>(k));
  const double s = z == 1.0 ? static_cast<double>(k) : (1.0 - zk) / (1.0 - z);
  const double den = 1.0 - s * w;
  if (std::abs(den) < 1e-300) throw Error(Errc::domain, "plane iterate: vanishing denominator");
  return zk * w / den;
}

double plane_closed_iterate_dw(double z, double w, unsigned k) {
  if (k == 0) return 1.0;
  const double zk = std::pow(z, static_cast<double>(k));
  const double s = z == 1.0 ? static_cast<double>(k) : (1.0 - zk) / (1.0 - z);
  const double den = 1.0 - s * w;
  if (std::abs(den) < 1e-300) throw Error(Errc::domain, "plane iterate: vanishing denominator");
  return zk / (den * den);
}

namespace {

// x^(2^k - 1) as the product x^(2^0) x^(2^1) ... x^(2^(k-1)).
double pow_mersenne(double x, unsigned k) {
  double acc = 1.0;
  for (unsigned j = 0; j < k; ++j) {
    acc *= x;
    x *= x;
  }
  return acc;
}

void check_binary_level(unsigned k) {
  if (k > 60) throw Error(Errc::domain, "binary iterate: 2^k overflows the exponent budget for k > 60");
}

}  // namespace

double binary_closed_iterate(double z, double w, unsigned k) {
  check_binary_level(k);
  return pow_mersenne(z, k) * pow_mersenne(w, k) * w;
}

double binary_closed_iterate_dw(double z, double w, unsigned k) {
  check_binary_level(k);
  return std::ldexp(pow_mersenne(z, k) * pow_mersenne(w, k), static_cast<int>(k));
}

double iterate_G(const OffspringFamily& fam, double z, double w, unsigned k) {
  check_scalar_level(k);
  for (unsigned j = 0; j < k; ++j) w = z * fam.psi_partial(w, 0, kHead);
  return w;
}

double iterate_G_dw(const OffspringFamily& fam, double z, double w, unsigned k) {
  check_scalar_level(k);
  double d = 1.0;
  for (unsigned j = 0; j < k; ++j) {
    d *= z * fam.psi(w, 1);
    w = z * fam.psi_partial(w, 0, kHead);
  }
  return d;
}

ExactSeries generalized_scheme(const OffspringFamily& fam, std::vector<std::size_t> index_set, unsigned m,
                               std::size_t trunc) {
  const auto I = validate_index_set(fam, std::move(index_set));
  check_exact_level(m);
  auto f = solve_g(fam, trunc);
  for (unsigned r = 0; r < m; ++r) {
    // psi_I(f) = sum_{i in I} b_i f^i with the powers built incrementally.
    ExactSeries psi_I = ExactSeries::zero(trunc);
    ExactSeries power = ExactSeries::constant(Rational(1), trunc);
    std::size_t at = 0;
    for (std::size_t i : I) {
      for (; at < i; ++at) power = mul(power, f);
      psi_I = add(psi_I, scale(power, fam.coeff(i)));
    }
    f = shift(sub(fam.apply(f), psi_I), 1).truncated(trunc);
  }
  return f;
}

double limit_constant_generalized(const OffspringFamily& fam, std::vector<std::size_t> index_set, unsigned m) {
  const auto I = validate_index_set(fam, std::move(index_set));
  check_scalar_level(m);
  if (fam.span() != 1) {
    throw Error(Errc::invalid_argument, "generalized limit is only supported for Q = 1, family has Q = " +
                                            std::to_string(fam.span()));
  }
  const auto kq = apex(fam);
  double f = kq.tau;
  double value = 1.0;
  for (unsigned j = 0; j < m; ++j) {
    value *= kq.rho * fam.psi_partial(f, 1, I);
    f = kq.rho * fam.psi_partial(f, 0, I);
  }
  return value;
}

BorderTable convergence_table(const OffspringFamily& fam, unsigned k, std::size_t n_max) {
  if (n_max < 1 || n_max < k) {
    throw Error(Errc::invalid_argument, "n_max must be at least max(1, k)");
  }
  check_exact_level(k);
  BorderTable table;
  table.family = fam.name();
  table.k = k;
  table.span = fam.span();
  try {
    table.limit = limit_constant(fam, k).value;
  } catch (const Error& e) {
    if (e.code() != Errc::not_in_kstar) throw;
  }
  const auto g = solve_g(fam, n_max);
  const auto levels = iterate_levels(fam, g, k);
  const auto& gk = levels.back();
  for (std::size_t n = 1; n <= n_max; n += table.span) {
    BorderRow row;
    row.n = n;
    row.a_n = g[n];
    row.a_n_k = gk[n];
    row.ratio = gk[n] / g[n];
    if (table.limit) row.gap = std::abs(to_double(row.ratio) - *table.limit);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace gwb
