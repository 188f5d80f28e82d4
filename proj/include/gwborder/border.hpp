#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gwborder/family.hpp"
#include "gwborder/series.hpp"

namespace gwb {

inline constexpr unsigned kMaxExactLevel = 512;
inline constexpr unsigned kMaxScalarLevel = 10'000;

// g_k with coefficients A_n^(k): the weighted count of trees of size n whose
// nearest leaf sits at depth >= k.
struct BorderSeries {
  unsigned k = 0;
  ExactSeries series;
  std::string family;
};

// g_0 = g, g_k = z (psi(g_(k-1)) - b_0), truncated at trunc.
BorderSeries iterate_scheme(const OffspringFamily& fam, unsigned k, std::size_t trunc);

// Same recurrence seeded with an already computed g; returns g_0..g_k.
std::vector<ExactSeries> iterate_levels(const OffspringFamily& fam, const ExactSeries& g, unsigned k);

// A_n^(k) / A_n. Throws Errc::invalid_argument outside n = 1 mod Q.
Rational exact_conditional_prob(const OffspringFamily& fam, unsigned k, std::size_t n);

struct LimitConstant {
  unsigned k = 0;
  double value = 1.0;
  std::vector<double> trajectory;  // g_j(rho) for j < k
  std::optional<double> closed_form;
  // Some g_j(rho) fell below the smallest subnormal. The true value is
  // positive; the product past that point is computed with g_j = 0.
  bool underflow = false;
};

// c_k = rho^k prod_{j<k} psi'(g_j(rho)), g_0(rho) = tau,
// g_j(rho) = rho (psi(g_(j-1)(rho)) - b_0).
LimitConstant limit_constant(const OffspringFamily& fam, unsigned k);

// c_k = (1/e) exp(G_(k-1)(1/e, 1)) c_(k-1) for psi = e^z.
double cayley_recurrence(unsigned k);

// Closed forms for the k-th iterate of G(z, w) = z (psi(w) - b_0).
double plane_closed_iterate(double z, double w, unsigned k);
double plane_closed_iterate_dw(double z, double w, unsigned k);
double binary_closed_iterate(double z, double w, unsigned k);
double binary_closed_iterate_dw(double z, double w, unsigned k);

// Generic float iterate G_k(z, w) and dG_k/dw by the chain rule.
double iterate_G(const OffspringFamily& fam, double z, double w, unsigned k);
double iterate_G_dw(const OffspringFamily& fam, double z, double w, unsigned k);

// f_0 = g, f_m = z (psi - psi_I)(f_(m-1)). index_set must contain 0 and be a
// proper subset of the support of psi.
ExactSeries generalized_scheme(const OffspringFamily& fam, std::vector<std::size_t> index_set,
                               unsigned m, std::size_t trunc);

// prod_{j<m} rho (psi' - psi_I')(f_j(rho)) with f_0(rho) = tau. Q must be 1.
double limit_constant_generalized(const OffspringFamily& fam, std::vector<std::size_t> index_set,
                                  unsigned m);

struct BorderRow {
  std::size_t n = 0;
  Rational a_n;
  Rational a_n_k;
  Rational ratio;
  std::optional<double> gap;  // |ratio - c_k| when the limit is known
};

struct BorderTable {
  std::string family;
  unsigned k = 0;
  unsigned span = 1;
  std::optional<double> limit;
  std::vector<BorderRow> rows;
};

// Rows for every n <= n_max with n = 1 mod Q. The limit is omitted for
// families outside K*.
BorderTable convergence_table(const OffspringFamily& fam, unsigned k, std::size_t n_max);

}  // namespace gwb
