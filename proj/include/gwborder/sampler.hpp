#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gwborder/family.hpp"
#include "gwborder/oracle.hpp"

namespace gwb {

// SplitMix64 used in counter mode: output i of stream s is
// mix(key(seed, s) + i * 0x9e3779b97f4a7c15). Streams are independent of
// each other and of the order in which they are consumed.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream_id);
  std::uint64_t next_u64() noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double next_double() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Inverse-CDF table for Y_t: P(Y_t = j) = b_j t^j / psi(t), cut where the
// tail drops below 1e-15 (exact support for polynomials). Draws compare one
// 64-bit output against integer thresholds, starting from a guide table
// indexed by its top bits.
class OffspringSampler {
 public:
  OffspringSampler(const OffspringFamily& fam, double t);
  std::uint32_t draw(StreamRng& rng) const noexcept;
  const std::vector<double>& probabilities() const noexcept { return prob_; }

 private:
  static constexpr unsigned kGuideBits = 10;

  std::vector<double> prob_;
  // P(Y <= j) scaled to 2^64; the last entry is never consulted.
  std::vector<std::uint64_t> threshold_;
  std::vector<std::uint32_t> guide_;  // first candidate per top-bits slot
};

std::uint32_t sample_offspring(const OffspringSampler& sampler, StreamRng& rng);

// Breadth-first realization of T_t; nullopt once the tree is known to exceed
// node_cap nodes.
std::optional<PlaneTree> sample_tree(const OffspringSampler& sampler, std::size_t node_cap, StreamRng& rng);

struct GWConfig {
  std::size_t target_n = 1;
  unsigned k = 0;
  std::uint64_t samples = 10'000;  // accepted-sample budget
  // Attempt budget; 0 picks 20 * samples / P(#T_t = n) + 10^5.
  std::uint64_t max_attempts = 0;
  std::uint64_t seed = 0;
  // Tilt; default is the apex, or for families outside K* the t with
  // m(t) = (n - 1) / n, which maximizes P(#T_t = n) there.
  std::optional<double> t;
  // Attempts abort once they exceed this many nodes; 0 means 10 * target_n.
  std::size_t node_cap = 0;
  // Attach the exact ratio when target_n is at most this.
  std::size_t exact_limit = 256;
};

struct EstimateReport {
  std::size_t target_n = 0;
  unsigned k = 0;
  std::uint64_t seed = 0;
  double t = 0.0;
  double p_hat = 0.0;  // NaN when nothing was accepted
  double ci_half_width = 0.0;
  std::uint64_t accepted = 0;
  std::uint64_t attempts = 0;
  bool insufficient = false;
  // Expected attempts per accepted tree, 1 / P(#T_t = n).
  double attempts_per_accept = 0.0;
  std::optional<Rational> exact_reference;
  std::optional<double> limit;  // c_k when psi is in K*
  // Mean of X_{n,k} / n, where X counts nodes whose distance to the nearest
  // degree-1 node other than themselves is >= k (the unrooted reading).
  double mean_protected = 0.0;
  double mean_protected_ci = 0.0;
  // Same with distances to childless nodes of the rooted tree.
  double mean_protected_rooted = 0.0;
  double mean_protected_rooted_ci = 0.0;
};

// Rejection sampling of T_t conditioned on #T_t = n. Attempts are split into
// fixed chunks with one RNG stream each and merged in chunk order, so the
// report depends on the seed only, never on the number of workers.
EstimateReport conditioned_estimate(const OffspringFamily& fam, const GWConfig& cfg);

// The same run, read for the protected-node proportion.
EstimateReport mean_protected(const OffspringFamily& fam, const GWConfig& cfg);

// Tilt used when cfg.t is unset.
double default_tilt(const OffspringFamily& fam, std::size_t target_n);

}  // namespace gwb
