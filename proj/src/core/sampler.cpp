#include "gwborder/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gwborder/border.hpp"
#include "gwborder/error.hpp"
#include "gwborder/parallel.hpp"

namespace gwb {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kChunk = 1u << 14;
constexpr double kZ95 = 1.959964;

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Accepted {
  std::uint64_t attempt = 0;  // index within the chunk
  bool hit = false;
  std::uint32_t protected_unrooted = 0;
  std::uint32_t protected_rooted = 0;
};

// Draws one BFS offspring sequence; true when it closes with exactly n nodes.
bool attempt(const OffspringSampler& sampler, std::size_t n, StreamRng& rng, std::vector<std::uint32_t>& buf) {
  buf.clear();
  std::size_t pending = 1;
  while (pending > 0) {
    const std::uint32_t d = sampler.draw(rng);
    buf.push_back(d);
    pending += d;
    --pending;
    if (buf.size() + pending > n) return false;
  }
  return buf.size() == n;
}

double solve_mean(const OffspringFamily& fam, double target) {
  const double cap = std::isfinite(fam.radius()) ? fam.radius() * (1.0 - 1e-9) : 1e300;
  double lo = 0.0;
  double hi = std::min(1.0, cap);
  while (mean_fn(fam, hi) < target) {
    if (hi >= cap) return cap;
    lo = hi;
    hi = std::min(2.0 * hi, cap);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_fn(fam, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// P(#T_t = n) = A_n t^(n-1) / psi(t)^n.
double size_probability(const OffspringFamily& fam, double t, std::size_t n) {
  if (n <= 512) return progeny_pgf(fam, t, n).series[n];
  try {
    const double nn = static_cast<double>(n);
    return std::exp(otter_log_asymptotic(fam, n) + (nn - 1.0) * std::log(t) - nn * std::log(fam.psi(t)));
  } catch (const Error& e) {
    if (e.code() != Errc::not_in_kstar) throw;
    return 0.0;
  }
}

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream_id)
    : key_(mix64(mix64(seed + kGamma) + (stream_id + 1) * kGamma)) {}

std::uint64_t StreamRng::next_u64() noexcept { return mix64(key_ + (++counter_) * kGamma); }

double StreamRng::next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

OffspringSampler::OffspringSampler(const OffspringFamily& fam, double t) {
  if (!(t > 0.0) || !(t < fam.radius())) throw Error(Errc::domain, "offspring sampler: t outside (0, R)");
  const auto pgf = tilted_pgf(fam, t);
  prob_.assign(pgf.coeffs().begin(), pgf.coeffs().end());
  while (prob_.size() > 1 && prob_.back() == 0.0) prob_.pop_back();
  long double total = 0.0L;
  for (double p : prob_) total += p;
  threshold_.resize(prob_.size());
  long double acc = 0.0L;
  for (std::size_t j = 0; j < prob_.size(); ++j) {
    acc += prob_[j];
    const long double scaled = std::ldexp(acc / total, 64);
    threshold_[j] = scaled >= 0x1.0p64L ? ~std::uint64_t{0} : static_cast<std::uint64_t>(scaled);
  }
  threshold_.back() = ~std::uint64_t{0};
  guide_.resize(std::size_t{1} << kGuideBits);
  std::size_t j = 0;
  for (std::size_t slot = 0; slot < guide_.size(); ++slot) {
    const std::uint64_t low = static_cast<std::uint64_t>(slot) << (64 - kGuideBits);
    while (j + 1 < threshold_.size() && threshold_[j] <= low) ++j;
    guide_[slot] = static_cast<std::uint32_t>(j);
  }
}

std::uint32_t OffspringSampler::draw(StreamRng& rng) const noexcept {
  const std::uint64_t x = rng.next_u64();
  std::size_t j = guide_[x >> (64 - kGuideBits)];
  while (x >= threshold_[j] && j + 1 < threshold_.size()) ++j;
  return static_cast<std::uint32_t>(j);
}

std::uint32_t sample_offspring(const OffspringSampler& sampler, StreamRng& rng) { return sampler.draw(rng); }

std::optional<PlaneTree> sample_tree(const OffspringSampler& sampler, std::size_t node_cap, StreamRng& rng) {
  std::vector<std::uint32_t> buf;
  std::size_t pending = 1;
  while (pending > 0) {
    const std::uint32_t d = sampler.draw(rng);
    buf.push_back(d);
    pending += d;
    --pending;
    if (buf.size() + pending > node_cap) return std::nullopt;
  }
  return PlaneTree::from_bfs(buf);
}

double default_tilt(const OffspringFamily& fam, std::size_t target_n) {
  try {
    return apex(fam).tau;
  } catch (const Error& e) {
    if (e.code() != Errc::not_in_kstar) throw;
  }
  if (target_n <= 1) return 1e-6 * std::min(1.0, fam.radius());
  return solve_mean(fam, static_cast<double>(target_n - 1) / static_cast<double>(target_n));
}

EstimateReport conditioned_estimate(const OffspringFamily& fam, const GWConfig& cfg) {
  const std::size_t n = cfg.target_n;
  const unsigned q = fam.span();
  if (n < 1 || (n - 1) % q != 0) {
    throw Error(Errc::invalid_argument, "target n = " + std::to_string(n) + " is outside the valid class: Q = " +
                                            std::to_string(q) + ", need n = 1 mod " + std::to_string(q));
  }
  if (cfg.samples == 0) throw Error(Errc::invalid_argument, "samples must be positive");
  const std::size_t node_cap = cfg.node_cap == 0 ? 10 * n : cfg.node_cap;
  if (node_cap < n) throw Error(Errc::invalid_argument, "node cap is below the target size");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw Error(Errc::invalid_argument, "target size too large");

  EstimateReport r;
  r.target_n = n;
  r.k = cfg.k;
  r.seed = cfg.seed;
  r.t = cfg.t ? *cfg.t : default_tilt(fam, n);
  const OffspringSampler sampler(fam, r.t);
  const double p_n = size_probability(fam, r.t, n);
  r.attempts_per_accept = p_n > 0.0 ? 1.0 / p_n : std::numeric_limits<double>::infinity();
  std::uint64_t budget = cfg.max_attempts;
  if (budget == 0) {
    const double want = 20.0 * static_cast<double>(cfg.samples) * r.attempts_per_accept + 1e5;
    budget = want < 1e18 ? static_cast<std::uint64_t>(want) : std::uint64_t{1'000'000'000'000'000'000ULL};
  }

  std::uint64_t hits = 0;
  std::uint64_t s1_unrooted = 0;
  std::uint64_t s1_rooted = 0;
  long double s2_unrooted = 0.0L;
  long double s2_rooted = 0.0L;
  std::uint64_t chunk_base = 0;
  bool done = false;
  const std::size_t wave = std::max<std::size_t>(1, 2 * worker_limit());
  while (!done && chunk_base * kChunk < budget) {
    const std::uint64_t remaining_chunks = (budget - chunk_base * kChunk + kChunk - 1) / kChunk;
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(wave, remaining_chunks));
    std::vector<std::vector<Accepted>> results(count);
    parallel_for(count, [&](std::size_t i) {
      const std::uint64_t chunk = chunk_base + i;
      const std::uint64_t len = std::min<std::uint64_t>(kChunk, budget - chunk * kChunk);
      StreamRng rng(cfg.seed, chunk);
      std::vector<std::uint32_t> buf;
      buf.reserve(n);
      for (std::uint64_t a = 0; a < len; ++a) {
        if (!attempt(sampler, n, rng, buf)) continue;
        const auto tree = PlaneTree::from_bfs(buf);
        Accepted acc;
        acc.attempt = a;
        acc.hit = tree.border_distance() >= cfg.k;
        for (auto d : tree.rerooted_border()) acc.protected_unrooted += d >= cfg.k;
        for (auto d : tree.per_node_border()) acc.protected_rooted += d >= cfg.k;
        results[i].push_back(acc);
      }
    });
    for (std::size_t i = 0; i < count && !done; ++i) {
      const std::uint64_t start = (chunk_base + i) * kChunk;
      r.attempts = std::min<std::uint64_t>(start + kChunk, budget);
      for (const auto& acc : results[i]) {
        ++r.accepted;
        hits += acc.hit ? 1 : 0;
        s1_unrooted += acc.protected_unrooted;
        s1_rooted += acc.protected_rooted;
        s2_unrooted += static_cast<long double>(acc.protected_unrooted) * acc.protected_unrooted;
        s2_rooted += static_cast<long double>(acc.protected_rooted) * acc.protected_rooted;
        if (r.accepted == cfg.samples) {
          r.attempts = start + acc.attempt + 1;
          done = true;
          break;
        }
      }
    }
    chunk_base += count;
  }
  r.insufficient = r.accepted < cfg.samples;

  const double N = static_cast<double>(r.accepted);
  const double nn = static_cast<double>(n);
  if (r.accepted == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.p_hat = r.ci_half_width = nan;
    r.mean_protected = r.mean_protected_ci = r.mean_protected_rooted = r.mean_protected_rooted_ci = nan;
  } else {
    r.p_hat = static_cast<double>(hits) / N;
    r.ci_half_width = kZ95 * std::sqrt(r.p_hat * (1.0 - r.p_hat) / N);
    auto mean_ci = [&](std::uint64_t s1, long double s2, double& mean, double& ci) {
      mean = static_cast<double>(s1) / (N * nn);
      if (r.accepted < 2) {
        ci = std::numeric_limits<double>::infinity();
        return;
      }
      const long double m = static_cast<long double>(s1) / N;
      const long double var = std::max(0.0L, (s2 - N * m * m) / (N - 1.0)) / (nn * nn);
      ci = kZ95 * static_cast<double>(std::sqrt(var / N));
    };
    mean_ci(s1_unrooted, s2_unrooted, r.mean_protected, r.mean_protected_ci);
    mean_ci(s1_rooted, s2_rooted, r.mean_protected_rooted, r.mean_protected_rooted_ci);
  }

  if (n <= cfg.exact_limit) r.exact_reference = exact_conditional_prob(fam, cfg.k, n);
  try {
    r.limit = limit_constant(fam, cfg.k).value;
  } catch (const Error& e) {
    if (e.code() != Errc::not_in_kstar) throw;
  }
  return r;
}

EstimateReport mean_protected(const OffspringFamily& fam, const GWConfig& cfg) {
  return conditioned_estimate(fam, cfg);
}

}  // namespace gwb
