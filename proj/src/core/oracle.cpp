#include "gwborder/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>

#include "gwborder/border.hpp"
#include "gwborder/error.hpp"

namespace gwb {

namespace {

constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max() / 4;

using Word = std::vector<std::uint32_t>;

// Calls emit(word) for each tree of size m, preorder words, canonical order.
// memo[s] must hold the words of every size s < m.
template <typename Emit>
void stream_words(std::size_t m, const std::vector<std::vector<Word>>& memo, Emit&& emit) {
  if (m == 1) {
    emit(Word{0});
    return;
  }
  // Compositions of m - 1 in lexicographic order: parts[] is advanced like a
  // counter with the last part absorbing the remainder.
  std::vector<std::size_t> parts;
  Word word;
  auto emit_products = [&] {
    std::vector<std::size_t> pick(parts.size(), 0);
    while (true) {
      word.assign(1, static_cast<std::uint32_t>(parts.size()));
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& w = memo[parts[i]][pick[i]];
        word.insert(word.end(), w.begin(), w.end());
      }
      emit(word);
      std::size_t i = parts.size();
      while (i > 0) {
        --i;
        if (++pick[i] < memo[parts[i]].size()) break;
        pick[i] = 0;
        if (i == 0) return;
      }
    }
  };
  auto recurse = [&](auto&& self, std::size_t left) -> void {
    if (left == 0) {
      emit_products();
      return;
    }
    for (std::size_t first = 1; first <= left; ++first) {
      parts.push_back(first);
      self(self, left - first);
      parts.pop_back();
    }
  };
  recurse(recurse, m - 1);
}

void check_size(std::size_t n) {
  if (n < 1 || n > kMaxEnumerationSize) {
    throw Error(Errc::invalid_argument,
                "enumeration size must be in [1, " + std::to_string(kMaxEnumerationSize) + "], got " + std::to_string(n));
  }
}

}  // namespace

PlaneTree PlaneTree::from_bfs(std::span<const std::uint32_t> outdegrees) {
  const std::size_t n = outdegrees.size();
  if (n == 0) throw Error(Errc::invalid_argument, "a tree needs at least one node");
  PlaneTree t;
  t.outdeg_.assign(outdegrees.begin(), outdegrees.end());
  t.first_child_.resize(n);
  std::size_t next = 1;
  for (std::size_t v = 0; v < n; ++v) {
    if (v > 0 && v >= next) throw Error(Errc::invalid_argument, "outdegree sequence is not a tree");
    t.first_child_[v] = next;
    next += outdegrees[v];
  }
  if (next != n) throw Error(Errc::invalid_argument, "outdegree sequence is not a tree");
  return t;
}

PlaneTree PlaneTree::from_preorder(std::span<const std::uint32_t> outdegrees) {
  const std::size_t n = outdegrees.size();
  if (n == 0) throw Error(Errc::invalid_argument, "a tree needs at least one node");
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<std::pair<std::size_t, std::uint32_t>> open;  // node, children still to attach
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      if (open.empty()) throw Error(Errc::invalid_argument, "preorder word is not a tree");
      auto& top = open.back();
      children[top.first].push_back(i);
      if (--top.second == 0) open.pop_back();
    }
    if (outdegrees[i] > 0) open.emplace_back(i, outdegrees[i]);
  }
  if (!open.empty()) throw Error(Errc::invalid_argument, "preorder word is not a tree");
  std::vector<std::uint32_t> bfs;
  bfs.reserve(n);
  std::vector<std::size_t> queue{0};
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const std::size_t v = queue[h];
    bfs.push_back(outdegrees[v]);
    queue.insert(queue.end(), children[v].begin(), children[v].end());
  }
  return from_bfs(bfs);
}

std::vector<long> PlaneTree::parents() const {
  std::vector<long> p(size(), -1);
  for (std::size_t v = 0; v < size(); ++v) {
    for (std::size_t c = first_child_[v]; c < first_child_[v] + outdeg_[v]; ++c) p[c] = static_cast<long>(v);
  }
  return p;
}

std::vector<std::size_t> PlaneTree::profile() const {
  const auto top = *std::max_element(outdeg_.begin(), outdeg_.end());
  std::vector<std::size_t> k(top + 1, 0);
  for (auto d : outdeg_) ++k[d];
  return k;
}

std::size_t PlaneTree::border_distance() const { return per_node_border()[0]; }

std::size_t PlaneTree::height() const {
  std::vector<std::size_t> depth(size(), 0);
  for (std::size_t v = 0; v < size(); ++v) {
    for (std::size_t c = first_child_[v]; c < first_child_[v] + outdeg_[v]; ++c) depth[c] = depth[v] + 1;
  }
  return depth.back();
}

std::vector<std::size_t> PlaneTree::per_node_border() const {
  const std::size_t n = size();
  std::vector<std::size_t> down(n, kFar);
  for (std::size_t v = n; v-- > 0;) {
    if (outdeg_[v] == 0) {
      down[v] = 0;
      continue;
    }
    for (std::size_t c = first_child_[v]; c < first_child_[v] + outdeg_[v]; ++c) {
      down[v] = std::min(down[v], down[c] + 1);
    }
  }
  std::vector<std::size_t> full = down;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t c = first_child_[v]; c < first_child_[v] + outdeg_[v]; ++c) {
      full[c] = std::min(full[c], full[v] + 1);
    }
  }
  return full;
}

std::vector<std::size_t> PlaneTree::rerooted_border() const {
  const std::size_t n = size();
  if (n == 1) return {0};
  // Sources are the nodes of degree 1: childless non-root nodes, and the
  // root when it has one child.
  auto is_source = [&](std::size_t v) { return v == 0 ? outdeg_[0] == 1 : outdeg_[v] == 0; };
  // below[v]: nearest source strictly inside the subtree of v (v excluded).
  // reach[v]: same with v itself allowed.
  std::vector<std::size_t> below(n, kFar);
  std::vector<std::size_t> reach(n, kFar);
  for (std::size_t v = n; v-- > 0;) {
    for (std::size_t c = first_child_[v]; c < first_child_[v] + outdeg_[v]; ++c) {
      below[v] = std::min(below[v], reach[c] + 1);
    }
    reach[v] = is_source(v) ? 0 : below[v];
  }
  // above[v]: nearest source outside the subtree of v.
  std::vector<std::size_t> above(n, kFar);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t lo = first_child_[v];
    const std::size_t hi = lo + outdeg_[v];
    // Best and second best of reach[c] + 1 among the children.
    std::size_t best = kFar;
    std::size_t second = kFar;
    std::size_t best_at = hi;
    for (std::size_t c = lo; c < hi; ++c) {
      const std::size_t d = reach[c] + 1;
      if (d < best) {
        second = best;
        best = d;
        best_at = c;
      } else if (d < second) {
        second = d;
      }
    }
    const std::size_t via_v = std::min(above[v], is_source(v) ? std::size_t{0} : kFar);
    for (std::size_t c = lo; c < hi; ++c) {
      const std::size_t sibling = c == best_at ? second : best;
      above[c] = std::min(via_v, sibling) + 1;
    }
  }
  std::vector<std::size_t> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = std::min(below[v], above[v]);
  return out;
}

void enumerate_trees(std::size_t n, const std::function<void(const PlaneTree&)>& visit) {
  check_size(n);
  std::vector<std::vector<Word>> memo(n);
  for (std::size_t s = 1; s < n; ++s) {
    stream_words(s, memo, [&](const Word& w) { memo[s].push_back(w); });
  }
  stream_words(n, memo, [&](const Word& w) { visit(PlaneTree::from_preorder(w)); });
}

Rational weight(const OffspringFamily& fam, const PlaneTree& a) {
  Rational w(1);
  for (auto d : a.outdegrees()) {
    w *= fam.coeff(d);
    if (sgn(w) == 0) break;
  }
  return w;
}

namespace {

Census census_with(std::size_t n, const std::function<void(const PlaneTree&)>& also) {
  check_size(n);
  std::map<std::pair<std::vector<std::size_t>, std::size_t>, std::uint64_t> bins;
  Census c;
  c.n = n;
  enumerate_trees(n, [&](const PlaneTree& a) {
    ++bins[{a.profile(), a.border_distance()}];
    ++c.trees;
    if (also) also(a);
  });
  for (auto& [key, count] : bins) c.entries.push_back(CensusEntry{key.first, key.second, count});
  return c;
}

}  // namespace

Census take_census(std::size_t n) { return census_with(n, nullptr); }

Aggregate aggregate(const OffspringFamily& fam, const Census& census, unsigned k) {
  Aggregate out;
  for (const auto& e : census.entries) {
    Rational w(static_cast<unsigned long>(e.count));
    for (std::size_t j = 0; j < e.profile.size() && sgn(w) != 0; ++j) {
      if (e.profile[j] == 0) continue;
      const Rational b = fam.coeff(j);
      mpz_class num;
      mpz_class den;
      mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), e.profile[j]);
      mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), e.profile[j]);
      w *= Rational(num, den);
    }
    out.u += w;
    if (e.border >= k) out.v += w;
  }
  return out;
}

Aggregate aggregate(const OffspringFamily& fam, std::size_t n, unsigned k) {
  return aggregate(fam, take_census(n), k);
}

std::string tree_json_line(const OffspringFamily& fam, const PlaneTree& a) {
  std::string s = "{\"n\":" + std::to_string(a.size()) + ",\"parents\":[";
  const auto p = a.parents();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(p[i]);
  }
  s += "],\"border\":" + std::to_string(a.border_distance()) + ",\"weight\":\"" + to_string(weight(fam, a)) + "\"}";
  return s;
}

OracleReport cross_check(const OffspringFamily& fam, std::size_t n_max, unsigned k, std::ostream* dump) {
  check_size(n_max);
  OracleReport report;
  report.family = fam.name();
  report.k = k;
  report.n_max = n_max;
  const auto g = solve_g(fam, n_max);
  const auto levels = iterate_levels(fam, g, k);
  std::function<void(const PlaneTree&)> writer;
  if (dump) writer = [&](const PlaneTree& a) { *dump << tree_json_line(fam, a) << '\n'; };
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto census = census_with(n, writer);
    const auto agg = aggregate(fam, census, k);
    OracleRow row;
    row.n = n;
    row.trees = census.trees;
    row.u = agg.u;
    row.v = agg.v;
    row.a_n = g[n];
    row.a_n_k = levels.back()[n];
    row.match = row.u == row.a_n && row.v == row.a_n_k;
    report.ok = report.ok && row.match;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace gwb
