#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gwborder/family.hpp"

namespace gwb {

// Rooted plane tree stored in breadth-first order: node 0 is the root and the
// children of every node occupy a contiguous, left-to-right block.
class PlaneTree {
 public:
  // Outdegrees listed in preorder (a Lukasiewicz word) or in BFS order.
  static PlaneTree from_preorder(std::span<const std::uint32_t> outdegrees);
  static PlaneTree from_bfs(std::span<const std::uint32_t> outdegrees);

  std::size_t size() const noexcept { return outdeg_.size(); }
  std::uint32_t outdegree(std::size_t v) const { return outdeg_.at(v); }
  std::size_t first_child(std::size_t v) const { return first_child_.at(v); }
  const std::vector<std::uint32_t>& outdegrees() const noexcept { return outdeg_; }

  // Parent array in BFS numbering; the root has parent -1.
  std::vector<long> parents() const;
  // k_j(a): number of nodes with outdegree j, for j = 0..max outdegree.
  std::vector<std::size_t> profile() const;

  // Depth of the shallowest leaf.
  std::size_t border_distance() const;
  // Depth of the deepest leaf.
  std::size_t height() const;
  // Distance from every node to the nearest leaf (a node without children).
  std::vector<std::size_t> per_node_border() const;
  // Distance from every node v to the nearest node of degree 1 other than v,
  // treating the tree as unrooted. This is the root distance to the border
  // after re-rooting the tree at v. A single node gets 0.
  std::vector<std::size_t> rerooted_border() const;

 private:
  std::vector<std::uint32_t> outdeg_;
  std::vector<std::size_t> first_child_;
};

inline constexpr std::size_t kMaxEnumerationSize = 14;

// Every plane tree with n nodes exactly once. Child subtree sizes run over
// the compositions of n - 1 in lexicographic order, subtrees recursively in
// the same order. 1 <= n <= 14.
void enumerate_trees(std::size_t n, const std::function<void(const PlaneTree&)>& visit);

// prod_v b_(outdeg v).
Rational weight(const OffspringFamily& fam, const PlaneTree& a);

// Trees of one size grouped by (outdegree profile, border distance). The
// weight of a tree depends only on its profile, so one enumeration serves
// every family and every k.
struct CensusEntry {
  std::vector<std::size_t> profile;
  std::size_t border = 0;
  std::uint64_t count = 0;
};

struct Census {
  std::size_t n = 0;
  std::uint64_t trees = 0;
  std::vector<CensusEntry> entries;  // sorted by (profile, border)
};

Census take_census(std::size_t n);

struct Aggregate {
  Rational u;  // sum of weights over all trees of size n
  Rational v;  // same sum restricted to border distance >= k
};

Aggregate aggregate(const OffspringFamily& fam, const Census& census, unsigned k);
Aggregate aggregate(const OffspringFamily& fam, std::size_t n, unsigned k);

// {"n":4,"parents":[-1,0,1,1],"border":2,"weight":"1/2"}
std::string tree_json_line(const OffspringFamily& fam, const PlaneTree& a);

struct OracleRow {
  std::size_t n = 0;
  std::uint64_t trees = 0;
  Rational u;      // enumeration
  Rational a_n;    // series
  Rational v;      // enumeration, border >= k
  Rational a_n_k;  // series
  bool match = false;
};

struct OracleReport {
  std::string family;
  unsigned k = 0;
  std::size_t n_max = 0;
  std::vector<OracleRow> rows;
  bool ok = true;
};

// Compares enumeration sums with solve_g and iterate_scheme for every
// n <= n_max. When dump is given, every tree is written as one JSON line.
OracleReport cross_check(const OffspringFamily& fam, std::size_t n_max, unsigned k, std::ostream* dump = nullptr);

}  // namespace gwb
