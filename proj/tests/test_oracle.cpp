#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <deque>
#include <set>

#include "gwborder/border.hpp"
#include "gwborder/error.hpp"
#include "gwborder/oracle.hpp"

using namespace gwb;

namespace {

std::vector<std::vector<std::size_t>> adjacency(const PlaneTree& a) {
  std::vector<std::vector<std::size_t>> adj(a.size());
  const auto p = a.parents();
  for (std::size_t v = 1; v < a.size(); ++v) {
    adj[v].push_back(static_cast<std::size_t>(p[v]));
    adj[static_cast<std::size_t>(p[v])].push_back(v);
  }
  return adj;
}

std::vector<std::size_t> bfs_from(const std::vector<std::vector<std::size_t>>& adj, std::size_t s) {
  std::vector<std::size_t> d(adj.size(), SIZE_MAX);
  std::deque<std::size_t> q{s};
  d[s] = 0;
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (auto u : adj[v]) {
      if (d[u] == SIZE_MAX) {
        d[u] = d[v] + 1;
        q.push_back(u);
      }
    }
  }
  return d;
}

// Pairwise distances, then minima over the relevant node sets.
void check_distances(const PlaneTree& a) {
  const auto adj = adjacency(a);
  const std::size_t n = a.size();
  std::vector<std::vector<std::size_t>> dist(n);
  for (std::size_t v = 0; v < n; ++v) dist[v] = bfs_from(adj, v);
  const auto pnb = a.per_node_border();
  const auto rr = a.rerooted_border();
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t leaf = SIZE_MAX;
    std::size_t deg1 = SIZE_MAX;
    for (std::size_t u = 0; u < n; ++u) {
      if (a.outdegree(u) == 0) leaf = std::min(leaf, dist[v][u]);
      if (u != v && adj[u].size() == 1) deg1 = std::min(deg1, dist[v][u]);
    }
    CHECK(pnb[v] == leaf);
    CHECK(rr[v] == (n == 1 ? 0 : deg1));
  }
}

Rational catalan(unsigned m) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), 2 * m, m);
  Rational q(b, mpz_class(m + 1));
  q.canonicalize();
  return q;
}

}  // namespace

TEST_CASE("enumeration counts and uniqueness") {
  for (std::size_t n = 1; n <= 11; ++n) {
    std::set<std::vector<std::uint32_t>> seen;
    std::size_t count = 0;
    enumerate_trees(n, [&](const PlaneTree& a) {
      CHECK(a.size() == n);
      seen.insert(a.outdegrees());
      ++count;
    });
    CHECK(Rational(static_cast<unsigned long>(count)) == catalan(static_cast<unsigned>(n - 1)));
    CHECK(seen.size() == count);
  }
  CHECK_THROWS_AS(enumerate_trees(0, [](const PlaneTree&) {}), Error);
  CHECK_THROWS_AS(enumerate_trees(15, [](const PlaneTree&) {}), Error);
}

TEST_CASE("enumeration order is lexicographic in the subtree sizes") {
  std::vector<std::vector<std::uint32_t>> order;
  enumerate_trees(3, [&](const PlaneTree& a) { order.push_back(a.outdegrees()); });
  REQUIRE(order.size() == 2);
  CHECK(order[0] == std::vector<std::uint32_t>{2, 0, 0});  // sizes (1, 1)
  CHECK(order[1] == std::vector<std::uint32_t>{1, 1, 0});  // sizes (2)
}

TEST_CASE("tree statistics") {
  const std::uint32_t path[] = {1, 1, 0};
  const std::uint32_t cherry[] = {2, 0, 0};
  const std::uint32_t complete[] = {2, 2, 2, 0, 0, 0, 0};
  const std::uint32_t single[] = {0};
  auto p = PlaneTree::from_bfs(path);
  CHECK(p.border_distance() == 2);
  CHECK(p.height() == 2);
  CHECK(PlaneTree::from_bfs(cherry).border_distance() == 1);
  auto c = PlaneTree::from_bfs(complete);
  CHECK(c.border_distance() == 2);
  CHECK(c.per_node_border() == std::vector<std::size_t>{2, 1, 1, 0, 0, 0, 0});
  auto s = PlaneTree::from_bfs(single);
  CHECK(s.border_distance() == 0);
  CHECK(s.height() == 0);
  CHECK(s.rerooted_border() == std::vector<std::size_t>{0});
  const std::uint32_t two[] = {1, 0};
  CHECK(PlaneTree::from_bfs(two).rerooted_border() == std::vector<std::size_t>{1, 1});
  const std::uint32_t bad[] = {0, 1};
  CHECK_THROWS_AS(PlaneTree::from_bfs(bad), Error);
  const std::uint32_t bad_pre[] = {2, 0};
  CHECK_THROWS_AS(PlaneTree::from_preorder(bad_pre), Error);
  // Preorder 2 1 0 0: root with a path child then a leaf; BFS 2 1 0 0.
  const std::uint32_t pre[] = {2, 1, 0, 0};
  auto t = PlaneTree::from_preorder(pre);
  CHECK(t.outdegrees() == std::vector<std::uint32_t>{2, 1, 0, 0});
  CHECK(t.parents() == std::vector<long>{-1, 0, 0, 1});
  CHECK(t.profile() == std::vector<std::size_t>{2, 1, 1});
}

TEST_CASE("unary path") {
  std::vector<std::uint32_t> path(10, 1);
  path.back() = 0;
  auto t = PlaneTree::from_bfs(path);
  std::size_t rooted = 0;
  std::size_t rerooted = 0;
  for (auto d : t.per_node_border()) rooted += d >= 2;
  for (auto d : t.rerooted_border()) rerooted += d >= 2;
  CHECK(rooted == 8);
  CHECK(rerooted == 8);
}

TEST_CASE("distances match brute-force BFS and are 1-Lipschitz") {
  for (std::size_t n = 1; n <= 8; ++n) {
    enumerate_trees(n, [&](const PlaneTree& a) {
      check_distances(a);
      const auto d = a.per_node_border();
      const auto p = a.parents();
      CHECK(d[0] == a.border_distance());
      CHECK(a.border_distance() <= a.height());
      for (std::size_t v = 1; v < n; ++v) {
        const auto up = d[static_cast<std::size_t>(p[v])];
        CHECK(d[v] <= up + 1);
        CHECK(up <= d[v] + 1);
        if (a.outdegree(v) == 0) CHECK(d[v] == 0);
      }
      const auto prof = a.profile();
      std::size_t nodes = 0;
      std::size_t edges = 0;
      for (std::size_t j = 0; j < prof.size(); ++j) {
        nodes += prof[j];
        edges += j * prof[j];
      }
      CHECK(nodes == n);
      CHECK(edges == n - 1);
    });
  }
}

TEST_CASE("weights") {
  const auto plane = OffspringFamily::builtin("plane");
  const auto cayley = OffspringFamily::builtin("cayley");
  const auto binary = OffspringFamily::builtin("binary");
  const std::uint32_t path[] = {1, 1, 0};
  const std::uint32_t cherry[] = {2, 0, 0};
  CHECK(weight(plane, PlaneTree::from_bfs(path)) == 1);
  CHECK(weight(cayley, PlaneTree::from_bfs(path)) == 1);
  CHECK(weight(cayley, PlaneTree::from_bfs(cherry)) == Rational(1, 2));
  CHECK(weight(binary, PlaneTree::from_bfs(cherry)) == 1);
  CHECK(weight(binary, PlaneTree::from_bfs(path)) == 0);
}

TEST_CASE("aggregate examples") {
  const auto plane = OffspringFamily::builtin("plane");
  const auto cayley = OffspringFamily::builtin("cayley");
  const auto binary = OffspringFamily::builtin("binary");
  auto a = aggregate(plane, 4, 2);
  CHECK(a.u == 5);
  CHECK(a.v == 2);
  CHECK(aggregate(cayley, 3, 0).u == Rational(3, 2));
  auto b = aggregate(binary, 7, 2);
  CHECK(b.u == 5);
  CHECK(b.v == 1);
}

TEST_CASE("aggregate equals the series coefficients") {
  const std::size_t n_max = 9;
  std::vector<Census> censuses;
  for (std::size_t n = 1; n <= n_max; ++n) censuses.push_back(take_census(n));
  for (const char* name : {"plane", "cayley", "binary", "motzkin"}) {
    const auto f = OffspringFamily::builtin(name);
    const auto g = solve_g(f, n_max);
    const auto levels = iterate_levels(f, g, 5);
    for (unsigned k = 0; k <= 5; ++k) {
      for (std::size_t n = 1; n <= n_max; ++n) {
        const auto agg = aggregate(f, censuses[n - 1], k);
        CHECK(agg.u == g[n]);
        CHECK(agg.v == levels[k][n]);
      }
    }
  }
}

TEST_CASE("json lines") {
  const auto cayley = OffspringFamily::builtin("cayley");
  const std::uint32_t t[] = {1, 2, 0, 0};
  CHECK(tree_json_line(cayley, PlaneTree::from_bfs(t)) ==
        R"({"n":4,"parents":[-1,0,1,1],"border":2,"weight":"1/2"})");
}
