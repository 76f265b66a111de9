#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "trendcast/centrality.hpp"

using namespace trendcast;

namespace {

SocialGraph from_pairs(const std::vector<std::pair<int, int>>& pairs, std::vector<UserId> extra = {}) {
  std::vector<FollowEdge> edges;
  for (auto [f, l] : pairs) edges.push_back({f, l});
  return SocialGraph::from_edges(edges, extra);
}

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<std::pair<int, int>> random_digraph(std::mt19937_64& rng, int n, double p) {
  std::bernoulli_distribution edge(p);
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && edge(rng)) out.emplace_back(i, j);
  return out;
}

}  // namespace

TEST_CASE("edge list loading drops self-loops and duplicates") {
  std::istringstream two("# comment\n1 2\n2 1\n");
  const auto g = read_social_graph(two);
  CHECK(g.num_users() == 2);
  CHECK(g.num_edges() == 2);
  for (std::size_t v = 0; v < 2; ++v) {
    CHECK(g.in_degree(v) == 1);
    CHECK(g.out_degree(v) == 1);
  }

  std::istringstream repeated("1 2\n1 2\n1 2\n3 3\n");
  const auto r = read_social_graph(repeated);
  CHECK(r.num_edges() == 1);
  CHECK(r.duplicates_dropped() == 2);
  CHECK(r.self_loops_dropped() == 1);
  CHECK(r.num_users() == 3);

  std::istringstream bad("1 2\n1 x\n");
  CHECK_THROWS_WITH_AS(read_social_graph(bad), doctest::Contains("line 2"), DataError);
  std::istringstream extra("1 2 3\n");
  CHECK_THROWS_AS(read_social_graph(extra), DataError);
}

TEST_CASE("degree sums equal the edge count") {
  std::mt19937_64 rng(1);
  const auto g = from_pairs(random_digraph(rng, 30, 0.2));
  std::size_t in = 0, out = 0;
  for (std::size_t v = 0; v < g.num_users(); ++v) {
    in += g.in_degree(v);
    out += g.out_degree(v);
  }
  CHECK(in == g.num_edges());
  CHECK(out == g.num_edges());
}

TEST_CASE("in-degree influence") {
  const auto star = from_pairs({{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}});
  const auto star_in = influence_in_degree(star);
  CHECK(star_in.values == std::vector<double>{5, 0, 0, 0, 0, 0});

  const auto cycle = from_pairs({{0, 1}, {1, 2}, {2, 0}});
  CHECK(influence_in_degree(cycle).values == std::vector<double>{1, 1, 1});

  const auto empty = from_pairs({}, {4, 9});
  CHECK(influence_in_degree(empty).values == std::vector<double>{0, 0});
}

TEST_CASE("pagerank basic cases") {
  const auto cycle = influence_pagerank(from_pairs({{0, 1}, {1, 2}, {2, 0}}));
  CHECK(cycle.converged);
  for (double v : cycle.values) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-12));

  const auto isolated = influence_pagerank(from_pairs({}, {1, 2}));
  CHECK(isolated.values[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(isolated.values[1] == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(influence_pagerank(from_pairs({{0, 1}}), {1.0, 1e-10, 100}), ParameterError);
}

TEST_CASE("pagerank matches a dense linear solve") {
  // Mixed degrees with a dangling user (4 follows nobody).
  const std::vector<std::pair<int, int>> five{{0, 1}, {0, 2}, {1, 2}, {2, 0}, {3, 2}, {3, 4}, {0, 4}};
  const auto pr = influence_pagerank(from_pairs(five));
  const auto expected = oracle::pagerank_dense(5, five, 0.85);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(pr.values[i] - expected[i]) < 1e-8);
  CHECK(std::abs(total(pr.values) - 1.0) < 1e-8);

  std::mt19937_64 rng(2024);
  for (int round = 0; round < 20; ++round) {
    const int n = 5 + round * 2;
    const auto edges = random_digraph(rng, n, 0.12);
    std::vector<UserId> all(n);
    std::iota(all.begin(), all.end(), 0);
    const auto got = influence_pagerank(from_pairs(edges, all));
    const auto want = oracle::pagerank_dense(n, edges, 0.85);
    for (int i = 0; i < n; ++i) REQUIRE(std::abs(got.values[i] - want[i]) < 1e-8);
  }
}

TEST_CASE("leaderrank basic cases") {
  const auto complete = influence_leaderrank(from_pairs({{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}}));
  CHECK(complete.converged);
  for (double v : complete.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

  const auto single = influence_leaderrank(from_pairs({}, {42}));
  REQUIRE(single.values.size() == 1);
  CHECK(single.values[0] == doctest::Approx(1.0));
}

TEST_CASE("leaderrank matches power iteration on the augmented graph") {
  const std::vector<std::pair<int, int>> six{{0, 1}, {0, 2}, {1, 2}, {3, 2}, {4, 2}, {5, 4}, {2, 5}, {4, 0}};
  const auto lr = influence_leaderrank(from_pairs(six));
  const auto expected = oracle::leaderrank_dense(6, six, 1e-12);
  CHECK(lr.converged);
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(lr.values[i] - expected[i]) < 1e-8);
  CHECK(std::abs(total(lr.values) - 6.0) < 6e-6);
}

TEST_CASE("centralities are invariant under relabeling") {
  std::mt19937_64 rng(5);
  const int n = 25;
  const auto edges = random_digraph(rng, n, 0.15);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::pair<int, int>> relabeled;
  for (auto [f, l] : edges) relabeled.emplace_back(perm[f], perm[l]);
  std::vector<UserId> all(n);
  std::iota(all.begin(), all.end(), 0);

  const auto a = from_pairs(edges, all);
  const auto b = from_pairs(relabeled, all);
  for (auto measure : {Centrality::PageRank, Centrality::LeaderRank}) {
    const auto x = compute_influence(a, measure);
    const auto y = compute_influence(b, measure);
    for (int i = 0; i < n; ++i) CHECK(std::abs(x.values[i] - y.values[perm[i]]) < 1e-9);
  }
}

TEST_CASE("vertex-transitive graphs give uniform scores and stars favour the hub") {
  // Directed ring with chords i -> i+1, i -> i+3 (mod 8).
  std::vector<std::pair<int, int>> ring;
  for (int i = 0; i < 8; ++i) {
    ring.emplace_back(i, (i + 1) % 8);
    ring.emplace_back(i, (i + 3) % 8);
  }
  const auto g = from_pairs(ring);
  for (auto measure : {Centrality::PageRank, Centrality::LeaderRank}) {
    const auto s = compute_influence(g, measure);
    for (double v : s.values) CHECK(v == doctest::Approx(s.values[0]).epsilon(1e-9));
  }

  const auto star = from_pairs({{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}});
  for (auto measure : {Centrality::InDegree, Centrality::PageRank, Centrality::LeaderRank}) {
    const auto s = compute_influence(star, measure);
    for (std::size_t i = 1; i < s.values.size(); ++i) CHECK(s.values[0] > s.values[i]);
  }
}

TEST_CASE("pagerank reports non-convergence") {
  std::mt19937_64 rng(8);
  const auto g = from_pairs(random_digraph(rng, 40, 0.1));
  const auto pr = influence_pagerank(g, {0.85, 1e-30, 3});
  CHECK_FALSE(pr.converged);
  CHECK(pr.iterations == 3);
  CHECK(pr.residual > 0.0);
}
