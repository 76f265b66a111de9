#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "doctest.h"
#include "oracles.hpp"
#include "trendcast/predictors.hpp"

using namespace trendcast;

namespace {

std::vector<ItemId> order(const ScoredRanking& r) { return r.top(r.entries.size()); }

// Item 1: 90 collections before t=100, 10 inside (100, 200]. Item 2: 15 inside.
TemporalBipartiteGraph hundred_item() {
  std::vector<Event> ev;
  for (int u = 0; u < 90; ++u) ev.push_back({u, 1, 50});
  for (int u = 90; u < 100; ++u) ev.push_back({u, 1, 150});
  for (int u = 0; u < 15; ++u) ev.push_back({u, 2, 160});
  return TemporalBipartiteGraph::build(ev);
}

}  // namespace

TEST_CASE("pbp score is k(t*) - lambda k(t* - T_P)") {
  const auto g = hundred_item();
  const auto r = score_pbp(g, 200, 100, 0.9);
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].item == 1);
  CHECK(r.entries[0].score == doctest::Approx(19.0).epsilon(1e-15));
  CHECK(r.entries[1].score == 15.0);
  CHECK_THROWS_AS(score_pbp(g, 200, 100, 1.5), ParameterError);
  CHECK_THROWS_AS(score_pbp(g, 200, 100, -0.1), ParameterError);
}

TEST_CASE("total and recent popularity") {
  std::vector<Event> ev;
  for (int u = 0; u < 10; ++u) ev.push_back({u, 100, 1});
  for (int u = 0; u < 5; ++u) ev.push_back({u, 200, 1});
  ev.push_back({0, 300, 1});
  const auto g = TemporalBipartiteGraph::build(ev);
  CHECK(order(score_total_pop(g, 5)) == std::vector<ItemId>{100, 200, 300});

  const auto recent = score_recent_pop(g, 50, 10);
  for (const auto& e : recent.entries) CHECK(e.score == 0.0);
}

TEST_CASE("wpp weights each collector by degree^gamma") {
  // User 1 collects four items; item 9 is collected only by them inside the window.
  const auto g = TemporalBipartiteGraph::build({{1, 6, 1}, {1, 7, 2}, {1, 8, 3}, {1, 9, 10}, {2, 6, 10}});
  const auto r = score_wpp(g, 10, 5, 1.0);
  double s9 = -1;
  for (const auto& e : r.entries) if (e.item == 9) s9 = e.score;
  CHECK(s9 == 4.0);

  const auto gamma0 = score_wpp(g, 10, 5, 0.0);
  for (const auto& e : gamma0.entries) {
    CHECK(e.score == double(g.item_degree_increase(e.item, 10, 5)));
  }
}

TEST_CASE("wpp and ibp match brute-force double loops") {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 5; ++round) {
    const auto raw = oracle::random_events(rng, 20, 10, 120, 1000);
    const auto events = oracle::dedup(raw);
    const auto g = TemporalBipartiteGraph::build(raw);

    for (auto activity : {UserActivity::Total, UserActivity::Recent}) {
      const auto got = score_wpp(g, 700, 300, 0.5, activity);
      const auto want = oracle::weighted(events, 700, 300, [&](UserId u) {
        const auto k = activity == UserActivity::Total ? oracle::user_degree(events, u, 700)
                                                       : oracle::user_degree(events, u, 700) -
                                                             oracle::user_degree(events, u, 400);
        return std::pow(double(k), 0.5);
      });
      REQUIRE(got.entries.size() == want.size());
      for (std::size_t k = 0; k < want.size(); ++k) {
        CHECK(got.entries[k].item == want[k].first);
        CHECK(got.entries[k].score == doctest::Approx(want[k].second).epsilon(1e-12));
      }
    }

    // In-degree influence from a follow graph over the fixture users; some users stay out.
    std::vector<FollowEdge> follows;
    std::uniform_int_distribution<int> pick(0, 19);
    for (int k = 0; k < 40; ++k) follows.push_back({pick(rng) * 7 + 3, pick(rng) * 7 + 3});
    const auto social = SocialGraph::from_edges(follows);
    const auto got = score_ibp(g, social, 700, 300, 1.0, Centrality::InDegree);
    const auto followers_of = [&](UserId u) {
      std::set<UserId> f;
      for (const auto& e : follows) if (e.leader == u && e.follower != u) f.insert(e.follower);
      return double(f.size());
    };
    const auto want = oracle::weighted(events, 700, 300, followers_of);
    REQUIRE(got.entries.size() == want.size());
    for (std::size_t k = 0; k < want.size(); ++k) {
      CHECK(got.entries[k].item == want[k].first);
      CHECK(got.entries[k].score == doctest::Approx(want[k].second).epsilon(1e-12));
    }
  }
}

TEST_CASE("ibp single collector and zero-influence users") {
  const auto g = TemporalBipartiteGraph::build({{1, 5, 10}, {2, 6, 10}});
  UserInfluence inf;
  inf.measure = Centrality::PageRank;
  inf.values = {2.0, 0.0};
  const auto r = score_ibp(g, inf, 10, 5, 1.0);
  CHECK(r.entries[0].item == 5);
  CHECK(r.entries[0].score == 2.0);
  CHECK(r.entries[1].score == 0.0);

  const auto neg = score_ibp(g, inf, 10, 5, -1.0);
  CHECK(neg.zero_influence_skips == 1);
  CHECK(neg.entries[0].score == 0.5);
  CHECK(neg.entries[1].score == 0.0);

  const auto eta0 = score_ibp(g, inf, 10, 5, 0.0);
  CHECK(eta0.entries[0].score == 1.0);
  CHECK(eta0.entries[1].score == 1.0);
}

TEST_CASE("reduction identities hold on random fixtures") {
  std::mt19937_64 rng(4242);
  for (int round = 0; round < 20; ++round) {
    const auto g = TemporalBipartiteGraph::build(oracle::random_events(rng, 60, 30, 700, 10000));
    std::vector<FollowEdge> follows;
    std::uniform_int_distribution<int> pick(0, 59);
    for (int k = 0; k < 150; ++k) follows.push_back({pick(rng) * 7 + 3, pick(rng) * 7 + 3});
    const auto social = SocialGraph::from_edges(follows);
    const Timestamp t = 6000;
    const Duration tp = 1500;

    CHECK(order(score_pbp(g, t, tp, 0.0)) == order(score_total_pop(g, t)));
    const auto recent = order(score_recent_pop(g, t, tp));
    CHECK(order(score_pbp(g, t, tp, 1.0)) == recent);
    CHECK(order(score_wpp(g, t, tp, 0.0)) == recent);
    for (auto c : {Centrality::InDegree, Centrality::PageRank, Centrality::LeaderRank}) {
      CHECK(order(score_ibp(g, social, t, tp, 0.0, c)) == recent);
    }

    // s(lambda) = dk + (1 - lambda) k(t* - T_P)
    const double lambda = 0.37;
    for (const auto& e : score_pbp(g, t, tp, lambda).entries) {
      const double dk = double(g.item_degree_increase(e.item, t, tp));
      const double before = double(g.item_degree_at(e.item, t - tp));
      CHECK(std::abs(e.score - (dk + (1 - lambda) * before)) < 1e-12);
    }

    // Non-negativity and exact zeros for idle items.
    for (const auto& e : score_wpp(g, t, tp, 0.8).entries) {
      CHECK(e.score >= 0.0);
      if (g.item_degree_increase(e.item, t, tp) == 0) CHECK(e.score == 0.0);
    }
    for (const auto& e : score_ibp(g, social, t, tp, 1.3, Centrality::PageRank).entries) {
      CHECK(e.score >= 0.0);
      if (g.item_degree_increase(e.item, t, tp) == 0) CHECK(e.score == 0.0);
    }
  }
}

TEST_CASE("rankings are deterministic and sorted") {
  std::mt19937_64 rng(9);
  const auto g = TemporalBipartiteGraph::build(oracle::random_events(rng, 80, 40, 1500, 10000));
  const auto a = score_wpp(g, 7000, 2000, -0.7);
  const auto b = score_wpp(g, 7000, 2000, -0.7);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t k = 0; k < a.entries.size(); ++k) {
    CHECK(a.entries[k].item == b.entries[k].item);
    CHECK(a.entries[k].score == b.entries[k].score);
    if (k > 0) {
      CHECK(a.entries[k - 1].score >= a.entries[k].score);
      if (a.entries[k - 1].score == a.entries[k].score) CHECK(a.entries[k - 1].item < a.entries[k].item);
    }
  }
}

TEST_CASE("predictor spec validation") {
  CHECK_NOTHROW(PredictorSpec::pbp(10, 0.5).validate());
  CHECK_THROWS_AS(PredictorSpec::pbp(0, 0.5).validate(), ParameterError);
  CHECK_THROWS_AS(PredictorSpec::pbp(10, 2.0).validate(), ParameterError);
  auto wpp = PredictorSpec::wpp(10, 1.0);
  wpp.centrality = Centrality::PageRank;
  CHECK_THROWS_AS(wpp.validate(), ParameterError);
  const auto g = TemporalBipartiteGraph::build({{1, 1, 1}});
  CHECK_THROWS_AS(predict(g, PredictorSpec::ibp(10, 1.0, Centrality::PageRank), 1), ParameterError);
}
