#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "trendcast/ingestion.hpp"

using namespace trendcast;

namespace {

std::string ratings_csv(const std::vector<std::tuple<int, int, double, int>>& rows) {
  std::ostringstream out;
  out << "user,item,rating,timestamp\n";
  for (auto [u, i, r, t] : rows) out << u << ',' << i << ',' << r << ',' << t << '\n';
  return out.str();
}

std::vector<Event> many_users(int users, int per_user) {
  std::vector<Event> ev;
  for (int u = 0; u < users; ++u)
    for (int i = 0; i < per_user + u % 5; ++i) ev.push_back({u, i, u * 100 + i});
  return ev;
}

}  // namespace

TEST_CASE("ratings threshold keeps 3.0 and drops 2.5") {
  std::istringstream in(ratings_csv({{1, 1, 3.0, 10}, {1, 2, 2.5, 11}, {2, 1, 4.5, 12}, {2, 3, 0.5, 13},
                                     {3, 1, 5.0, 1}, {3, 2, 1.0, 2}, {3, 3, 3.5, 3}, {4, 4, 2.0, 4},
                                     {4, 5, 3.0, 5}, {5, 5, 4.0, 6}}));
  const auto records = read_ratings(in);
  REQUIRE(records.size() == 10);
  std::size_t dropped = 0;
  const auto events = apply_threshold(records, 3.0, &dropped);
  CHECK(events.size() == 6);
  CHECK(dropped == 4);
  CHECK(events.front() == Event{1, 1, 10});
}

TEST_CASE("ratings parser errors carry line numbers") {
  std::istringstream bad("user,item,rating,timestamp\n1,2,3,4\n1,2,x,4\n");
  CHECK_THROWS_WITH_AS(read_ratings(bad), doctest::Contains("line 3"), DataError);
  std::istringstream off("user,item,rating,timestamp\n1,2,7,4\n");
  CHECK_THROWS_WITH_AS(read_ratings(off), doctest::Contains("off the 0.5-5 scale"), DataError);
  std::istringstream header("u,i,r,t\n");
  CHECK_THROWS_AS(read_ratings(header), DataError);
  std::istringstream short_row("user,item,rating,timestamp\n1,2,3\n");
  CHECK_THROWS_WITH_AS(read_ratings(short_row), doctest::Contains("line 2"), DataError);
}

TEST_CASE("votes") {
  std::istringstream in("user,item,timestamp\n1,2,3\n4,5,6\r\n1,2,9\n");
  const auto events = read_votes(in);
  CHECK(events.size() == 3);
  CHECK(events[1] == Event{4, 5, 6});
  std::istringstream bad("user,item,timestamp\n1,2\n");
  CHECK_THROWS_WITH_AS(read_votes(bad), doctest::Contains("line 2"), DataError);
  std::istringstream empty("user,item,timestamp\n");
  CHECK(read_votes(empty).empty());
}

TEST_CASE("user subsetting") {
  const auto ev = many_users(50, 18);  // degrees 18..22
  std::set<UserId> eligible;
  for (int u = 0; u < 50; ++u) if (18 + u % 5 >= 20) eligible.insert(u);

  const auto all = subset_users(ev, eligible.size(), 20, 1);
  std::set<UserId> kept;
  for (const auto& e : all) kept.insert(e.user);
  CHECK(kept == eligible);

  const auto a = subset_users(ev, 10, 20, 42);
  const auto b = subset_users(ev, 10, 20, 42);
  CHECK(a == b);
  std::set<UserId> chosen;
  for (const auto& e : a) chosen.insert(e.user);
  CHECK(chosen.size() == 10);
  for (UserId u : chosen) CHECK(eligible.count(u) == 1);

  // Shuffling the input permutes the output but selects the same users.
  auto shuffled = ev;
  std::mt19937_64 rng(3);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto c = subset_users(shuffled, 10, 20, 42);
  auto sorted_a = a;
  const auto by_all = [](const Event& x, const Event& y) {
    return std::tie(x.user, x.item, x.timestamp) < std::tie(y.user, y.item, y.timestamp);
  };
  std::sort(sorted_a.begin(), sorted_a.end(), by_all);
  std::sort(c.begin(), c.end(), by_all);
  CHECK(sorted_a == c);

  CHECK_THROWS_AS(subset_users(ev, 0, 20, 1), ParameterError);
  CHECK_THROWS_WITH_AS(subset_users(ev, 40, 20, 1), doctest::Contains("only 30 users"), DataError);
}

TEST_CASE("load_ratings applies threshold then subset, with both eligibility modes") {
  const auto dir = std::filesystem::temp_directory_path() / "trendcast_ingest_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "ratings.csv";
  {
    std::ofstream out(path);
    out << "user,item,rating,timestamp\n";
    // user 1: 3 high ratings; user 2: 1 high + 2 low; user 3: 2 high
    out << "1,1,4,1\n1,2,4,2\n1,3,4,3\n2,1,4,4\n2,2,1,5\n2,3,1,6\n3,1,5,7\n3,2,5,8\n";
  }
  DatasetSpec spec;
  spec.format = DatasetFormat::Ratings;
  spec.min_user_degree = 3;
  spec.subset_users = 1;
  const auto after = load_ratings(path, spec);
  CHECK(after.size() == 3);
  for (const auto& e : after) CHECK(e.user == 1);

  spec.subset_users = 2;
  CHECK_THROWS_AS(load_ratings(path, spec), DataError);
  spec.eligibility = Eligibility::BeforeThreshold;
  const auto before = load_ratings(path, spec);
  std::set<UserId> users;
  for (const auto& e : before) users.insert(e.user);
  CHECK(users == std::set<UserId>{1, 2});
  CHECK(before.size() == 4);

  spec.format = DatasetFormat::Votes;
  CHECK_THROWS_AS(spec.validate(), ParameterError);
  std::filesystem::remove_all(dir);
}
