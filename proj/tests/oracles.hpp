#pragma once

// Independent brute-force implementations used as test oracles. Nothing here
// touches the library's indices or kernels: every quantity is recomputed by
// scanning plain event lists or by dense linear algebra.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "trendcast/centrality.hpp"
#include "trendcast/event_store.hpp"

namespace oracle {

using trendcast::Event;
using trendcast::ItemId;
using trendcast::Timestamp;
using trendcast::UserId;

/// Earliest timestamp per (user, item) pair.
inline std::vector<Event> dedup(const std::vector<Event>& events) {
  std::map<std::pair<UserId, ItemId>, Timestamp> first;
  for (const auto& e : events) {
    auto [it, inserted] = first.emplace(std::make_pair(e.user, e.item), e.timestamp);
    if (!inserted) it->second = std::min(it->second, e.timestamp);
  }
  std::vector<Event> out;
  for (const auto& [key, t] : first) out.push_back({key.first, key.second, t});
  return out;
}

inline std::int64_t item_degree(const std::vector<Event>& events, ItemId item, Timestamp t) {
  std::int64_t k = 0;
  for (const auto& e : events) k += (e.item == item && e.timestamp <= t);
  return k;
}

inline std::int64_t user_degree(const std::vector<Event>& events, UserId user, Timestamp t) {
  std::int64_t k = 0;
  for (const auto& e : events) k += (e.user == user && e.timestamp <= t);
  return k;
}

/// Events of `item` with timestamp in (t - w, t].
inline std::int64_t increase(const std::vector<Event>& events, ItemId item, Timestamp t,
                             std::int64_t w) {
  std::int64_t k = 0;
  for (const auto& e : events) k += (e.item == item && e.timestamp > t - w && e.timestamp <= t);
  return k;
}

inline std::set<ItemId> items(const std::vector<Event>& events) {
  std::set<ItemId> out;
  for (const auto& e : events) out.insert(e.item);
  return out;
}

inline std::set<UserId> users(const std::vector<Event>& events) {
  std::set<UserId> out;
  for (const auto& e : events) out.insert(e.user);
  return out;
}

/// Full sort of (score, item) over items with at least one event at or before t.
template <class ScoreOf>
std::vector<std::pair<ItemId, double>> ranking(const std::vector<Event>& events, Timestamp t,
                                               ScoreOf score_of) {
  std::vector<std::pair<ItemId, double>> out;
  for (ItemId a : items(events)) {
    if (item_degree(events, a, t) > 0) out.emplace_back(a, score_of(a));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  return out;
}

inline std::vector<ItemId> ids(const std::vector<std::pair<ItemId, double>>& r, std::size_t n) {
  std::vector<ItemId> out;
  for (std::size_t k = 0; k < std::min(n, r.size()); ++k) out.push_back(r[k].first);
  return out;
}

inline std::vector<ItemId> top_by_increase(const std::vector<Event>& events, Timestamp t,
                                           std::int64_t w, std::size_t n) {
  return ids(ranking(events, t, [&](ItemId a) { return double(increase(events, a, t, w)); }), n);
}

/// s_a = sum over collections of a in (t - w, t] of weight(user).
template <class WeightOf>
std::vector<std::pair<ItemId, double>> weighted(const std::vector<Event>& events, Timestamp t,
                                                std::int64_t w, WeightOf weight_of) {
  return ranking(events, t, [&](ItemId a) {
    double s = 0.0;
    for (const auto& e : events) {
      if (e.item == a && e.timestamp > t - w && e.timestamp <= t) s += weight_of(e.user);
    }
    return s;
  });
}

inline std::size_t overlap(std::vector<ItemId> a, std::vector<ItemId> b) {
  std::set<ItemId> sa(a.begin(), a.end());
  std::size_t k = 0;
  for (ItemId x : std::set<ItemId>(b.begin(), b.end())) k += sa.count(x);
  return k;
}

inline double precision(const std::vector<ItemId>& predicted, const std::vector<ItemId>& truth,
                        std::size_t n) {
  std::vector<ItemId> p(predicted.begin(), predicted.begin() + std::min(n, predicted.size()));
  std::vector<ItemId> q(truth.begin(), truth.begin() + std::min(n, truth.size()));
  return double(overlap(p, q)) / double(n);
}

inline std::vector<ItemId> new_entries(const std::vector<Event>& events, Timestamp t,
                                       std::int64_t past, std::int64_t future, std::size_t n) {
  const auto before = top_by_increase(events, t, past, n);
  const auto after = top_by_increase(events, t + future, future, n);
  std::vector<ItemId> out;
  for (ItemId a : after) {
    if (std::find(before.begin(), before.end(), a) == before.end()) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Dense solve of (I - d M) s = (1 - d)/N with dangling columns replaced by 1/N.
/// M[j][i] = 1/out(i) when i follows j.
inline std::vector<double> pagerank_dense(std::size_t n,
                                          const std::vector<std::pair<int, int>>& follows,
                                          double damping) {
  std::vector<int> out(n, 0);
  for (auto [f, l] : follows) ++out[f];
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (auto [f, l] : follows) m(l, f) += 1.0 / out[f];
  for (std::size_t i = 0; i < n; ++i) {
    if (out[i] == 0) m.col(i).setConstant(1.0 / double(n));
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - damping * m;
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(n, (1.0 - damping) / double(n));
  const Eigen::VectorXd s = a.partialPivLu().solve(b);
  return {s.data(), s.data() + n};
}

/// Power iteration on the dense (N+1)-node ground-augmented column-stochastic
/// matrix, followed by the ground redistribution.
inline std::vector<double> leaderrank_dense(std::size_t n,
                                            const std::vector<std::pair<int, int>>& follows,
                                            double tol, int max_iter = 100000) {
  const std::size_t g = n;
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n + 1, n + 1);  // adj(from, to)
  for (auto [f, l] : follows) adj(f, l) = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    adj(i, g) = 1.0;
    adj(g, i) = 1.0;
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n + 1, n + 1);  // p(to, from)
  for (std::size_t i = 0; i <= n; ++i) {
    const double d = adj.row(i).sum();
    for (std::size_t j = 0; j <= n; ++j) {
      if (adj(i, j) != 0.0) p(j, i) = 1.0 / d;
    }
  }
  Eigen::VectorXd s = Eigen::VectorXd::Ones(n + 1);
  s(g) = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd next = p * s;
    const double change = (next - s).lpNorm<1>();
    s = next;
    if (change < tol) break;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = s(i) + s(g) / double(n);
  return out;
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j < idx.size() && v[idx[j]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k < j; ++k) r[idx[k]] = 0.5 * double(i + j - 1);
      i = j;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Random event stream with duplicates, for fixture-based tests.
inline std::vector<Event> random_events(std::mt19937_64& rng, int users, int items, int events,
                                        Timestamp span) {
  std::uniform_int_distribution<int> u(0, users - 1);
  std::uniform_int_distribution<int> a(0, items - 1);
  std::uniform_int_distribution<Timestamp> t(0, span);
  std::vector<Event> out;
  for (int k = 0; k < events; ++k) out.push_back({u(rng) * 7 + 3, a(rng) * 5 + 11, t(rng)});
  return out;
}

}  // namespace oracle
