#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trendcast/centrality.hpp"
#include "trendcast/event_store.hpp"

namespace trendcast {

enum class PredictorKind { TotalPop, RecentPop, Pbp, Wpp, Ibp };

std::string_view to_string(PredictorKind kind);
PredictorKind parse_predictor_kind(std::string_view text);

/// How WPP measures a user's activity.
enum class UserActivity { Total, Recent };

struct PredictorSpec {
  PredictorKind kind = PredictorKind::RecentPop;
  double lambda = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  Duration past_window = 0;
  std::optional<Centrality> centrality;
  UserActivity activity = UserActivity::Total;

  static PredictorSpec total_pop();
  static PredictorSpec recent_pop(Duration past_window);
  static PredictorSpec pbp(Duration past_window, double lambda);
  static PredictorSpec wpp(Duration past_window, double gamma,
                           UserActivity activity = UserActivity::Total);
  static PredictorSpec ibp(Duration past_window, double eta, Centrality centrality);

  /// Throws ParameterError when a field is out of range or inconsistent with kind.
  void validate() const;
  std::string label() const;
};

struct ScoredEntry {
  ItemId item = 0;
  double score = 0.0;
};

/// Every item seen by t_star, best first, ties by ascending item id.
struct ScoredRanking {
  std::vector<ScoredEntry> entries;
  Timestamp t_star = 0;
  PredictorSpec spec;
  /// Collectors with zero influence skipped under a negative exponent.
  std::size_t zero_influence_skips = 0;

  std::vector<ItemId> top(std::size_t n) const;
};

/// Social influence re-indexed onto a bipartite graph's users. Users missing
/// from the social network get influence 0.
struct UserInfluence {
  std::vector<double> values;
  Centrality measure = Centrality::InDegree;
  std::size_t missing_users = 0;

  static UserInfluence align(const TemporalBipartiteGraph& graph, const SocialGraph& social,
                             const InfluenceVector& influence);
};

/// s = k(t*).
ScoredRanking score_total_pop(const TemporalBipartiteGraph& graph, Timestamp t_star);
/// s = k(t*) - k(t* - past_window).
ScoredRanking score_recent_pop(const TemporalBipartiteGraph& graph, Timestamp t_star,
                               Duration past_window);
/// s = k(t*) - lambda * k(t* - past_window), lambda in [0, 1].
ScoredRanking score_pbp(const TemporalBipartiteGraph& graph, Timestamp t_star,
                        Duration past_window, double lambda);
/// Each collection inside the past window counts activity^gamma, where activity is
/// the collector's degree at t* (or their degree increase in the window).
ScoredRanking score_wpp(const TemporalBipartiteGraph& graph, Timestamp t_star,
                        Duration past_window, double gamma,
                        UserActivity activity = UserActivity::Total);
/// Each collection inside the past window counts influence^eta. Zero influence with
/// eta < 0 contributes 0 and is counted in zero_influence_skips.
ScoredRanking score_ibp(const TemporalBipartiteGraph& graph, const UserInfluence& influence,
                        Timestamp t_star, Duration past_window, double eta);
ScoredRanking score_ibp(const TemporalBipartiteGraph& graph, const SocialGraph& social,
                        Timestamp t_star, Duration past_window, double eta,
                        Centrality centrality);

/// Dispatches on spec.kind. IBP requires `influence` with a matching measure.
ScoredRanking predict(const TemporalBipartiteGraph& graph, const PredictorSpec& spec,
                      Timestamp t_star, const UserInfluence* influence = nullptr);

}  // namespace trendcast
