#include "trendcast/predictors.hpp"

#include <cmath>
#include <sstream>

#include <spdlog/spdlog.h>

#include "trendcast/kernels.hpp"
#include "trendcast/ranking.hpp"

namespace trendcast {

std::string_view to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::TotalPop: return "total";
    case PredictorKind::RecentPop: return "recent";
    case PredictorKind::Pbp: return "pbp";
    case PredictorKind::Wpp: return "wpp";
    case PredictorKind::Ibp: return "ibp";
  }
  return "?";
}

PredictorKind parse_predictor_kind(std::string_view text) {
  if (text == "total" || text == "total_pop") return PredictorKind::TotalPop;
  if (text == "recent" || text == "recent_pop") return PredictorKind::RecentPop;
  if (text == "pbp") return PredictorKind::Pbp;
  if (text == "wpp") return PredictorKind::Wpp;
  if (text == "ibp") return PredictorKind::Ibp;
  throw ParameterError("unknown predictor kind '" + std::string(text) + "'");
}

PredictorSpec PredictorSpec::total_pop() {
  PredictorSpec s;
  s.kind = PredictorKind::TotalPop;
  return s;
}

PredictorSpec PredictorSpec::recent_pop(Duration past_window) {
  PredictorSpec s;
  s.kind = PredictorKind::RecentPop;
  s.past_window = past_window;
  return s;
}

PredictorSpec PredictorSpec::pbp(Duration past_window, double lambda) {
  PredictorSpec s;
  s.kind = PredictorKind::Pbp;
  s.past_window = past_window;
  s.lambda = lambda;
  return s;
}

PredictorSpec PredictorSpec::wpp(Duration past_window, double gamma, UserActivity activity) {
  PredictorSpec s;
  s.kind = PredictorKind::Wpp;
  s.past_window = past_window;
  s.gamma = gamma;
  s.activity = activity;
  return s;
}

PredictorSpec PredictorSpec::ibp(Duration past_window, double eta, Centrality centrality) {
  PredictorSpec s;
  s.kind = PredictorKind::Ibp;
  s.past_window = past_window;
  s.eta = eta;
  s.centrality = centrality;
  return s;
}

void PredictorSpec::validate() const {
  if (kind != PredictorKind::TotalPop && past_window <= 0) {
    throw ParameterError("past window T_P must be positive");
  }
  if (kind == PredictorKind::Pbp && !(lambda >= 0.0 && lambda <= 1.0)) {
    throw ParameterError("lambda must lie in [0, 1]");
  }
  if ((kind == PredictorKind::Ibp) != centrality.has_value()) {
    throw ParameterError("a centrality is required for IBP and only for IBP");
  }
  if (!std::isfinite(gamma) || !std::isfinite(eta)) {
    throw ParameterError("exponents must be finite");
  }
}

std::string PredictorSpec::label() const {
  std::ostringstream out;
  out << to_string(kind);
  switch (kind) {
    case PredictorKind::Pbp: out << "(lambda=" << lambda << ")"; break;
    case PredictorKind::Wpp: out << "(gamma=" << gamma << ")"; break;
    case PredictorKind::Ibp: out << "(eta=" << eta << "," << to_string(*centrality) << ")"; break;
    default: break;
  }
  return out.str();
}

std::vector<ItemId> ScoredRanking::top(std::size_t n) const {
  std::vector<ItemId> out;
  const std::size_t keep = std::min(n, entries.size());
  out.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) out.push_back(entries[k].item);
  return out;
}

UserInfluence UserInfluence::align(const TemporalBipartiteGraph& graph, const SocialGraph& social,
                                   const InfluenceVector& influence) {
  UserInfluence out;
  out.measure = influence.measure;
  out.values.assign(graph.num_users(), 0.0);
  for (std::size_t u = 0; u < graph.num_users(); ++u) {
    if (const auto s = social.user_index(graph.user_id(u))) {
      out.values[u] = influence.values[*s];
    } else {
      ++out.missing_users;
    }
  }
  return out;
}

namespace {

ScoredRanking rank_seen_items(const TemporalBipartiteGraph& graph, std::span<const double> scores,
                              Timestamp t_star) {
  const auto offsets = graph.item_offsets();
  const auto times = graph.item_times();
  const auto seen = [&](std::size_t v) { return times[offsets[v]] <= t_star; };
  const auto order = rank_top(scores, seen, scores.size());
  ScoredRanking out;
  out.t_star = t_star;
  out.entries.reserve(order.size());
  for (std::size_t v : order) out.entries.push_back({graph.item_id(v), scores[v]});
  return out;
}

// Sum of weight[user] over collections in (t* - window, t*], per item.
ScoredRanking weighted_window_ranking(const TemporalBipartiteGraph& graph,
                                      std::span<const double> user_weight, Timestamp t_star,
                                      Duration past_window) {
  std::vector<double> scores(graph.num_items());
  kernels::window_weighted_sums({graph.item_offsets(), graph.item_times()},
                                graph.item_collectors(), user_weight, t_star, past_window,
                                scores);
  return rank_seen_items(graph, scores, t_star);
}

void require_window(Duration past_window) {
  if (past_window <= 0) throw ParameterError("past window T_P must be positive");
}

}  // namespace

ScoredRanking score_pbp(const TemporalBipartiteGraph& graph, Timestamp t_star,
                        Duration past_window, double lambda) {
  const auto spec = PredictorSpec::pbp(past_window, lambda);
  spec.validate();
  const auto now = graph.item_degrees_at(t_star);
  const auto before = graph.item_degrees_at(window_start(t_star, past_window));
  std::vector<double> scores(now.size());
  for (std::size_t v = 0; v < now.size(); ++v) {
    scores[v] = static_cast<double>(now[v]) - lambda * static_cast<double>(before[v]);
  }
  auto out = rank_seen_items(graph, scores, t_star);
  out.spec = spec;
  return out;
}

ScoredRanking score_total_pop(const TemporalBipartiteGraph& graph, Timestamp t_star) {
  const auto now = graph.item_degrees_at(t_star);
  const std::vector<double> scores(now.begin(), now.end());
  auto out = rank_seen_items(graph, scores, t_star);
  out.spec = PredictorSpec::total_pop();
  return out;
}

ScoredRanking score_recent_pop(const TemporalBipartiteGraph& graph, Timestamp t_star,
                               Duration past_window) {
  require_window(past_window);
  const auto increase = graph.item_degree_increases(t_star, past_window);
  const std::vector<double> scores(increase.begin(), increase.end());
  auto out = rank_seen_items(graph, scores, t_star);
  out.spec = PredictorSpec::recent_pop(past_window);
  return out;
}

ScoredRanking score_wpp(const TemporalBipartiteGraph& graph, Timestamp t_star,
                        Duration past_window, double gamma, UserActivity activity) {
  const auto spec = PredictorSpec::wpp(past_window, gamma, activity);
  spec.validate();
  const auto degree = activity == UserActivity::Total
                          ? graph.user_degrees_at(t_star)
                          : graph.user_degree_increases(t_star, past_window);
  const std::vector<double> base(degree.begin(), degree.end());
  std::vector<double> weight(base.size());
  // Every collector inside the window has activity >= 1, so zero bases only
  // belong to users who never contribute.
  kernels::powers(base, gamma, weight);
  auto out = weighted_window_ranking(graph, weight, t_star, past_window);
  out.spec = spec;
  return out;
}

ScoredRanking score_ibp(const TemporalBipartiteGraph& graph, const UserInfluence& influence,
                        Timestamp t_star, Duration past_window, double eta) {
  const auto spec = PredictorSpec::ibp(past_window, eta, influence.measure);
  spec.validate();
  if (influence.values.size() != graph.num_users()) {
    throw ParameterError("influence vector is not aligned with the graph's users");
  }
  std::vector<double> weight(influence.values.size());
  kernels::powers(influence.values, eta, weight);
  auto out = weighted_window_ranking(graph, weight, t_star, past_window);
  out.spec = spec;

  if (eta < 0.0) {
    const auto times = graph.item_times();
    const auto users = graph.item_collectors();
    const Timestamp from = window_start(t_star, past_window);
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (times[k] > from && times[k] <= t_star && influence.values[users[k]] == 0.0) {
        ++out.zero_influence_skips;
      }
    }
    if (out.zero_influence_skips > 0) {
      spdlog::warn("IBP eta={}: {} collections by zero-influence users contribute 0", eta,
                   out.zero_influence_skips);
    }
  }
  return out;
}

ScoredRanking score_ibp(const TemporalBipartiteGraph& graph, const SocialGraph& social,
                        Timestamp t_star, Duration past_window, double eta,
                        Centrality centrality) {
  const auto influence =
      UserInfluence::align(graph, social, compute_influence(social, centrality));
  return score_ibp(graph, influence, t_star, past_window, eta);
}

ScoredRanking predict(const TemporalBipartiteGraph& graph, const PredictorSpec& spec,
                      Timestamp t_star, const UserInfluence* influence) {
  spec.validate();
  switch (spec.kind) {
    case PredictorKind::TotalPop: return score_total_pop(graph, t_star);
    case PredictorKind::RecentPop: return score_recent_pop(graph, t_star, spec.past_window);
    case PredictorKind::Pbp: return score_pbp(graph, t_star, spec.past_window, spec.lambda);
    case PredictorKind::Wpp:
      return score_wpp(graph, t_star, spec.past_window, spec.gamma, spec.activity);
    case PredictorKind::Ibp:
      if (influence == nullptr || influence->measure != *spec.centrality) {
        throw ParameterError("IBP needs a " + std::string(to_string(*spec.centrality)) +
                             " influence vector");
      }
      return score_ibp(graph, *influence, t_star, spec.past_window, spec.eta);
  }
  throw ParameterError("unknown predictor kind");
}

}  // namespace trendcast
