#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "trendcast/event_store.hpp"
#include "trendcast/predictors.hpp"

namespace trendcast {

struct EvalConfig {
  std::size_t n = 100;
  Duration past_window = 0;
  Duration future_window = 0;
  std::vector<Timestamp> test_dates;
};

struct TrueRanking {
  std::vector<ItemId> items;
  /// Nothing gained a link in the future window; the list is just the lowest ids.
  bool degenerate = false;
};

struct NewEntries {
  std::vector<ItemId> items;  // ascending
  std::size_t count() const { return items.size(); }
};

struct DateMetrics {
  Timestamp t_star = 0;
  double precision = 0.0;
  std::size_t new_entries = 0;
  std::size_t correct_new = 0;
  /// correct_new / new_entries, absent when there are no new entries.
  std::optional<double> new_entry_rate;
  bool degenerate_truth = false;
};

struct EvaluationReport {
  PredictorSpec spec;
  EvalConfig config;
  std::vector<DateMetrics> per_date;
  double mean_precision = 0.0;
  double mean_new_entries = 0.0;
  double mean_correct_new = 0.0;
  /// Mean over dates that have new entries; absent if none do.
  std::optional<double> mean_new_entry_rate;
};

/// Top n items by degree increase over (t*, t* + future_window]. Throws
/// DataError("truncated future window ...") when the window passes the last event.
TrueRanking true_ranking(const TemporalBipartiteGraph& graph, Timestamp t_star,
                         Duration future_window, std::size_t n);

/// |first n of predicted  ∩  first n of truth| / n.
double precision(std::span<const ItemId> predicted, std::span<const ItemId> truth, std::size_t n);

/// Future top n minus past top n, both ranked by degree increase.
NewEntries new_entries(const TemporalBipartiteGraph& graph, Timestamp t_star,
                       Duration past_window, Duration future_window, std::size_t n);

/// |first n of predicted  ∩  new_set|.
std::size_t correctly_guessed(std::span<const ItemId> predicted, std::span<const ItemId> new_set,
                              std::size_t n);

/// `count` equally spaced dates from first + past_window to last - future_window.
/// A single date sits at the midpoint. Throws DataError if the span is too short.
std::vector<Timestamp> regular_test_dates(const TemporalBipartiteGraph& graph, std::size_t count,
                                          Duration past_window, Duration future_window);

/// Checks a config against a graph; returns one message per problem.
std::vector<std::string> check_eval_config(const TemporalBipartiteGraph& graph,
                                           const EvalConfig& config);

/// Metrics of one prediction at one test date.
DateMetrics evaluate_date(const TemporalBipartiteGraph& graph, std::span<const ItemId> predicted,
                          Timestamp t_star, const EvalConfig& config);

/**
 * Scores `spec` at every test date and averages the metrics. A spec with
 * past_window 0 inherits config.past_window; otherwise both must agree, since
 * the past top n used for new entries is taken over the predictor's window.
 * Dates are evaluated in parallel. `influence` is required for IBP.
 */
EvaluationReport evaluate(const TemporalBipartiteGraph& graph, const PredictorSpec& spec,
                          const EvalConfig& config, const UserInfluence* influence = nullptr);

/// Column header shared by the per-date and summary CSV rows.
void write_report_header(std::ostream& out);
/// One row per date, then a summary row with t_star = "mean".
void write_report_rows(std::ostream& out, const EvaluationReport& report, bool per_date,
                       bool summary);

}  // namespace trendcast
