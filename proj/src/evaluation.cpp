#include "trendcast/evaluation.hpp"

#include <algorithm>
#include <exception>
#include <ostream>
#include <string>

#include "trendcast/csv.hpp"

namespace trendcast {

namespace {

std::vector<ItemId> sorted_prefix(std::span<const ItemId> items, std::size_t n) {
  std::vector<ItemId> out(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(
                                                            std::min(n, items.size())));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t intersection_size(const std::vector<ItemId>& a, const std::vector<ItemId>& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::vector<ItemId> ids_of(const std::vector<ItemIncrease>& ranked) {
  std::vector<ItemId> out;
  out.reserve(ranked.size());
  for (const auto& r : ranked) out.push_back(r.item);
  return out;
}

}  // namespace

TrueRanking true_ranking(const TemporalBipartiteGraph& graph, Timestamp t_star,
                         Duration future_window, std::size_t n) {
  if (future_window <= 0) throw ParameterError("future window T_F must be positive");
  if (t_star > graph.last_timestamp() - future_window) {
    throw DataError("truncated future window: t*=" + std::to_string(t_star) + " + T_F=" +
                    std::to_string(future_window) + " passes the last event at " +
                    std::to_string(graph.last_timestamp()));
  }
  const auto ranked = graph.top_items_by_increase(t_star + future_window, future_window, n);
  TrueRanking out;
  out.items = ids_of(ranked);
  out.degenerate = ranked.empty() || ranked.front().increase == 0;
  return out;
}

double precision(std::span<const ItemId> predicted, std::span<const ItemId> truth, std::size_t n) {
  if (n == 0) throw ParameterError("ranking depth n must be at least 1");
  const auto hits = intersection_size(sorted_prefix(predicted, n), sorted_prefix(truth, n));
  return static_cast<double>(hits) / static_cast<double>(n);
}

NewEntries new_entries(const TemporalBipartiteGraph& graph, Timestamp t_star,
                       Duration past_window, Duration future_window, std::size_t n) {
  const auto past = sorted_prefix(ids_of(graph.top_items_by_increase(t_star, past_window, n)), n);
  const auto future = sorted_prefix(true_ranking(graph, t_star, future_window, n).items, n);
  NewEntries out;
  std::set_difference(future.begin(), future.end(), past.begin(), past.end(),
                      std::back_inserter(out.items));
  return out;
}

std::size_t correctly_guessed(std::span<const ItemId> predicted, std::span<const ItemId> new_set,
                              std::size_t n) {
  return intersection_size(sorted_prefix(predicted, n),
                           sorted_prefix(new_set, new_set.size()));
}

std::vector<Timestamp> regular_test_dates(const TemporalBipartiteGraph& graph, std::size_t count,
                                          Duration past_window, Duration future_window) {
  if (count == 0) throw ParameterError("test date count must be at least 1");
  const Timestamp lo = graph.first_timestamp() + past_window;
  const Timestamp hi = graph.last_timestamp() - future_window;
  if (hi < lo) {
    throw DataError("data span " + std::to_string(graph.last_timestamp() - graph.first_timestamp()) +
                    "s is shorter than T_P + T_F = " + std::to_string(past_window + future_window) +
                    "s");
  }
  if (count == 1) return {lo + (hi - lo) / 2};
  if (static_cast<Timestamp>(count - 1) > hi - lo) {
    throw DataError("cannot place " + std::to_string(count) + " distinct test dates in the span");
  }
  std::vector<Timestamp> dates(count);
  const Timestamp span = hi - lo;
  const auto steps = static_cast<Timestamp>(count - 1);
  for (std::size_t k = 0; k < count; ++k) {
    const auto kk = static_cast<Timestamp>(k);
    // span * k / steps without overflow for realistic spans.
    dates[k] = lo + (span / steps) * kk + ((span % steps) * kk) / steps;
  }
  return dates;
}

std::vector<std::string> check_eval_config(const TemporalBipartiteGraph& graph,
                                           const EvalConfig& config) {
  std::vector<std::string> problems;
  if (config.n == 0) problems.push_back("ranking depth n must be at least 1");
  if (config.past_window <= 0) problems.push_back("past window T_P must be positive");
  if (config.future_window <= 0) problems.push_back("future window T_F must be positive");
  if (config.test_dates.empty()) problems.push_back("no test dates");
  for (std::size_t k = 1; k < config.test_dates.size(); ++k) {
    if (config.test_dates[k] <= config.test_dates[k - 1]) {
      problems.push_back("test dates must be strictly increasing (date " +
                         std::to_string(config.test_dates[k]) + ")");
    }
  }
  for (const Timestamp t : config.test_dates) {
    if (t > graph.last_timestamp() - config.future_window) {
      problems.push_back("test date " + std::to_string(t) + ": future window T_F=" +
                         std::to_string(config.future_window) + " passes the data end " +
                         std::to_string(graph.last_timestamp()));
    }
  }
  return problems;
}

DateMetrics evaluate_date(const TemporalBipartiteGraph& graph, std::span<const ItemId> predicted,
                          Timestamp t_star, const EvalConfig& config) {
  DateMetrics m;
  m.t_star = t_star;
  const auto truth = true_ranking(graph, t_star, config.future_window, config.n);
  m.degenerate_truth = truth.degenerate;
  m.precision = precision(predicted, truth.items, config.n);
  const auto fresh = new_entries(graph, t_star, config.past_window, config.future_window, config.n);
  m.new_entries = fresh.count();
  m.correct_new = correctly_guessed(predicted, fresh.items, config.n);
  if (m.new_entries > 0) {
    m.new_entry_rate = static_cast<double>(m.correct_new) / static_cast<double>(m.new_entries);
  }
  return m;
}

EvaluationReport evaluate(const TemporalBipartiteGraph& graph, const PredictorSpec& spec,
                          const EvalConfig& config, const UserInfluence* influence) {
  EvaluationReport report;
  report.config = config;
  report.spec = spec;
  if (report.spec.kind != PredictorKind::TotalPop) {
    if (report.spec.past_window == 0) {
      report.spec.past_window = config.past_window;
    } else if (report.spec.past_window != config.past_window) {
      throw ParameterError("predictor T_P differs from the evaluation T_P");
    }
  }
  report.spec.validate();
  if (const auto problems = check_eval_config(graph, config); !problems.empty()) {
    throw DataError(problems.front());
  }

  const std::size_t dates = config.test_dates.size();
  report.per_date.resize(dates);
  std::vector<std::exception_ptr> errors(dates);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < dates; ++k) {
    try {
      const Timestamp t = config.test_dates[k];
      const auto ranking = predict(graph, report.spec, t, influence);
      report.per_date[k] = evaluate_date(graph, ranking.top(config.n), t, config);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (std::size_t k = 0; k < dates; ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const std::exception& e) {
      throw DataError("test date " + std::to_string(config.test_dates[k]) + ": " + e.what());
    }
  }

  double p = 0.0, e = 0.0, c = 0.0, q = 0.0;
  std::size_t q_dates = 0;
  for (const auto& m : report.per_date) {
    p += m.precision;
    e += static_cast<double>(m.new_entries);
    c += static_cast<double>(m.correct_new);
    if (m.new_entry_rate) {
      q += *m.new_entry_rate;
      ++q_dates;
    }
  }
  const double nd = static_cast<double>(dates);
  report.mean_precision = p / nd;
  report.mean_new_entries = e / nd;
  report.mean_correct_new = c / nd;
  if (q_dates > 0) report.mean_new_entry_rate = q / static_cast<double>(q_dates);
  return report;
}

void write_report_header(std::ostream& out) {
  out << "kind,lambda,gamma,eta,centrality,T_P,T_F,n,t_star,P_n,E_n,C_n,Q_n\n";
}

namespace {

void write_spec_columns(std::ostream& out, const EvaluationReport& r) {
  const auto& s = r.spec;
  out << to_string(s.kind) << ',';
  out << (s.kind == PredictorKind::Pbp ? csv::number(s.lambda) : "") << ',';
  out << (s.kind == PredictorKind::Wpp ? csv::number(s.gamma) : "") << ',';
  out << (s.kind == PredictorKind::Ibp ? csv::number(s.eta) : "") << ',';
  out << (s.centrality ? std::string(to_string(*s.centrality)) : "") << ',';
  out << r.config.past_window << ',' << r.config.future_window << ',' << r.config.n << ',';
}

}  // namespace

void write_report_rows(std::ostream& out, const EvaluationReport& report, bool per_date,
                       bool summary) {
  if (per_date) {
    for (const auto& m : report.per_date) {
      write_spec_columns(out, report);
      out << m.t_star << ',' << csv::number(m.precision) << ',' << m.new_entries << ','
          << m.correct_new << ',' << (m.new_entry_rate ? csv::number(*m.new_entry_rate) : "")
          << '\n';
    }
  }
  if (summary) {
    write_spec_columns(out, report);
    out << "mean," << csv::number(report.mean_precision) << ','
        << csv::number(report.mean_new_entries) << ',' << csv::number(report.mean_correct_new)
        << ',' << (report.mean_new_entry_rate ? csv::number(*report.mean_new_entry_rate) : "")
        << '\n';
  }
}

}  // namespace trendcast
