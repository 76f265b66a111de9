#include "trendcast/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "json.hpp"
#include <omp.h>
#include <spdlog/spdlog.h>

#include "trendcast/csv.hpp"

namespace trendcast {

std::vector<ConfigEntry> read_key_values(std::istream& in) {
  std::vector<ConfigEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = csv::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("line " + std::to_string(line_no) + ": expected key = value");
    }
    entries.push_back({std::string(csv::trim(body.substr(0, eq))),
                       std::string(csv::trim(body.substr(eq + 1))), line_no});
  }
  return entries;
}

std::vector<double> parse_real_grid(const std::string& text) {
  const auto parts = [&] {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) out.push_back(part);
    return out;
  }();
  const auto number = [&](const std::string& s) {
    double v = 0.0;
    if (!csv::parse(s, v) || !std::isfinite(v)) throw ParameterError("bad number '" + s + "'");
    return v;
  };
  if (parts.size() == 1) return {number(parts[0])};
  if (parts.size() != 3) throw ParameterError("bad range '" + text + "' (expected from:to:step)");
  const double from = number(parts[0]);
  const double to = number(parts[1]);
  const double step = number(parts[2]);
  if (!(step > 0.0) || to < from) throw ParameterError("bad range '" + text + "'");
  const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double v = from + static_cast<double>(k) * step;
    out.push_back(std::round(v * 1e9) / 1e9);
  }
  return out;
}

namespace {

template <class T>
T parse_integer(const std::string& text) {
  T v{};
  if (!csv::parse(text, v)) throw ParameterError("bad integer '" + text + "'");
  return v;
}

double parse_real(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  if (!csv::parse(text, v)) throw ParameterError("bad number '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ParameterError("bad boolean '" + text + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  const std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

template <class T>
void append(std::vector<T>& into, const std::vector<T>& values) {
  into.insert(into.end(), values.begin(), values.end());
}

bool uses(const ExperimentConfig& c, PredictorKind kind) {
  return std::find(c.kinds.begin(), c.kinds.end(), kind) != c.kinds.end();
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  for (const auto& e : read_key_values(in)) {
    try {
      const auto& k = e.key;
      const auto& v = e.value;
      if (k == "dataset") c.dataset = resolve(base_dir, v);
      else if (k == "format") c.dataset_spec.format = parse_dataset_format(v);
      else if (k == "threshold") c.dataset_spec.threshold = parse_real(v);
      else if (k == "subset_users") c.dataset_spec.subset_users = parse_integer<std::size_t>(v);
      else if (k == "min_user_degree") c.dataset_spec.min_user_degree = parse_integer<std::size_t>(v);
      else if (k == "subset_seed") c.dataset_spec.seed = parse_integer<std::uint64_t>(v);
      else if (k == "eligibility") {
        if (v == "after") c.dataset_spec.eligibility = Eligibility::AfterThreshold;
        else if (v == "before") c.dataset_spec.eligibility = Eligibility::BeforeThreshold;
        else throw ParameterError("eligibility must be 'after' or 'before'");
      }
      else if (k == "social_graph") c.social_graph = resolve(base_dir, v);
      else if (k == "kind") c.kinds.push_back(parse_predictor_kind(v));
      else if (k == "lambda") append(c.lambdas, parse_real_grid(v));
      else if (k == "gamma") append(c.gammas, parse_real_grid(v));
      else if (k == "eta") append(c.etas, parse_real_grid(v));
      else if (k == "centrality") c.centralities.push_back(parse_centrality(v));
      else if (k == "activity") {
        if (v == "total") c.activity = UserActivity::Total;
        else if (v == "recent") c.activity = UserActivity::Recent;
        else throw ParameterError("activity must be 'total' or 'recent'");
      }
      else if (k == "tp") c.past_windows.push_back(parse_duration(v));
      else if (k == "tf") c.future_windows.push_back(parse_duration(v));
      else if (k == "n") c.depths.push_back(parse_integer<std::size_t>(v));
      else if (k == "test_dates") c.test_date_count = parse_integer<std::size_t>(v);
      else if (k == "test_date") c.test_dates.push_back(parse_integer<Timestamp>(v));
      else if (k == "heatmap_tp") c.heatmap_past.push_back(parse_duration(v));
      else if (k == "heatmap_tf") c.heatmap_future.push_back(parse_duration(v));
      else if (k == "scatter") c.scatter = parse_bool(v);
      else if (k == "out") c.output_dir = resolve(base_dir, v);
      else throw ParameterError("unknown key '" + k + "'");
    } catch (const std::exception& ex) {
      c.parse_errors.push_back("line " + std::to_string(e.line) + ": " + ex.what());
    }
  }
  if (c.depths.empty()) c.depths.push_back(100);
  if (uses(c, PredictorKind::Pbp) && c.lambdas.empty()) c.lambdas = parse_real_grid("0:1:0.1");
  if (uses(c, PredictorKind::Wpp) && c.gammas.empty()) c.gammas = parse_real_grid("-1:1:0.1");
  if (uses(c, PredictorKind::Ibp) && c.etas.empty()) c.etas = parse_real_grid("-1:1:0.1");
  if (uses(c, PredictorKind::Ibp) && c.centralities.empty()) {
    c.centralities = {Centrality::InDegree, Centrality::PageRank, Centrality::LeaderRank};
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path.string() + "'");
  return parse_experiment_config(in, path.parent_path().empty() ? "." : path.parent_path());
}

namespace {

std::vector<std::string> validate_static(const ExperimentConfig& c) {
  auto problems = c.parse_errors;
  if (c.dataset.empty()) problems.push_back("no dataset given");
  else if (!std::filesystem::exists(c.dataset)) problems.push_back("dataset not found: " + c.dataset.string());
  if (c.social_graph && !std::filesystem::exists(*c.social_graph)) {
    problems.push_back("social graph not found: " + c.social_graph->string());
  }
  try {
    c.dataset_spec.validate();
  } catch (const std::exception& e) {
    problems.push_back(e.what());
  }
  if (c.kinds.empty()) problems.push_back("empty predictor grid: no 'kind' given");
  if (c.past_windows.empty()) problems.push_back("empty grid: no past window 'tp' given");
  if (c.future_windows.empty()) problems.push_back("empty grid: no future window 'tf' given");
  for (Duration d : c.past_windows) if (d <= 0) problems.push_back("tp must be positive");
  for (Duration d : c.future_windows) if (d <= 0) problems.push_back("tf must be positive");
  for (Duration d : c.heatmap_past) if (d <= 0) problems.push_back("heatmap_tp must be positive");
  for (Duration d : c.heatmap_future) if (d <= 0) problems.push_back("heatmap_tf must be positive");
  for (std::size_t n : c.depths) if (n == 0) problems.push_back("n must be at least 1");
  for (double l : c.lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) problems.push_back("lambda " + csv::number(l) + " outside [0, 1]");
  }
  if (c.test_dates.empty() && c.test_date_count == 0) problems.push_back("test_dates must be at least 1");
  for (std::size_t k = 1; k < c.test_dates.size(); ++k) {
    if (c.test_dates[k] <= c.test_dates[k - 1]) problems.push_back("test_date values must be strictly increasing");
  }
  if (uses(c, PredictorKind::Ibp) && !c.social_graph) {
    problems.push_back("IBP requested without a social_graph");
  }
  return problems;
}

TemporalBipartiteGraph load_graph(const ExperimentConfig& c) {
  return TemporalBipartiteGraph::build(load_dataset(c.dataset, c.dataset_spec));
}

std::vector<Timestamp> dates_for(const ExperimentConfig& c, const TemporalBipartiteGraph& g,
                                 Duration past, Duration future) {
  if (!c.test_dates.empty()) return c.test_dates;
  return regular_test_dates(g, c.test_date_count, past, future);
}

std::vector<std::string> validate_windows(const ExperimentConfig& c, const TemporalBipartiteGraph& g) {
  std::vector<std::string> problems;
  const auto check_pair = [&](Duration past, Duration future) {
    if (!c.test_dates.empty()) {
      for (Timestamp t : c.test_dates) {
        if (t > g.last_timestamp() - future) {
          problems.push_back("test date " + std::to_string(t) + ": T_F=" + std::to_string(future) +
                             " extends past the data end " + std::to_string(g.last_timestamp()));
        }
      }
      return;
    }
    try {
      regular_test_dates(g, c.test_date_count, past, future);
    } catch (const std::exception& e) {
      problems.push_back("T_P=" + std::to_string(past) + ", T_F=" + std::to_string(future) + ": " + e.what());
    }
  };
  for (Duration p : c.past_windows) for (Duration f : c.future_windows) check_pair(p, f);
  for (Duration p : c.heatmap_past) for (Duration f : c.heatmap_future.empty() ? c.future_windows : c.heatmap_future) check_pair(p, f);
  for (Duration f : c.heatmap_future) if (c.heatmap_past.empty()) for (Duration p : c.past_windows) check_pair(p, f);
  std::sort(problems.begin(), problems.end());
  problems.erase(std::unique(problems.begin(), problems.end()), problems.end());
  return problems;
}

}  // namespace

std::vector<std::string> validate(const ExperimentConfig& config) {
  auto problems = validate_static(config);
  if (!problems.empty()) return problems;
  try {
    const auto graph = load_graph(config);
    auto window_problems = validate_windows(config, graph);
    append(problems, window_problems);
    if (config.social_graph) load_social_graph(*config.social_graph);
  } catch (const std::exception& e) {
    problems.push_back(e.what());
  }
  return problems;
}

std::vector<GridPoint> expand_grid(const ExperimentConfig& c, const TemporalBipartiteGraph& graph) {
  std::vector<GridPoint> grid;
  for (Duration past : c.past_windows) {
    for (Duration future : c.future_windows) {
      const auto dates = dates_for(c, graph, past, future);
      for (std::size_t n : c.depths) {
        const EvalConfig eval{n, past, future, dates};
        for (PredictorKind kind : c.kinds) {
          switch (kind) {
            case PredictorKind::TotalPop: grid.push_back({PredictorSpec::total_pop(), eval}); break;
            case PredictorKind::RecentPop: grid.push_back({PredictorSpec::recent_pop(past), eval}); break;
            case PredictorKind::Pbp:
              for (double l : c.lambdas) grid.push_back({PredictorSpec::pbp(past, l), eval});
              break;
            case PredictorKind::Wpp:
              for (double g : c.gammas) grid.push_back({PredictorSpec::wpp(past, g, c.activity), eval});
              break;
            case PredictorKind::Ibp:
              for (Centrality m : c.centralities) {
                for (double e : c.etas) grid.push_back({PredictorSpec::ibp(past, e, m), eval});
              }
              break;
          }
        }
      }
    }
  }
  return grid;
}

namespace {

// Runs `job(k)` for k in [0, count) on the worker pool, rethrowing the first
// failure in index order.
template <class Job>
void parallel_jobs(std::size_t count, Job&& job) {
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < count; ++k) {
    try {
      job(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

nlohmann::json summary_json(const EvaluationReport& r) {
  nlohmann::json j;
  j["kind"] = to_string(r.spec.kind);
  if (r.spec.kind == PredictorKind::Pbp) j["lambda"] = r.spec.lambda;
  if (r.spec.kind == PredictorKind::Wpp) j["gamma"] = r.spec.gamma;
  if (r.spec.kind == PredictorKind::Ibp) {
    j["eta"] = r.spec.eta;
    j["centrality"] = to_string(*r.spec.centrality);
  }
  j["T_P"] = r.config.past_window;
  j["T_F"] = r.config.future_window;
  j["n"] = r.config.n;
  j["dates"] = r.per_date.size();
  j["P_n"] = r.mean_precision;
  j["E_n"] = r.mean_new_entries;
  j["C_n"] = r.mean_correct_new;
  j["Q_n"] = r.mean_new_entry_rate ? nlohmann::json(*r.mean_new_entry_rate) : nlohmann::json();
  return j;
}

std::ofstream create(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

struct ScatterBlock {
  std::string text;
};

ScatterBlock scatter_rows(const TemporalBipartiteGraph& graph, const GridPoint& point,
                          const UserInfluence* influence) {
  const auto& eval = point.eval;
  const Timestamp t = eval.test_dates[eval.test_dates.size() / 2];
  const auto& spec = point.spec;
  const auto ranking = predict(graph, spec, t, influence);
  auto predicted = ranking.top(eval.n);
  std::sort(predicted.begin(), predicted.end());
  const auto past = graph.item_degree_increases(t, eval.past_window);
  const auto future = graph.item_degree_increases(t + eval.future_window, eval.future_window);

  std::ostringstream out;
  for (std::size_t v = 0; v < graph.num_items(); ++v) {
    if (past[v] == 0 && future[v] == 0) continue;
    const ItemId id = graph.item_id(v);
    const bool top = std::binary_search(predicted.begin(), predicted.end(), id);
    out << to_string(spec.kind) << ','
        << (spec.kind == PredictorKind::Pbp ? csv::number(spec.lambda) : "") << ','
        << (spec.kind == PredictorKind::Wpp ? csv::number(spec.gamma) : "") << ','
        << (spec.kind == PredictorKind::Ibp ? csv::number(spec.eta) : "") << ','
        << (spec.centrality ? std::string(to_string(*spec.centrality)) : "") << ','
        << eval.past_window << ',' << eval.future_window << ',' << eval.n << ',' << t << ','
        << id << ',' << past[v] << ',' << future[v] << ',' << (top ? 1 : 0) << '\n';
  }
  return {out.str()};
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config, const SweepOptions& options) {
  if (const auto problems = validate_static(config); !problems.empty()) {
    throw ParameterError("invalid config: " + problems.front());
  }
  const auto graph = load_graph(config);
  spdlog::info("dataset: {} users, {} items, {} links", graph.num_users(), graph.num_items(),
               graph.num_links());
  if (const auto problems = validate_windows(config, graph); !problems.empty()) {
    throw ParameterError("invalid config: " + problems.front());
  }

  const int workers = options.workers > 0 ? static_cast<int>(options.workers) : omp_get_num_procs();
  omp_set_num_threads(workers);
  omp_set_max_active_levels(1);

  std::map<Centrality, UserInfluence> influences;
  if (config.social_graph && uses(config, PredictorKind::Ibp)) {
    const auto social = load_social_graph(*config.social_graph);
    spdlog::info("social graph: {} users, {} edges", social.num_users(), social.num_edges());
    for (Centrality m : config.centralities) {
      auto aligned = UserInfluence::align(graph, social, compute_influence(social, m));
      spdlog::info("{}: {} active users missing from the social graph", to_string(m),
                   aligned.missing_users);
      influences.emplace(m, std::move(aligned));
    }
  }
  const auto influence_for = [&](const PredictorSpec& s) -> const UserInfluence* {
    return s.centrality ? &influences.at(*s.centrality) : nullptr;
  };

  const auto grid = expand_grid(config, graph);
  spdlog::info("evaluating {} grid points on {} workers", grid.size(), workers);
  SweepResult result;
  result.reports.resize(grid.size());
  parallel_jobs(grid.size(), [&](std::size_t k) {
    result.reports[k] = evaluate(graph, grid[k].spec, grid[k].eval, influence_for(grid[k].spec));
    spdlog::debug("{} T_P={} T_F={} n={}: P_n={:.4f}", result.reports[k].spec.label(),
                  grid[k].eval.past_window, grid[k].eval.future_window, grid[k].eval.n,
                  result.reports[k].mean_precision);
  });

  std::filesystem::create_directories(config.output_dir);
  {
    const auto path = config.output_dir / "sweep.csv";
    auto out = create(path);
    write_report_header(out);
    for (const auto& r : result.reports) write_report_rows(out, r, false, true);
    result.files.push_back(path);
  }
  {
    const auto path = config.output_dir / "dates.csv";
    auto out = create(path);
    write_report_header(out);
    for (const auto& r : result.reports) write_report_rows(out, r, true, false);
    result.files.push_back(path);
  }
  {
    const auto& hp = config.heatmap_past.empty() ? config.past_windows : config.heatmap_past;
    const auto& hf = config.heatmap_future.empty() ? config.future_windows : config.heatmap_future;
    std::vector<GridPoint> cells;
    for (Duration p : hp) {
      for (Duration f : hf) {
        cells.push_back({PredictorSpec::recent_pop(p),
                         EvalConfig{config.depths.front(), p, f, dates_for(config, graph, p, f)}});
      }
    }
    std::vector<double> precision_at(cells.size());
    parallel_jobs(cells.size(), [&](std::size_t k) {
      precision_at[k] = evaluate(graph, cells[k].spec, cells[k].eval).mean_precision;
    });
    const auto path = config.output_dir / "heatmap.csv";
    auto out = create(path);
    out << "T_P,T_F,n,P_n\n";
    for (std::size_t k = 0; k < cells.size(); ++k) {
      out << cells[k].eval.past_window << ',' << cells[k].eval.future_window << ','
          << cells[k].eval.n << ',' << csv::number(precision_at[k]) << '\n';
    }
    result.files.push_back(path);
  }
  if (config.scatter) {
    std::vector<const GridPoint*> first_window;
    for (const auto& g : grid) {
      if (g.eval.past_window == grid.front().eval.past_window &&
          g.eval.future_window == grid.front().eval.future_window &&
          g.eval.n == grid.front().eval.n) {
        first_window.push_back(&g);
      }
    }
    std::vector<ScatterBlock> blocks(first_window.size());
    parallel_jobs(first_window.size(), [&](std::size_t k) {
      blocks[k] = scatter_rows(graph, *first_window[k], influence_for(first_window[k]->spec));
    });
    const auto path = config.output_dir / "scatter.csv";
    auto out = create(path);
    out << "kind,lambda,gamma,eta,centrality,T_P,T_F,n,t_star,item,past_increase,future_increase,"
           "predicted_top_n\n";
    for (const auto& b : blocks) out << b.text;
    result.files.push_back(path);
  }

  if (options.json_summary) {
    for (const auto& r : result.reports) *options.json_summary << summary_json(r).dump() << '\n';
  }
  return result;
}

GenRequest parse_gen_config(std::istream& in) {
  GenRequest req;
  auto& c = req.config;
  for (const auto& e : read_key_values(in)) {
    try {
      const auto& k = e.key;
      const auto& v = e.value;
      if (k == "num_users") c.num_users = parse_integer<std::size_t>(v);
      else if (k == "num_items") c.num_items = parse_integer<std::size_t>(v);
      else if (k == "num_events") c.num_events = parse_integer<std::size_t>(v);
      else if (k == "initial_items") c.initial_items = parse_integer<std::size_t>(v);
      else if (k == "item_arrival_rate") c.item_arrival_rate = parse_real(v);
      else if (k == "decay_timescale") c.decay_timescale = parse_real(v);
      else if (k == "pa_offset") c.pa_offset = parse_real(v);
      else if (k == "activity_exponent") c.activity_exponent = parse_real(v);
      else if (k == "tick") c.tick = parse_duration(v);
      else if (k == "seed") c.seed = parse_integer<std::uint64_t>(v);
      else if (k == "social_edges") req.social_edges = parse_integer<std::size_t>(v);
      else if (k == "social_exponent") req.social_exponent = parse_real(v);
      else throw ParameterError("unknown key '" + k + "'");
    } catch (const std::exception& ex) {
      req.errors.push_back("line " + std::to_string(e.line) + ": " + ex.what());
    }
  }
  return req;
}

}  // namespace trendcast
