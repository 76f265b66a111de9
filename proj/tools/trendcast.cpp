// trendcast: popularity-trend prediction experiments on temporal user-item data.
//
//   trendcast run <config> [--workers N] [--out DIR] [--json-summary]
//   trendcast validate <config>
//   trendcast gen <gen-config> [--seed S] [--out DIR]
//   trendcast rank <dataset> --kind pbp --lambda 0.9 --tp 60d [--at T] [--n 100] ...
//
// TRENDCAST_LOG=trace|debug|info|warn|error|off sets stderr verbosity (default info).

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "trendcast/csv.hpp"
#include "trendcast/experiment.hpp"

namespace {

using namespace trendcast;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("trendcast");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("TRENDCAST_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

int report_problems(const std::vector<std::string>& problems) {
  for (const auto& p : problems) std::cerr << "error: " << p << '\n';
  return problems.empty() ? 0 : 1;
}

int cmd_validate(const std::string& path) {
  const auto config = load_experiment_config(path);
  const auto problems = validate(config);
  if (problems.empty()) std::cerr << "config ok\n";
  return report_problems(problems);
}

int cmd_run(const std::string& path, std::size_t workers, const std::string& out_dir,
            bool json_summary) {
  auto config = load_experiment_config(path);
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (const auto problems = validate(config); !problems.empty()) return report_problems(problems);
  SweepOptions options;
  options.workers = workers;
  options.json_summary = json_summary ? &std::cout : nullptr;
  const auto result = run_sweep(config, options);
  for (const auto& f : result.files) spdlog::info("wrote {}", f.string());
  return 0;
}

int cmd_gen(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out_dir) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  auto request = parse_gen_config(in);
  if (!request.errors.empty()) return report_problems(request.errors);
  if (seed) request.config.seed = *seed;

  const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
  std::filesystem::create_directories(dir);
  const auto events = generate(request.config);
  {
    std::ofstream out(dir / "events.csv", std::ios::binary);
    write_votes(out, events);
  }
  spdlog::info("wrote {} events to {}", events.size(), (dir / "events.csv").string());
  if (request.social_edges > 0) {
    const auto edges = generate_social(request.config.num_users, request.social_edges,
                                       request.social_exponent, request.config.seed + 1);
    std::ofstream out(dir / "social.txt", std::ios::binary);
    write_social_graph(out, edges);
    spdlog::info("wrote {} follow edges to {}", edges.size(), (dir / "social.txt").string());
  }
  return 0;
}

struct RankArgs {
  std::string dataset;
  std::string format = "votes";
  double threshold = 3.0;
  std::string kind = "recent";
  double lambda = 1.0;
  double gamma = 0.0;
  double eta = 0.0;
  std::string centrality;
  std::string activity = "total";
  std::string past_window = "1d";
  std::optional<Timestamp> at;
  std::size_t n = 100;
  std::string social;
};

int cmd_rank(const RankArgs& a) {
  DatasetSpec ds;
  ds.format = parse_dataset_format(a.format);
  ds.threshold = a.threshold;
  const auto graph = TemporalBipartiteGraph::build(load_dataset(a.dataset, ds));
  const Timestamp t = a.at.value_or(graph.last_timestamp());
  const Duration tp = parse_duration(a.past_window);

  PredictorSpec spec;
  switch (parse_predictor_kind(a.kind)) {
    case PredictorKind::TotalPop: spec = PredictorSpec::total_pop(); break;
    case PredictorKind::RecentPop: spec = PredictorSpec::recent_pop(tp); break;
    case PredictorKind::Pbp: spec = PredictorSpec::pbp(tp, a.lambda); break;
    case PredictorKind::Wpp:
      spec = PredictorSpec::wpp(tp, a.gamma,
                                a.activity == "recent" ? UserActivity::Recent : UserActivity::Total);
      break;
    case PredictorKind::Ibp:
      spec = PredictorSpec::ibp(tp, a.eta, parse_centrality(a.centrality.empty() ? "in_degree" : a.centrality));
      break;
  }
  std::optional<UserInfluence> influence;
  if (spec.kind == PredictorKind::Ibp) {
    if (a.social.empty()) throw ParameterError("ibp needs --social");
    const auto social = load_social_graph(a.social);
    influence = UserInfluence::align(graph, social, compute_influence(social, *spec.centrality));
  }
  const auto ranking = predict(graph, spec, t, influence ? &*influence : nullptr);
  std::cout << "rank,item,score\n";
  const std::size_t keep = std::min(a.n, ranking.entries.size());
  for (std::size_t k = 0; k < keep; ++k) {
    std::cout << k + 1 << ',' << ranking.entries[k].item << ','
              << csv::number(ranking.entries[k].score) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Popularity-trend prediction on temporal user-item networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::size_t workers = 0;
  std::string out_dir;
  bool json_summary = false;
  auto* run = app.add_subcommand("run", "Run a parameter sweep and write CSV reports");
  run->add_option("config", config_path, "Experiment config file")->required();
  run->add_option("--workers", workers, "Worker threads (default: all cores)");
  run->add_option("--out", out_dir, "Output directory (overrides config 'out')");
  run->add_flag("--json-summary", json_summary, "Print one JSON object per grid point to stdout");

  auto* val = app.add_subcommand("validate", "Check a config without running it");
  val->add_option("config", config_path, "Experiment config file")->required();

  std::string gen_path;
  std::optional<std::uint64_t> seed;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic event stream (and social graph)");
  gen->add_option("config", gen_path, "Generator config file")->required();
  gen->add_option("--seed", seed, "Override the generator seed");
  gen->add_option("--out", out_dir, "Output directory");

  RankArgs rank_args;
  auto* rank = app.add_subcommand("rank", "Print the top-n predicted items at one date");
  rank->add_option("dataset", rank_args.dataset, "Canonical ratings or votes CSV")->required();
  rank->add_option("--format", rank_args.format, "ratings|votes");
  rank->add_option("--threshold", rank_args.threshold, "Rating threshold for ratings data");
  rank->add_option("--kind", rank_args.kind, "total|recent|pbp|wpp|ibp");
  rank->add_option("--lambda", rank_args.lambda, "PBP lambda");
  rank->add_option("--gamma", rank_args.gamma, "WPP gamma");
  rank->add_option("--eta", rank_args.eta, "IBP eta");
  rank->add_option("--centrality", rank_args.centrality, "in_degree|pagerank|leaderrank");
  rank->add_option("--activity", rank_args.activity, "WPP activity: total|recent");
  rank->add_option("--tp", rank_args.past_window, "Past window, e.g. 60d or 10h");
  rank->add_option("--at", rank_args.at, "Test date (default: last event)");
  rank->add_option("--n", rank_args.n, "How many items to print");
  rank->add_option("--social", rank_args.social, "Social edge list for ibp");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, workers, out_dir, json_summary);
    if (*val) return cmd_validate(config_path);
    if (*gen) return cmd_gen(gen_path, seed, out_dir);
    if (*rank) return cmd_rank(rank_args);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 1;
}
