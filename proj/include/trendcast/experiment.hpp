#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trendcast/evaluation.hpp"
#include "trendcast/ingestion.hpp"
#include "trendcast/predictors.hpp"
#include "trendcast/synthgen.hpp"

namespace trendcast {

/// One "key = value" line; '#' starts a comment, keys may repeat.
struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Throws DataError on a line without '='.
std::vector<ConfigEntry> read_key_values(std::istream& in);

/// "a:b:step" expands to a, a+step, ..., b (rounded to 1e-9); anything else is
/// a single number.
std::vector<double> parse_real_grid(const std::string& text);

struct ExperimentConfig {
  std::filesystem::path dataset;
  DatasetSpec dataset_spec;
  std::optional<std::filesystem::path> social_graph;

  std::vector<PredictorKind> kinds;
  std::vector<double> lambdas;
  std::vector<double> gammas;
  std::vector<double> etas;
  std::vector<Centrality> centralities;
  UserActivity activity = UserActivity::Total;

  std::vector<Duration> past_windows;
  std::vector<Duration> future_windows;
  std::vector<std::size_t> depths;

  std::size_t test_date_count = 7;
  std::vector<Timestamp> test_dates;  // explicit dates override the count

  std::vector<Duration> heatmap_past;    // defaults to past_windows
  std::vector<Duration> heatmap_future;  // defaults to future_windows
  bool scatter = true;

  std::filesystem::path output_dir = ".";

  /// Problems found while parsing; reported by validate().
  std::vector<std::string> parse_errors;
};

/// Relative paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(std::istream& in,
                                         const std::filesystem::path& base_dir = ".");
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Every problem with the config, without running anything. Loads the dataset to
/// check window placement.
std::vector<std::string> validate(const ExperimentConfig& config);

struct GridPoint {
  PredictorSpec spec;
  EvalConfig eval;
};

/// Predictor grid in output order: (T_P, T_F, n) outer, then kinds in config
/// order, then each kind's parameter list.
std::vector<GridPoint> expand_grid(const ExperimentConfig& config,
                                   const TemporalBipartiteGraph& graph);

struct SweepOptions {
  std::size_t workers = 0;  // 0: all available cores
  std::ostream* json_summary = nullptr;
};

struct SweepResult {
  std::vector<EvaluationReport> reports;  // grid order
  std::vector<std::filesystem::path> files;
};

/// Evaluates the grid and writes sweep.csv, dates.csv, heatmap.csv and (unless
/// disabled) scatter.csv into config.output_dir.
SweepResult run_sweep(const ExperimentConfig& config, const SweepOptions& options = {});

/// Synthetic data job read from a key=value file; social_edges > 0 also emits
/// a follow graph over the same users.
struct GenRequest {
  GenConfig config;
  std::size_t social_edges = 0;
  double social_exponent = 1.0;
  std::vector<std::string> errors;
};

GenRequest parse_gen_config(std::istream& in);

}  // namespace trendcast
