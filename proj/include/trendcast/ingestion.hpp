#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "trendcast/event_store.hpp"

namespace trendcast {

// Canonical inputs (comma separated, header line required):
//   ratings: user,item,rating,timestamp   rating in [0.5, 5]
//   votes:   user,item,timestamp
// Raw distributions convert with one line each, e.g. MovieLens 10M
//   sed 's/::/,/g' ratings.dat | sed '1i user,item,rating,timestamp'

enum class DatasetFormat { Ratings, Votes };
DatasetFormat parse_dataset_format(std::string_view text);

/// Whether the "rated at least min_user_degree items" test counts every rating
/// or only ratings that pass the threshold.
enum class Eligibility { AfterThreshold, BeforeThreshold };

struct RatingRecord {
  UserId user = 0;
  ItemId item = 0;
  double rating = 0.0;
  Timestamp timestamp = 0;
};

struct DatasetSpec {
  DatasetFormat format = DatasetFormat::Votes;
  double threshold = 3.0;
  std::optional<std::size_t> subset_users;
  std::size_t min_user_degree = 20;
  std::uint64_t seed = 0;
  Eligibility eligibility = Eligibility::AfterThreshold;

  void validate() const;
};

inline constexpr double kMinRating = 0.5;
inline constexpr double kMaxRating = 5.0;

std::vector<RatingRecord> read_ratings(std::istream& in);
std::vector<Event> read_votes(std::istream& in);

/// Ratings >= threshold become events; `dropped` receives the rest's count.
std::vector<Event> apply_threshold(std::span<const RatingRecord> records, double threshold,
                                   std::size_t* dropped = nullptr);

/// Picks `count` users uniformly among those with at least `min_degree` distinct
/// items and keeps exactly their events, in input order. Deterministic for a
/// seed: eligible ids are sorted and sampled with a partial Fisher-Yates shuffle
/// driven by mt19937_64.
std::vector<Event> subset_users(std::span<const Event> events, std::size_t count,
                                std::size_t min_degree, std::uint64_t seed);

/// The sampled user ids (ascending) for the rule above.
std::vector<UserId> sample_eligible_users(std::span<const Event> events, std::size_t count,
                                          std::size_t min_degree, std::uint64_t seed);

/// Reads ratings, applies threshold and optional user subsetting.
std::vector<Event> load_ratings(const std::filesystem::path& path, const DatasetSpec& spec);
std::vector<Event> load_votes(const std::filesystem::path& path);
std::vector<Event> load_dataset(const std::filesystem::path& path, const DatasetSpec& spec);

void write_votes(std::ostream& out, std::span<const Event> events);

}  // namespace trendcast
