#include "trendcast/ingestion.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <spdlog/spdlog.h>

#include "trendcast/csv.hpp"
#include "trendcast/rng.hpp"

namespace trendcast {

namespace {

std::string where(std::size_t line_no, const std::string& line) {
  return "line " + std::to_string(line_no) + ": '" + line + "'";
}

bool blank(const std::string& line) { return csv::trim(line).empty(); }

// Reads the header, then hands each data row (split) to `row`.
template <class Row>
void read_rows(std::istream& in, std::string_view expected_header, std::size_t columns, Row&& row) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (!header) {
      if (csv::trim(line) != expected_header) {
        throw DataError("expected header '" + std::string(expected_header) + "' on " +
                        where(line_no, line));
      }
      header = true;
      continue;
    }
    const auto fields = csv::split(line);
    if (fields.size() != columns) {
      throw DataError("expected " + std::to_string(columns) + " fields on " + where(line_no, line));
    }
    row(fields, line_no, line);
  }
  if (!header) throw DataError("missing header '" + std::string(expected_header) + "'");
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::vector<UserId> eligible_users(std::span<const Event> events, std::size_t min_degree) {
  std::vector<std::pair<UserId, ItemId>> pairs;
  pairs.reserve(events.size());
  for (const auto& e : events) pairs.emplace_back(e.user, e.item);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<UserId> out;
  for (std::size_t k = 0; k < pairs.size();) {
    std::size_t j = k;
    while (j < pairs.size() && pairs[j].first == pairs[k].first) ++j;
    if (j - k >= min_degree) out.push_back(pairs[k].first);
    k = j;
  }
  return out;
}

std::vector<Event> keep_users(std::span<const Event> events, const std::vector<UserId>& users) {
  std::vector<Event> out;
  for (const auto& e : events) {
    if (std::binary_search(users.begin(), users.end(), e.user)) out.push_back(e);
  }
  return out;
}

}  // namespace

DatasetFormat parse_dataset_format(std::string_view text) {
  if (text == "ratings") return DatasetFormat::Ratings;
  if (text == "votes") return DatasetFormat::Votes;
  throw ParameterError("unknown dataset format '" + std::string(text) + "' (ratings|votes)");
}

void DatasetSpec::validate() const {
  if (!(threshold >= kMinRating && threshold <= kMaxRating)) {
    throw ParameterError("rating threshold must lie in [0.5, 5]");
  }
  if (subset_users && format != DatasetFormat::Ratings) {
    throw ParameterError("user subsetting applies to ratings datasets only");
  }
  if (subset_users && *subset_users == 0) throw ParameterError("subset size must be positive");
}

std::vector<RatingRecord> read_ratings(std::istream& in) {
  std::vector<RatingRecord> out;
  read_rows(in, "user,item,rating,timestamp", 4, [&](const auto& f, std::size_t no, const std::string& line) {
    RatingRecord r;
    if (!csv::parse(f[0], r.user) || !csv::parse(f[1], r.item) || !csv::parse(f[2], r.rating) ||
        !csv::parse(f[3], r.timestamp)) {
      throw DataError("malformed row on " + where(no, line));
    }
    if (!(r.rating >= kMinRating && r.rating <= kMaxRating)) {
      throw DataError("rating off the 0.5-5 scale on " + where(no, line));
    }
    out.push_back(r);
  });
  return out;
}

std::vector<Event> read_votes(std::istream& in) {
  std::vector<Event> out;
  read_rows(in, "user,item,timestamp", 3, [&](const auto& f, std::size_t no, const std::string& line) {
    Event e;
    if (!csv::parse(f[0], e.user) || !csv::parse(f[1], e.item) || !csv::parse(f[2], e.timestamp)) {
      throw DataError("malformed row on " + where(no, line));
    }
    out.push_back(e);
  });
  return out;
}

std::vector<Event> apply_threshold(std::span<const RatingRecord> records, double threshold,
                                   std::size_t* dropped) {
  std::vector<Event> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.rating >= threshold) out.push_back({r.user, r.item, r.timestamp});
  }
  if (dropped) *dropped = records.size() - out.size();
  return out;
}

std::vector<UserId> sample_eligible_users(std::span<const Event> events, std::size_t count,
                                          std::size_t min_degree, std::uint64_t seed) {
  if (count == 0) throw ParameterError("subset size must be positive");
  auto pool = eligible_users(events, min_degree);
  if (pool.size() < count) {
    throw DataError("only " + std::to_string(pool.size()) + " users have at least " +
                    std::to_string(min_degree) + " items; " + std::to_string(count) +
                    " requested");
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    const auto pick = k + static_cast<std::size_t>(rng.below(pool.size() - k));
    std::swap(pool[k], pool[pick]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<Event> subset_users(std::span<const Event> events, std::size_t count,
                                std::size_t min_degree, std::uint64_t seed) {
  return keep_users(events, sample_eligible_users(events, count, min_degree, seed));
}

std::vector<Event> load_ratings(const std::filesystem::path& path, const DatasetSpec& spec) {
  spec.validate();
  auto in = open(path);
  const auto records = read_ratings(in);
  std::size_t dropped = 0;
  auto events = apply_threshold(records, spec.threshold, &dropped);
  spdlog::info("{}: {} ratings, {} below threshold {}", path.string(), records.size(), dropped,
               spec.threshold);
  if (!spec.subset_users) return events;

  std::vector<UserId> users;
  if (spec.eligibility == Eligibility::AfterThreshold) {
    users = sample_eligible_users(events, *spec.subset_users, spec.min_user_degree, spec.seed);
  } else {
    const auto all = apply_threshold(records, kMinRating);
    users = sample_eligible_users(all, *spec.subset_users, spec.min_user_degree, spec.seed);
  }
  return keep_users(events, users);
}

std::vector<Event> load_votes(const std::filesystem::path& path) {
  auto in = open(path);
  return read_votes(in);
}

std::vector<Event> load_dataset(const std::filesystem::path& path, const DatasetSpec& spec) {
  spec.validate();
  return spec.format == DatasetFormat::Ratings ? load_ratings(path, spec) : load_votes(path);
}

void write_votes(std::ostream& out, std::span<const Event> events) {
  out << "user,item,timestamp\n";
  for (const auto& e : events) out << e.user << ',' << e.item << ',' << e.timestamp << '\n';
}

}  // namespace trendcast
