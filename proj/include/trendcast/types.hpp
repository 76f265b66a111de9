#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace trendcast {

using UserId = std::int64_t;
using ItemId = std::int64_t;

/// Integer seconds since epoch. Datasets with coarser resolution are scaled on load.
using Timestamp = std::int64_t;
using Duration = std::int64_t;

/// Query sentinel meaning "after every event".
inline constexpr Timestamp kForever = std::numeric_limits<Timestamp>::max();

/// Bad input data: malformed files, unknown ids, empty streams.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter outside its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "60d", "10h", "15m", "30s", "3w" or a bare integer (seconds).
Duration parse_duration(const std::string& text);

}  // namespace trendcast
