#pragma once

/**
 * @file config.hpp
 * @brief Key-value experiment configuration with a per-kind schema.
 *
 * A config file holds one `key = value` pair per line; `#` starts a comment.
 * Physical quantities carry a unit after the number:
 *
 *   rate  1/s, s^-1, rad/s (angular frequency), Hz, kHz (multiplied by 2 pi)
 *   time  s, ms, us
 *
 * Lists are comma separated with an optional trailing unit shared by all
 * entries, for example `deltas = -0.2, 0, 0.2 1/s`. Numbers accept `pi`,
 * `2pi` and `pi/2` style constants.
 */

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fpreg::cli {

enum class FieldType { kNumber, kInteger, kBool, kString, kRate, kTime, kNumberList, kRateList };

std::string_view to_string(FieldType type);

struct Field {
  std::string name;
  FieldType type = FieldType::kNumber;
  std::string default_value;  ///< empty means required
  std::string doc;
  std::vector<std::string> choices;  ///< allowed values for kString
};

/// Keys every kind accepts.
const std::vector<Field>& common_fields();

/// Raw file contents: key -> (value text, line number).
struct RawConfig {
  std::map<std::string, std::pair<std::string, int>> entries;
};

RawConfig parse_config_text(std::string_view text);
RawConfig read_config_file(const std::string& path);

using Value = std::variant<double, std::int64_t, bool, std::string, std::vector<double>>;

/// Validated config. Quantities are stored in 1/s and s.
class Config {
 public:
  Config() = default;
  Config(std::string kind, std::map<std::string, Value> values);

  const std::string& kind() const noexcept { return kind_; }
  const std::map<std::string, Value>& values() const noexcept { return values_; }

  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  const std::vector<double>& list(const std::string& key) const;
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  /// Sorted `key=value` lines with SI numbers, excluding the output path.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;

 private:
  std::string kind_;
  std::map<std::string, Value> values_;
};

/// Checks keys, types and units against the schema of `fields` plus common_fields().
/// Throws fpreg::Error(kConfig) naming the offending key and line.
Config validate(const RawConfig& raw, const std::string& kind, const std::vector<Field>& fields,
                bool stochastic);

/// Parses a number with optional pi constant: 1.5, pi, 2pi, pi/2, -0.5pi.
double parse_number(std::string_view token);

/// Levenshtein distance.
std::size_t edit_distance(std::string_view a, std::string_view b);
/// Closest candidate, or empty when nothing is within half the length of `word`.
std::string nearest(std::string_view word, const std::vector<std::string>& candidates);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace fpreg::cli
