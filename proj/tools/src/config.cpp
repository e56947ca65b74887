#include "fpreg/cli/config.hpp"

#include "fpreg/error.hpp"
#include "fpreg/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fpreg::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::kConfig, msg); }

std::string where(const std::string& key, int line) {
  return line > 0 ? "'" + key + "' (line " + std::to_string(line) + ")" : "'" + key + "'";
}

double rate_unit(std::string_view unit) {
  if (unit == "1/s" || unit == "s^-1" || unit == "rad/s") return 1.0;
  if (unit == "Hz") return 2.0 * kPi;
  if (unit == "kHz") return 2.0 * kPi * 1e3;
  return 0.0;
}

double time_unit(std::string_view unit) {
  if (unit == "s") return 1.0;
  if (unit == "ms") return 1e-3;
  if (unit == "us") return 1e-6;
  return 0.0;
}

/// Splits "<numbers> <unit>" at the last whitespace when the tail is not numeric.
std::pair<std::string, std::string> split_unit(const std::string& text) {
  const auto pos = text.find_last_of(" \t");
  if (pos == std::string::npos) return {text, {}};
  const std::string tail = trim(text.substr(pos + 1));
  try {
    parse_number(tail);
    return {text, {}};
  } catch (const Error&) {
    return {trim(text.substr(0, pos)), tail};
  }
}

std::vector<double> parse_list(const std::string& body) {
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(trim(item)));
  return out;
}

Value convert(const Field& f, const std::string& text, int line) {
  const std::string id = where(f.name, line);
  try {
    switch (f.type) {
      case FieldType::kNumber: {
        const auto [num, unit] = split_unit(text);
        if (!unit.empty()) config_error(id + " is dimensionless; unexpected unit '" + unit + "'");
        return parse_number(num);
      }
      case FieldType::kInteger: {
        std::int64_t v = 0;
        const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || p != text.data() + text.size()) config_error(id + " must be an integer");
        return v;
      }
      case FieldType::kBool:
        if (text == "true" || text == "1" || text == "yes") return true;
        if (text == "false" || text == "0" || text == "no") return false;
        config_error(id + " must be true or false");
      case FieldType::kString:
        if (!f.choices.empty() && std::find(f.choices.begin(), f.choices.end(), text) == f.choices.end()) {
          std::string msg = id + " must be one of";
          for (const auto& c : f.choices) msg += " " + c;
          config_error(msg);
        }
        return text;
      case FieldType::kRate:
      case FieldType::kTime: {
        const auto [num, unit] = split_unit(text);
        const bool rate = f.type == FieldType::kRate;
        if (unit.empty()) config_error(id + " needs a unit (" + (rate ? "1/s, rad/s, Hz" : "s, ms") + ")");
        const double scale = rate ? rate_unit(unit) : time_unit(unit);
        if (scale == 0.0) config_error(id + ": unknown unit '" + unit + "'");
        return parse_number(num) * scale;
      }
      case FieldType::kNumberList: {
        const auto [body, unit] = split_unit(text);
        if (!unit.empty()) config_error(id + " is dimensionless; unexpected unit '" + unit + "'");
        return parse_list(body);
      }
      case FieldType::kRateList: {
        const auto [body, unit] = split_unit(text);
        if (unit.empty()) config_error(id + " needs a unit (1/s, rad/s, Hz)");
        const double scale = rate_unit(unit);
        if (scale == 0.0) config_error(id + ": unknown unit '" + unit + "'");
        auto v = parse_list(body);
        for (double& x : v) x *= scale;
        return v;
      }
    }
  } catch (const Error& e) {
    if (std::string_view(e.what()).starts_with(id)) throw;
    config_error(id + ": " + e.what());
  }
  config_error(id + ": unsupported field type");
}

std::string format_double(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

std::string_view to_string(FieldType type) {
  switch (type) {
    case FieldType::kNumber: return "number";
    case FieldType::kInteger: return "integer";
    case FieldType::kBool: return "bool";
    case FieldType::kString: return "string";
    case FieldType::kRate: return "rate";
    case FieldType::kTime: return "time";
    case FieldType::kNumberList: return "number list";
    case FieldType::kRateList: return "rate list";
  }
  return "?";
}

const std::vector<Field>& common_fields() {
  static const std::vector<Field> fields{
      {"kind", FieldType::kString, "", "experiment kind", {}},
      {"format", FieldType::kString, "csv", "output format", {"csv", "json"}},
      {"output", FieldType::kString, "-", "output file; '-' derives <kind>-<hash>.<format>", {}},
  };
  return fields;
}

double parse_number(std::string_view token) {
  std::string t = trim(token);
  if (t.empty()) throw Error(ErrorKind::kConfig, "empty number");
  if (const auto pos = t.find("pi"); pos != std::string::npos) {
    std::string head = t.substr(0, pos);
    std::string tail = t.substr(pos + 2);
    if (!head.empty() && head.back() == '*') head.pop_back();
    double divisor = 1.0;
    if (!tail.empty()) {
      if (tail.front() != '/') throw Error(ErrorKind::kConfig, "bad number '" + t + "'");
      divisor = parse_number(tail.substr(1));
    }
    if (head.empty() || head == "+") return kPi / divisor;
    if (head == "-") return -kPi / divisor;
    return parse_number(head) * kPi / divisor;
  }
  double v = 0.0;
  const char* first = t.data() + (t.front() == '+' ? 1 : 0);
  const auto [p, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::kConfig, "bad number '" + t + "'");
  }
  return v;
}

RawConfig parse_config_text(std::string_view text) {
  RawConfig raw;
  std::stringstream ss{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(ss, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error("line " + std::to_string(n) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) config_error("line " + std::to_string(n) + ": empty key");
    if (raw.entries.count(key)) config_error(where(key, n) + " given twice");
    raw.entries[key] = {value, n};
  }
  return raw;
}

RawConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

Config::Config(std::string kind, std::map<std::string, Value> values)
    : kind_(std::move(kind)), values_(std::move(values)) {}

namespace {

template <class T>
const T& get(const std::map<std::string, Value>& values, const std::string& key) {
  const auto it = values.find(key);
  if (it == values.end()) throw Error(ErrorKind::kConfig, "missing key '" + key + "'");
  const T* v = std::get_if<T>(&it->second);
  if (!v) throw Error(ErrorKind::kConfig, "key '" + key + "' has the wrong type");
  return *v;
}

}  // namespace

double Config::number(const std::string& key) const { return get<double>(values_, key); }
std::int64_t Config::integer(const std::string& key) const { return get<std::int64_t>(values_, key); }
bool Config::flag(const std::string& key) const { return get<bool>(values_, key); }
const std::string& Config::text(const std::string& key) const { return get<std::string>(values_, key); }
const std::vector<double>& Config::list(const std::string& key) const {
  return get<std::vector<double>>(values_, key);
}

std::string Config::canonical() const {
  std::string out = "kind=" + kind_ + "\n";
  for (const auto& [key, value] : values_) {
    if (key == "output") continue;
    out += key + "=";
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out += format_double(v);
          } else if constexpr (std::is_same_v<T, std::int64_t>) {
            out += std::to_string(v);
          } else if constexpr (std::is_same_v<T, bool>) {
            out += v ? "true" : "false";
          } else if constexpr (std::is_same_v<T, std::string>) {
            out += v;
          } else {
            for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
          }
        },
        value);
    out += "\n";
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Config::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

Config validate(const RawConfig& raw, const std::string& kind, const std::vector<Field>& fields,
                bool stochastic) {
  std::vector<const Field*> schema;
  for (const auto& f : common_fields()) schema.push_back(&f);
  for (const auto& f : fields) schema.push_back(&f);

  std::vector<std::string> names;
  for (const auto* f : schema) names.push_back(f->name);
  for (const auto& [key, entry] : raw.entries) {
    if (std::find(names.begin(), names.end(), key) != names.end()) continue;
    std::string msg = "unknown key " + where(key, entry.second) + " for kind " + kind;
    if (const auto s = nearest(key, names); !s.empty()) msg += "; did you mean '" + s + "'?";
    config_error(msg);
  }
  if (stochastic && !raw.entries.count("seed")) config_error("kind " + kind + " is stochastic; 'seed' is required");

  std::map<std::string, Value> values;
  for (const auto* f : schema) {
    if (f->name == "kind") continue;
    const auto it = raw.entries.find(f->name);
    if (it == raw.entries.end() && f->default_value.empty()) config_error("missing required key '" + f->name + "'");
    const std::string text = it == raw.entries.end() ? f->default_value : it->second.first;
    const int line = it == raw.entries.end() ? 0 : it->second.second;
    if (text.empty()) config_error(where(f->name, line) + " is empty");
    values[f->name] = convert(*f, text, line);
  }
  return Config(kind, std::move(values));
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string nearest(std::string_view word, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = std::max<std::size_t>(1, (word.size() + 1) / 2) + 1;
  for (const auto& c : candidates) {
    const std::size_t d = edit_distance(word, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace fpreg::cli
