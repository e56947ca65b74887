#include "fpreg/table_io.hpp"

#include "fpreg/error.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace fpreg::tomography {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::size_t line) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::kConfig, "rotation set line " + std::to_string(line) + ": bad number '" +
                                        std::string(s) + "'");
  }
  return v;
}

}  // namespace

RotationSet parse_rotation_set(std::string_view csv) {
  RotationSet out;
  std::size_t line_no = 0;
  while (!csv.empty()) {
    const auto nl = csv.find('\n');
    std::string_view line = trim(csv.substr(0, nl));
    csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#' || line.starts_with("index")) continue;
    std::vector<std::string_view> fields;
    for (std::size_t pos = 0;;) {
      const auto comma = line.find(',', pos);
      fields.push_back(line.substr(pos, comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != 3) {
      throw Error(ErrorKind::kConfig, "rotation set line " + std::to_string(line_no) + ": expected index,phi,alpha");
    }
    TripletRotation r;
    r.phi = parse_double(fields[1], line_no);
    r.alpha = parse_double(fields[2], line_no);
    out.push_back(r);
  }
  if (out.empty()) throw Error(ErrorKind::kConfig, "rotation set is empty");
  return out;
}

RotationSet read_rotation_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open rotation set '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_rotation_set(buffer.str());
}

void write_rotation_set(std::ostream& out, const RotationSet& set) {
  out << "index,phi,alpha\n" << std::setprecision(17);
  for (std::size_t i = 0; i < set.size(); ++i) out << i + 1 << ',' << set[i].phi << ',' << set[i].alpha << '\n';
}

RotationSet bundled_left_set() { return parse_rotation_set(bundled_left_set_csv()); }
RotationSet bundled_right_set() { return parse_rotation_set(bundled_right_set_csv()); }

}  // namespace fpreg::tomography
