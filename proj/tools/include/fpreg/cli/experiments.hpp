#pragma once

#include "fpreg/cli/config.hpp"

#include "json.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace fpreg::cli {

struct RunContext {
  int threads = 1;
};

/// Result of one run. `rows` form the CSV table; JSON carries both.
struct Result {
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;
};

struct Experiment {
  std::string kind;
  std::string summary;
  bool stochastic = false;
  std::vector<Field> fields;
  std::function<Result(const Config&, const RunContext&)> run;
};

const std::vector<Experiment>& catalog();

/// Throws kConfig with a nearest-match suggestion for unknown kinds.
const Experiment& find_experiment(const std::string& kind);

/// Validates a raw config against the schema of its `kind` entry.
Config validate(const RawConfig& raw);

void print_catalog(std::ostream& out);
void print_experiment_help(std::ostream& out, const Experiment& e);

enum class Format { kCsv, kJson };

/// Writes the result with config hash and version embedded.
void write_result(std::ostream& out, const Config& config, const Result& result, Format format);

Format output_format(const Config& config);
/// `output` key if given, otherwise `<kind>-<hash8>.<ext>`; relative to `out_dir`.
std::string output_path(const Config& config, const std::string& out_dir);

/// Machine-readable error record.
nlohmann::ordered_json error_record(const std::exception& e);

}  // namespace fpreg::cli
