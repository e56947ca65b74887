#include "fpreg/cli/config.hpp"
#include "fpreg/cli/experiments.hpp"
#include "fpreg/error.hpp"
#include "fpreg/version.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

namespace fs = std::filesystem;
using namespace fpreg;

std::string default_out_dir() {
  const char* env = std::getenv("FPREG_OUTPUT_DIR");
  return env && *env ? env : ".";
}

int report(const std::exception& e) {
  std::cerr << cli::error_record(e).dump() << '\n';
  const auto* err = dynamic_cast<const Error*>(&e);
  return err && err->kind() == ErrorKind::kConfig ? 2 : 1;
}

int run_command(const std::string& path, const std::string& out_dir, bool force, int threads) {
  const cli::Config config = cli::validate(cli::read_config_file(path));
  const std::string target = cli::output_path(config, out_dir);
  if (fs::exists(target) && !force) {
    throw Error(ErrorKind::kIo, "output " + target + " exists; pass --force to overwrite");
  }
  const cli::Result result = cli::find_experiment(config.kind()).run(config, {threads});
  if (const auto parent = fs::path(target).parent_path(); !parent.empty()) fs::create_directories(parent);
  const std::string tmp = target + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp);
    cli::write_result(out, config, result, cli::output_format(config));
    if (!out) throw Error(ErrorKind::kIo, "write failed for " + tmp);
  }
  fs::rename(tmp, target);
  std::cout << target << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpreg: config-driven experiment runner"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = default_out_dir();
  bool force = false;
  int threads = 1;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_flag("--force", force, "overwrite an existing output file");
  run->add_option("--threads", threads, "worker threads for scans")->check(CLI::Range(1, 1024));
  run->add_option("--out-dir", out_dir, "output directory (default $FPREG_OUTPUT_DIR or .)");

  std::string kind;
  auto* list = app.add_subcommand("list", "list experiment kinds, or the keys of one kind");
  list->add_option("kind", kind, "experiment kind");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a config file and print its canonical form");
  validate->add_option("config", validate_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(config_path, out_dir, force, threads);
    if (*list) {
      if (kind.empty()) {
        cli::print_catalog(std::cout);
      } else {
        cli::print_experiment_help(std::cout, cli::find_experiment(kind));
      }
      return 0;
    }
    const cli::Config config = cli::validate(cli::read_config_file(validate_path));
    std::cout << config.canonical() << "config_hash=" << config.hash() << '\n';
    return 0;
  } catch (const std::exception& e) {
    return report(e);
  }
}
