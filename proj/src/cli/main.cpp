#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "cli/cli.hpp"
#include "cli/serialize.hpp"
#include "wavestab/errors.hpp"

namespace {

using namespace wavestab;
using namespace wavestab::cli;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WAVESTAB_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// stderr always gets the document; a copy lands next to the outputs when
// the directory is usable.
int report_error(const std::string& code, const std::string& message,
                 const std::string& command, const std::string& out_dir,
                 int exit_code) {
  std::string doc = error_json(code, message, command, exit_code);
  std::cerr << doc;
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!ec) {
      std::ofstream out(std::filesystem::path(out_dir) / "error.json",
                        std::ios::binary);
      if (out) out << doc;
    }
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Periodic traveling-wave profiles and spectral stability criteria "
      "for quasilinear Schrodinger models"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  bool no_timestamp = false;

  const struct {
    const char* name;
    const char* description;
  } commands[] = {
      {"profile", "solve one wave and write its profile CSV and summary"},
      {"stability", "full stability report for one wave"},
      {"scan", "parameter sweep with one report row per grid point"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.description);
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--threads", threads,
                    "worker threads (default: WAVESTAB_THREADS, then all "
                    "hardware threads)");
    sub->add_flag("--no-timestamp", no_timestamp,
                  "omit the generated_at field for byte-identical reruns");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error("ConfigError", e.what(), "", "", 2);
  }

  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig config;
  try {
    config = load_config(config_path);
    if (command == "scan" && !config.scan)
      fail(ErrorCode::ConfigError, "scan command requires a 'scan' section");
  } catch (const Error& e) {
    return report_error(to_string(e.code()), e.what(), command, out_dir, 2);
  } catch (const std::exception& e) {
    return report_error("ConfigError", e.what(), command, out_dir, 2);
  }

  RunOptions options;
  options.out_dir = out_dir;
  options.threads = resolve_threads(threads);
  options.timestamp = !no_timestamp;

  try {
    if (command == "profile") return run_profile(config, options);
    if (command == "stability") return run_stability(config, options);
    return run_scan(config, options);
  } catch (const Error& e) {
    int exit_code = e.code() == ErrorCode::ConfigError ? 2 : 3;
    return report_error(to_string(e.code()), e.what(), command, out_dir,
                        exit_code);
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what(), command, out_dir, 3);
  }
}
