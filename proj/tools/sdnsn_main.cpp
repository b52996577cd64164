#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sdnsn/sdnsn.hpp"

namespace {

int cmd_validate(const std::string& path) {
  sdnsn::Scenario s;
  try {
    s = sdnsn::load_scenario(path);
  } catch (const sdnsn::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  auto violations = sdnsn::validate_scenario(s);
  if (violations.empty()) {
    std::cout << path << ": ok\n";
    return 0;
  }
  for (const std::string& v : violations) std::cout << path << ": " << v << "\n";
  return 1;
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed,
            const std::string& trace_path, const std::string& metrics_path, bool strict) {
  sdnsn::Scenario s;
  try {
    s = sdnsn::load_scenario(path);
  } catch (const sdnsn::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  auto violations = sdnsn::validate_scenario(s);
  if (!violations.empty()) {
    for (const std::string& v : violations) std::cerr << path << ": " << v << "\n";
    return 1;
  }
  std::uint64_t used_seed = seed.value_or(s.seed);
  sdnsn::RunResult result;
  try {
    result = sdnsn::run_scenario(s, used_seed);
  } catch (const sdnsn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) {
      std::cerr << "error: cannot write " << trace_path << "\n";
      return 2;
    }
    for (const sdnsn::TraceRecord& r : result.trace) out << r.line() << "\n";
  }
  if (!metrics_path.empty()) {
    std::ofstream out(metrics_path);
    if (!out) {
      std::cerr << "error: cannot write " << metrics_path << "\n";
      return 2;
    }
    out << sdnsn::metrics_json(s, result, used_seed).dump(2) << "\n";
  }
  std::cout << "trace-digest: " << result.metrics.trace_digest << "\n";
  std::cout << (result.metrics.quiescent
                    ? "quiescent at " + std::to_string(result.metrics.end_time) + "ms"
                    : "non-quiescent: " + std::to_string(result.metrics.pending_events) +
                          " events pending at horizon")
            << "\n";
  if (strict && !result.metrics.quiescent) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"named-service network simulator"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("scenario", validate_path, "scenario file")->required();

  std::string run_path;
  std::optional<std::uint64_t> seed;
  std::string trace_path;
  std::string metrics_path;
  bool strict = false;
  CLI::App* run = app.add_subcommand("run", "execute a scenario");
  run->add_option("--scenario", run_path, "scenario file")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--trace", trace_path, "write the event trace here");
  run->add_option("--metrics", metrics_path, "write run metrics (JSON) here");
  run->add_flag("--strict", strict, "exit nonzero when the run does not quiesce");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return cmd_validate(validate_path);
  return cmd_run(run_path, seed, trace_path, metrics_path, strict);
}
