// Command-line front end: `rlcert run` executes one experiment config and
// `rlcert report` folds a directory of run outputs into plot-ready CSVs.
//
// Exit codes: 0 success, 2 config/usage error, 3 resource cap reached
// (partial results were still written), 4 internal error.

#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "rlcert/cert/reward_search.hpp"
#include "rlcert/errors.hpp"
#include "rlcert/io/report.hpp"
#include "rlcert/io/run_config.hpp"
#include "rlcert/io/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitInternal = 4;

const char* default_out_root() {
  const char* env = std::getenv("RLCERT_OUT");
  return env != nullptr ? env : "out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness certification for Q-learning policies"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = default_out_root();
  std::optional<std::uint64_t> seed_override;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "Execute one experiment config");
  run->add_option("--config", config_path, "Path to the JSON run config")->required();
  run->add_option("--out", out_dir, "Output directory (default $RLCERT_OUT or ./out)");
  run->add_option("--seed", seed_override, "Override the smoothing seed");
  run->add_option("--jobs", jobs, "Worker threads for sampling loops")
      ->check(CLI::PositiveNumber);

  std::string report_in;
  std::string report_out = default_out_root();
  auto* report = app.add_subcommand("report", "Aggregate run outputs into curves");
  report->add_option("--in", report_in, "Directory of run outputs")->required();
  report->add_option("--out", report_out, "Directory for the report CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      rlcert::RunConfig cfg = rlcert::load_run_config(config_path);
      if (seed_override) cfg.seed = *seed_override;
      const auto out = rlcert::run_experiment(cfg, out_dir, jobs);
      for (const auto& f : out.files) std::cout << f << '\n';
      return kExitOk;
    }
    const auto written = rlcert::write_report(report_in, report_out);
    for (const auto& f : written) std::cout << f << '\n';
    return kExitOk;
  } catch (const rlcert::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rlcert::PartialResultError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kExitResource;
  } catch (const rlcert::ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kExitResource;
  } catch (const rlcert::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
