// icobr: analysis, sweeps, region dumps and self-verification for the
// interference channel with an out-of-band relay.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "icobr/cli/config.hpp"
#include "icobr/cli/region_dump.hpp"
#include "icobr/cli/report.hpp"
#include "icobr/cli/sweep.hpp"
#include "icobr/cli/verify.hpp"
#include "icobr/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitVerification = 2;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw icobr::ValidationError(path, "cannot open for writing");
  return out;
}

int run_analyze(const std::string& config, bool as_json) {
  const auto report = icobr::cli::analyze(icobr::cli::load_scenario(config));
  if (as_json)
    std::cout << icobr::cli::to_json(report).dump(2) << '\n';
  else
    icobr::cli::write_text(std::cout, report);
  return kExitOk;
}

int run_sweep(const std::string& spec_path, const std::string& out_path, std::optional<unsigned> workers) {
  const auto spec = icobr::cli::sweep_from_json(icobr::cli::load_json_file(spec_path));
  const auto rows = icobr::cli::run_sweep(spec, icobr::cli::resolve_workers(workers));
  auto out = open_output(out_path);
  icobr::cli::write_csv(out, spec, rows);
  std::size_t warned = 0;
  for (const auto& r : rows) warned += r.warning.empty() ? 0 : 1;
  std::cerr << rows.size() << " rows written to " << out_path;
  if (warned) std::cerr << " (" << warned << " with warnings)";
  std::cerr << '\n';
  return kExitOk;
}

int run_region(const std::string& config, double xi, const std::string& mode, const std::string& out_path) {
  const auto sc = icobr::cli::load_scenario(config);
  const auto m = mode == "sr" ? icobr::RelayMode::SignalRelayingOnly : icobr::RelayMode::InterferenceForwarding;
  const auto dump = icobr::cli::make_region_dump(sc, xi, m);
  auto out = open_output(out_path);
  icobr::cli::write_region_dump(out, dump, xi, m);
  std::cout << "membership check: " << (dump.check.equivalent() ? "equivalent" : "NOT equivalent") << " ("
            << dump.check.disagreements() << " of " << dump.check.points << " grid points disagree)\n";
  return kExitOk;
}

int run_verify(std::uint64_t seed, std::size_t n) {
  if (n < 1) throw icobr::ValidationError("n", "must be >= 1");
  const auto report = icobr::cli::run_verify(seed, n);
  icobr::cli::write_verify_report(std::cout, report);
  return report.ok() ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-rate analysis for the interference channel with an out-of-band relay"};
  app.require_subcommand(1);

  std::string config, spec, out;
  bool as_json = false;
  auto* analyze = app.add_subcommand("analyze", "Analyze one scenario");
  analyze->add_option("config", config, "Scenario JSON")->required();
  analyze->add_flag("--json", as_json, "Emit JSON instead of text");

  std::optional<unsigned> workers;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and write CSV");
  sweep->add_option("spec", spec, "Sweep specification JSON")->required();
  sweep->add_option("-o,--output", out, "Output CSV")->required();
  sweep->add_option("--workers", workers, std::string("Worker threads (overridden by ") +
                                              icobr::cli::kWorkersEnv + ")");

  double xi = 0.5;
  std::string mode = "if";
  auto* region = app.add_subcommand("region", "Dump the scheme system, its projection and the closed form");
  region->add_option("config", config, "Scenario JSON")->required();
  region->add_option("--xi", xi, "Relay power fraction for the common message")->required()->check(
      CLI::Range(0.0, 1.0));
  region->add_option("--mode", mode, "Relay mode")->check(CLI::IsMember({"sr", "if"}));
  region->add_option("-o,--output", out, "Output text file")->required();

  std::uint64_t seed = 42;
  std::size_t n = 1000;
  auto* verify = app.add_subcommand("verify", "Run the randomized invariant suite");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--n", n, "Number of sampled scenarios")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*analyze) return run_analyze(config, as_json);
    if (*sweep) return run_sweep(spec, out, workers);
    if (*region) return run_region(config, xi, mode, out);
    if (*verify) return run_verify(seed, n);
  } catch (const icobr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
