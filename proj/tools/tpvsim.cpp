// Closed-loop lane-keeping simulator built around a two-point visual driver
// model. Subcommands:
//   run      execute one scenario, write trajectory.csv and metrics.txt
//   batch    run the three experiments and write a comparison table
//   selftest quick invariant checks of the controller and extractors
// Exit codes: 0 success, 1 collision/extraction failure, 2 config error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tpv/config.hpp"
#include "tpv/controller.hpp"
#include "tpv/perception.hpp"
#include "tpv/sim.hpp"

namespace fs = std::filesystem;
using namespace tpv;

namespace {

ScenarioConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
  ScenarioConfig cfg = path.empty() ? ScenarioConfig{} : parse_config_file(path);
  if (seed) cfg.rng_seed = *seed;
  return cfg;
}

int write_outputs(const RunResult& res, const ScenarioConfig& cfg,
                  const fs::path& out_dir) {
  fs::create_directories(out_dir);
  {
    std::ofstream csv(out_dir / "trajectory.csv");
    write_trajectory_csv(res.log, csv);
  }
  {
    std::ofstream mt(out_dir / "metrics.txt");
    write_metrics(res.metrics, cfg.rng_seed, mt);
  }
  return res.outcome == RunOutcome::ok && res.metrics.laps_completed >= cfg.laps ? 0 : 1;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed) {
  const ScenarioConfig cfg = load_config(config_path, seed);
  const RunResult res = run_scenario(cfg);
  const int rc = write_outputs(res, cfg, out_dir);
  std::cout << "experiment=" << to_string(cfg.experiment)
            << " laps=" << res.metrics.laps_completed
            << " collided=" << (res.metrics.collided ? "true" : "false")
            << " mean_abs_lat_err=" << res.metrics.mean_abs_lat_err << '\n';
  if (res.outcome == RunOutcome::extraction_failure)
    std::cout << "extraction failure: run aborted\n";
  return rc;
}

int cmd_batch(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed) {
  const ScenarioConfig base = load_config(config_path, seed);
  fs::create_directories(out_dir);
  std::ofstream summary(fs::path(out_dir) / "summary.txt");
  summary.precision(6);
  summary << "experiment mean_abs_lat_err std_lat_err laps_completed collided\n";
  int rc = 0;
  for (Experiment e : {Experiment::baseline, Experiment::costmap,
                       Experiment::vehicle_follow}) {
    ScenarioConfig cfg = base;
    cfg.experiment = e;
    const RunResult res = run_scenario(cfg);
    rc = std::max(rc, write_outputs(res, cfg, fs::path(out_dir) / to_string(e)));
    summary << to_string(e) << ' ' << res.metrics.mean_abs_lat_err << ' '
            << res.metrics.std_lat_err << ' ' << res.metrics.laps_completed << ' '
            << (res.metrics.collided ? "true" : "false") << '\n';
    std::cout << to_string(e) << ": mean_abs_lat_err=" << res.metrics.mean_abs_lat_err
              << " laps=" << res.metrics.laps_completed << '\n';
  }
  return rc;
}

int cmd_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& name) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << '\n';
    if (!ok) ++failures;
  };

  // DC gain of the driver model
  {
    Controller c{DriverParams{}};
    SteerCommand cmd{};
    for (int i = 0; i < 20000; ++i) cmd = c.step(0.01, 0.02);
    const double expect = 10.0 * 0.01 + 30.0 * 0.02;
    check(std::abs(cmd.torque - expect) < 1e-6, "controller DC gain");
  }
  // Pure transport delay on the near channel
  {
    DriverParams p;
    p.K_a = 0.0;
    Controller c{p};
    bool ok = true;
    for (std::size_t i = 0; i < p.delay_length(); ++i)
      ok = ok && c.step(i == 0 ? 0.5 : 0.0, 0.0).torque == 0.0;
    ok = ok && c.step(0.0, 0.0).torque != 0.0;
    check(ok, "near-channel transport delay");
  }
  // Parallel and serial cost-map rasterizers agree bit for bit
  {
    const Track tr = Track::oval(30.0, 0.75, 1.5, 0.05);
    const VehicleState pose{13.0, 0.5, M_PI / 2.0, 4.0};
    const CostMapGrid a = render_cost_map(tr, pose);
    const CostMapGrid b = render_cost_map_serial(tr, pose);
    check(a.values == b.values, "cost map parallel == serial");
  }
  // Short deterministic run
  {
    ScenarioConfig cfg;
    cfg.laps = 1;
    cfg.rng_seed = 7;
    const std::string a = trajectory_csv(run_scenario(cfg).log);
    const std::string b = trajectory_csv(run_scenario(cfg).log);
    check(a == b, "scenario determinism");
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-point visual driver model lane-keeping simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("-c,--config", config_path, "scenario configuration file");
  run->add_option("-o,--out", out_dir, "output directory");
  run->add_option("-s,--seed", seed, "override the scenario seed");

  auto* batch = app.add_subcommand("batch", "run all three experiments");
  batch->add_option("-c,--config", config_path, "scenario configuration file");
  batch->add_option("-o,--out", out_dir, "output directory");
  batch->add_option("-s,--seed", seed, "override the scenario seed");

  app.add_subcommand("selftest", "run quick invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, seed);
    if (batch->parsed()) return cmd_batch(config_path, out_dir, seed);
    return cmd_selftest();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
