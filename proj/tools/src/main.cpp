#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fxtcore/config.hpp"
#include "fxtcore/errors.hpp"
#include "fxtcore/scenarios.hpp"
#include "fxtcore/sim.hpp"
#include "fxtcore/trace.hpp"
#include "fxtcore/verify.hpp"
#include "fxtcore/version.hpp"
#include "plot.hpp"

namespace {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

fs::path default_out_root() {
  if (const char* env = std::getenv("FXT_OUT_ROOT")) return fs::path(env);
  return fs::path("out");
}

fxt::ScenarioConfig scenario_by_name(const std::string& name) {
  using fxt::IntegratorVariant;
  using fxt::WindKind;
  if (name == "gap-full-rank")
    return fxt::shoot_the_gap_scenario(IntegratorVariant::full_rank);
  if (name == "gap-rank-deficient")
    return fxt::shoot_the_gap_scenario(IntegratorVariant::rank_deficient);
  if (name == "quad-constant")
    return fxt::quadrotor_scenario(WindKind::constant_wind, true);
  if (name == "quad-gust")
    return fxt::quadrotor_scenario(WindKind::gusty_wind, true);
  if (name == "quad-constant-noadapt")
    return fxt::quadrotor_scenario(WindKind::constant_wind, false);
  if (name == "quad-gust-noadapt")
    return fxt::quadrotor_scenario(WindKind::gusty_wind, false);
  throw fxt::ConfigError("unknown scenario '" + name + "'");
}

int cmd_run(const std::string& scenario, const std::string& config_path,
            std::string out_dir, long long seed) {
  fxt::ScenarioConfig cfg;
  try {
    if (!config_path.empty())
      cfg = fxt::load_config(config_path);
    else
      cfg = scenario_by_name(scenario);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    if (out_dir.empty()) out_dir = (default_out_root() / cfg.name).string();
    fs::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    const fxt::SimulationTrace trace = fxt::run_closed_loop(cfg);
    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    const fs::path dir(out_dir);
    const fs::path resolved_config =
        config_path.empty() ? dir / "config.json" : fs::path(config_path);
    if (config_path.empty())
      write_atomic(resolved_config, fxt::config_to_json(cfg));

    fxt::write_trace_csv(trace, (dir / "trace.csv.tmp").string());
    fs::rename(dir / "trace.csv.tmp", dir / "trace.csv");
    write_atomic(dir / "summary.json", fxt::summary_to_json(trace.summary));

    nlohmann::json manifest;
    manifest["scenario"] = cfg.name;
    manifest["config"] = resolved_config.string();
    manifest["out_dir"] = out_dir;
    manifest["seed"] = cfg.seed;
    manifest["tool_version"] = fxt::kVersion;
    manifest["wall_clock_s"] = wall_s;
    write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

int cmd_verify(const std::string& suite, int samples, std::string out_dir,
               long long seed) {
  if (samples <= 0) {
    std::cerr << "error: --samples must be positive\n";
    return 2;
  }
  try {
    const std::uint64_t s = seed >= 0 ? static_cast<std::uint64_t>(seed) : 20260824;
    fxt::PropertyReport report;
    if (suite == "lemmas")
      report = fxt::verify_lemmas(samples, s);
    else if (suite == "envelopes")
      report = fxt::verify_envelopes(samples, s);
    else if (suite == "qp")
      report = fxt::verify_qp(samples, s);
    else {
      std::cerr << "error: unknown suite '" << suite << "'\n";
      return 2;
    }
    if (out_dir.empty()) out_dir = default_out_root().string();
    fs::create_directories(out_dir);
    write_atomic(fs::path(out_dir) / ("verify-" + suite + ".json"),
                 fxt::report_to_json(report));
    std::cout << suite << ": " << report.samples << " samples, "
              << report.violations << " violations\n";
    if (report.violations > 0) {
      std::cerr << "counterexample: " << report.first_counterexample << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

int cmd_plot(const std::string& trace_path, const std::string& kind,
             const std::string& out_path) {
  fxt::SimulationTrace trace;
  try {
    trace = fxt::read_trace_csv(trace_path);
    const auto series = fxt::plot::series_for_kind(trace, kind);
    const std::string svg =
        fxt::plot::render_svg(series, kind, kind == "xy" ? "x (m)" : "t (s)",
                              kind == "xy" ? "y (m)" : kind);
    write_atomic(out_path, svg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive-safety simulation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fxt::kVersion);

  auto* run = app.add_subcommand("run", "Run one closed-loop scenario");
  std::string scenario, config_path, out_dir;
  long long seed = -1;
  run->add_option("--scenario", scenario, "Built-in scenario name");
  run->add_option("--config", config_path, "Config JSON path (overrides --scenario)");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Seed override");

  auto* verify = app.add_subcommand("verify", "Run a randomized property suite");
  std::string suite;
  int samples = 100000;
  std::string verify_out;
  long long verify_seed = -1;
  verify->add_option("--suite", suite, "lemmas | envelopes | qp")->required();
  verify->add_option("--samples", samples, "Sample count");
  verify->add_option("--out", verify_out, "Report directory");
  verify->add_option("--seed", verify_seed, "RNG seed");

  auto* plot = app.add_subcommand("plot", "Render a static SVG from a trace");
  std::string trace_path, kind, plot_out = "plot.svg";
  plot->add_option("--trace", trace_path, "trace.csv path")->required();
  plot->add_option("--kind", kind, "xy | states | controls | cbf | theta | eta")
      ->required();
  plot->add_option("--out", plot_out, "Output SVG path");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (scenario.empty() && config_path.empty()) {
      std::cerr << "error: need --scenario or --config\n";
      return 2;
    }
    return cmd_run(scenario, config_path, out_dir, seed);
  }
  if (verify->parsed()) return cmd_verify(suite, samples, verify_out, verify_seed);
  if (plot->parsed()) return cmd_plot(trace_path, kind, plot_out);
  return 2;
}
