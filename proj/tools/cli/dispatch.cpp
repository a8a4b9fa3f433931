#include "cli/dispatch.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <ostream>

namespace staqst::cli {

namespace fs = std::filesystem;

namespace {

struct Writer {
  fs::path dir;
  DispatchResult& result;

  void csv(const std::string& name, const CsvTable& table) {
    const auto path = dir / name;
    table.write(path);
    result.files.push_back(path);
  }
  void json(const std::string& name, const Summary& summary) {
    const auto path = dir / name;
    summary.write(path);
    result.files.push_back(path);
  }
};

void report(std::ostream& log, const Summary& s) {
  for (const auto& c : s.checks) {
    log << (c.passed ? "PASS " : "FAIL ") << s.experiment << '.' << c.name << ": "
        << format_number(c.value) << ' ' << c.relation << ' ' << format_number(c.threshold)
        << '\n';
  }
}

int verdict(const Summary& s) { return s.all_passed() ? kPass : kChecksFailed; }

int run_scan(const RunConfig& cfg, Writer& w, std::ostream& log) {
  const auto scan = scan_epsilon(scan_options(cfg));
  const auto summary = summarize_scan(scan);
  w.csv("fig4_scan.csv", scan_table(scan));
  w.json("fig4_summary.json", summary);
  report(log, summary);
  return verdict(summary);
}

int run_populations_cmd(const RunConfig& cfg, Writer& w, std::ostream& log) {
  const auto opts = population_options(cfg);
  const auto run = run_populations(opts);
  std::optional<double> reference;
  if (opts.family == PulseFamily::sta_gaussian && opts.dec.closed()) {
    auto ref = opts;
    ref.family = PulseFamily::sta_sinusoidal;
    ref.samples = 2;
    reference = run_populations(ref).final_report().fidelity;
  }
  const auto summary = summarize_populations(run, reference);
  const std::string stem = "fig6_" + std::string(to_string(opts.family));
  w.csv(stem + ".csv", population_table(run));
  w.json(stem + "_summary.json", summary);
  report(log, summary);
  return verdict(summary);
}

int run_fit(const RunConfig& cfg, Writer& w, std::ostream& log) {
  const auto fit = run_gaussian_fit(fit_options(cfg));
  const auto summary = summarize_fit(fit);
  w.csv("gaussian_fit.csv", fit_table(fit));
  w.json("gaussian_fit_summary.json", summary);
  report(log, summary);
  return verdict(summary);
}

int run_robustness(const RunConfig& cfg, Writer& w, std::ostream& log) {
  const auto grid = robustness_grid(robustness_options(cfg));
  const auto summary = summarize_robustness(grid);
  w.csv("fig7_robustness.csv", grid_table(grid, "fidelity"));
  w.json("fig7_summary.json", summary);
  report(log, summary);
  return verdict(summary);
}

int run_decoherence(const RunConfig& cfg, Writer& w, std::ostream& log) {
  const auto opts = decoherence_grid_options(cfg);
  const auto grid = decoherence_grid(opts);
  const double closed = closed_transfer_fidelity(PulseSet::sta_gaussian(opts.sta, opts.gauss),
                                                 PropagatorConfig::adaptive(cfg.tolerance, 2));
  const auto summary = summarize_decoherence(grid, closed);
  w.csv("fig8_decoherence.csv", grid_table(grid, "fidelity"));
  w.json("fig8_summary.json", summary);
  report(log, summary);
  return verdict(summary);
}

int run_cesium(const RunConfig& cfg, Writer& w, std::ostream& log) {
  const auto result = cesium_check(cesium_options(cfg));
  const auto summary = summarize_cesium(result);
  w.csv("cesium_populations.csv", population_table(result.run));
  w.json("cesium_summary.json", summary);
  report(log, summary);
  return verdict(summary);
}

int run_verify(const RunConfig& cfg, Writer& w, std::ostream& log) {
  const auto rows = verify_invariant(cfg.sta, cfg.verify_points, cfg.verify_mu, cfg.verify_h);
  const auto summary = summarize_invariant(rows);
  const auto table = invariant_table(rows);
  w.csv("invariant_verify.csv", table);
  w.json("invariant_summary.json", summary);
  log << table.str();
  report(log, summary);
  return verdict(summary);
}

int run_dump(const RunConfig& cfg, Writer& w, std::ostream& log) {
  const auto pulses = make_pulse_set(cfg.dump_family, cfg.sta, cfg.gauss, cfg.stirap);
  const double span = pulses.t_end() - pulses.t_start();
  const double from = cfg.dump_t_start.value_or(pulses.t_start() - 0.5 * span);
  const double to = cfg.dump_t_end.value_or(pulses.t_end() + 0.5 * span);
  if (!(to > from)) throw ConfigError("dump.t_end must exceed dump.t_start");
  CsvTable table({"t_us", "Omega1_rad_per_us", "g1_rad_per_us", "Omega2_rad_per_us",
                  "g2_rad_per_us"});
  for (const auto& s : sample_pulses(pulses, from, to, cfg.dump_samples)) {
    table.add_row(std::vector<double>{s.t, s.controls.omega1, s.controls.g1, s.controls.omega2,
                                      s.controls.g2});
  }
  w.csv("pulses_" + std::string(to_string(cfg.dump_family)) + ".csv", table);
  log << "wrote " << table.rows() << " pulse samples\n";
  return kPass;
}

}  // namespace

DispatchResult dispatch(const RunConfig& cfg, std::ostream& log) {
  if (!is_experiment(cfg.experiment)) {
    throw ConfigError("no experiment selected (use a subcommand or run.experiment)");
  }
  cfg.validate();
  DispatchResult result;
  result.directory = cfg.out_dir / cfg.experiment;
  fs::create_directories(result.directory);
  Writer w{result.directory, result};

  const std::string& id = cfg.experiment;
  if (id == "scan-epsilon") result.status = run_scan(cfg, w, log);
  else if (id == "populations") result.status = run_populations_cmd(cfg, w, log);
  else if (id == "fit-gaussian") result.status = run_fit(cfg, w, log);
  else if (id == "robustness") result.status = run_robustness(cfg, w, log);
  else if (id == "decoherence") result.status = run_decoherence(cfg, w, log);
  else if (id == "cesium-check") result.status = run_cesium(cfg, w, log);
  else if (id == "verify-invariant") result.status = run_verify(cfg, w, log);
  else result.status = run_dump(cfg, w, log);
  return result;
}

int run_main(int argc, char** argv) {
  CLI::App app{"Shortcut-to-adiabaticity state transfer simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  int threads = 1;
  bool seedless = false;
  app.add_option("--config", config_path, "configuration file (section.key = value)");
  app.add_option("--out", out_dir, "output root directory");
  app.add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--seedless", seedless, "assert the run draws no random numbers");

  const std::pair<std::string_view, const char*> commands[] = {
      {"scan-epsilon", "fidelity versus epsilon and its high-fidelity peaks"},
      {"populations", "chain populations for one pulse family"},
      {"fit-gaussian", "refit the shortcut cavity coupling with a Gaussian"},
      {"robustness", "fidelity under static amplitude and width errors"},
      {"decoherence", "fidelity over the cavity and spontaneous decay grid"},
      {"cesium-check", "open-system fidelity at cesium cavity parameters"},
      {"verify-invariant", "invariance and auxiliary-equation residuals"},
  };
  std::string chosen;
  for (const auto& [id, help] : commands) {
    app.add_subcommand(std::string(id), help)->callback([&chosen, id = id] {
      chosen = std::string(id);
    });
  }
  app.add_subcommand("run", "run the experiment named by run.experiment")->callback([&chosen] {
    chosen = "run";
  });
  auto* pulses = app.add_subcommand("pulses", "pulse utilities");
  pulses->require_subcommand(1);
  pulses->add_subcommand("dump", "write sampled controls")->callback([&chosen] {
    chosen = "pulses-dump";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : parse_config(config_path);
    if (chosen != "run") {
      if (!cfg.experiment.empty() && cfg.experiment != chosen) {
        throw ConfigError("config selects '" + cfg.experiment + "' but the command is '" + chosen +
                          "'");
      }
      cfg.experiment = chosen;
    }
    cfg.out_dir = out_dir;
    cfg.threads = threads;
    // Every experiment is deterministic; the flag documents that intent.
    (void)seedless;
    const auto result = dispatch(cfg, std::cout);
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
    return result.status;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace staqst::cli
