// Acceptance run: every experiment at its default configuration, twice,
// followed by the property suite. One PASS/FAIL line per criterion.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "cli/dispatch.hpp"
#include "staqst/invariant.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace staqst;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string num(double v) { return format_number(v); }

json load(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("missing " + p.string());
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Job {
  std::string experiment;
  PulseFamily family = PulseFamily::sta_sinusoidal;
};

const Job kJobs[] = {
    {"scan-epsilon"},
    {"populations", PulseFamily::sta_sinusoidal},
    {"populations", PulseFamily::sta_gaussian},
    {"populations", PulseFamily::stirap},
    {"fit-gaussian"},
    {"robustness"},
    {"decoherence"},
    {"cesium-check"},
    {"verify-invariant"},
    {"pulses-dump"},
};

std::vector<fs::path> run_all(const fs::path& root, int threads) {
  std::vector<fs::path> files;
  std::ostringstream sink;
  for (const auto& job : kJobs) {
    cli::RunConfig cfg;
    cfg.experiment = job.experiment;
    cfg.family = job.family;
    cfg.out_dir = root;
    cfg.threads = threads;
    const auto r = cli::dispatch(cfg, sink);
    for (const auto& f : r.files) files.push_back(fs::relative(f, root));
  }
  return files;
}

Outcome summary_checks(const json& s, std::initializer_list<const char*> names) {
  Outcome o;
  for (const char* n : names) {
    const std::string k = std::string("check.") + n;
    o.require(s.at(k + ".pass").get<bool>(),
              std::string(n) + " = " + num(s.at(k + ".value").get<double>()) + " " +
                  s.at(k + ".relation").get<std::string>() + " " +
                  num(s.at(k + ".threshold").get<double>()));
  }
  return o;
}

Outcome property_suite(const fs::path& out) {
  Outcome o;
  const Basis basis(2, 1);
  const HamiltonianTerms terms(basis);
  const auto chain = transfer_chain();
  const StaParams sta;
  const GaussianParams gauss;
  const auto sta_set = PulseSet::sta_sinusoidal(sta);
  const auto gauss_set = PulseSet::sta_gaussian(sta, gauss);
  const auto stirap_set = PulseSet::stirap(StirapParams{});

  double drift = 0.0;
  for (const char* f : {"sta_sinusoidal", "sta_gaussian", "stirap"}) {
    const auto s = load(out / "populations" / (std::string("fig6_") + f + "_summary.json"));
    drift = std::max(drift, s.at("max_norm_drift").get<double>());
  }
  o.require(drift <= 1e-7, "closed norm drift " + num(drift) + " <= 1e-7");

  {
    PopulationOptions opts;
    opts.family = PulseFamily::sta_gaussian;
    opts.dec = {0.05 * gauss.eps_prime, 0.05 * gauss.eps_prime};
    const auto run = run_populations(opts);
    o.require(run.meta.max_norm_drift <= 1e-6, "open trace drift " + num(run.meta.max_norm_drift) + " <= 1e-6");
    o.require(run.meta.max_hermiticity_deviation <= 1e-8,
              "open hermiticity deviation " + num(run.meta.max_hermiticity_deviation) + " <= 1e-8");
    o.require(run.meta.min_eigenvalue >= -1e-7, "open min eigenvalue " + num(run.meta.min_eigenvalue) + " >= -1e-7");
  }

  {
    const Matrix n = excitation_operator(basis);
    double worst = 0.0;
    for (const auto* p : {&sta_set, &gauss_set, &stirap_set}) {
      const auto h = driven_hamiltonian(terms, *p);
      for (int i = 0; i <= 50; ++i) {
        const double t = p->t_start() + (p->t_end() - p->t_start()) * i / 50.0;
        const Matrix ht = h(t);
        const double scale = std::max(max_abs(ht), 1e-300);
        worst = std::max(worst, max_abs(ht * n - n * ht) / scale);
      }
    }
    o.require(worst <= 1e-12, "excitation commutation " + num(worst) + " <= 1e-12 |H|");
  }

  {
    const auto s = load(out / "verify-invariant" / "invariant_summary.json");
    const double r = s.at("max_relative_invariance_residual").get<double>();
    o.require(r <= 1e-6, "invariance residual " + num(r) + " <= 1e-6 |H|");
  }

  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> gamma(0.05, 1.5), beta(-3.14159, 3.14159), rate(-5.0, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const AngleSample a{gamma(rng), beta(rng), rate(rng), rate(rng)};
      const auto c = inverse_engineer(a);
      const auto r = auxiliary_residual(a, c.omega, c.g);
      worst = std::max({worst, std::abs(r.r_gamma), std::abs(r.r_beta)});
    }
    o.require(worst <= 1e-10, "auxiliary residual over 1000 samples " + num(worst) + " <= 1e-10");
  }

  {
    const auto h = driven_hamiltonian(terms, gauss_set);
    const auto psi0 = StateVector::basis_state(basis, chain.front());
    const auto pure = propagate_schrodinger(h, psi0, 0.0, sta.t_f, PropagatorConfig::adaptive(1e-10, 51));
    const auto zero_ops = collapse_operators(basis, {});
    const auto mixed = propagate_lindblad(h, zero_ops, DensityMatrixState::pure(psi0), 0.0, sta.t_f,
                                          PropagatorConfig::fixed(sta.t_f / 4000, 51));
    double worst = 0.0;
    for (std::size_t s = 0; s < pure.times.size(); ++s) {
      const auto a = observables(pure.states[s], basis, chain, chain.back());
      const auto b = observables(mixed.states[s], basis, chain, chain.back());
      for (std::size_t k = 0; k < chain.size(); ++k) {
        worst = std::max(worst, std::abs(a.populations[k] - b.populations[k]));
      }
    }
    o.require(worst <= 1e-6, "zero-rate Lindblad vs Schrodinger " + num(worst) + " <= 1e-6");
  }

  {
    const DecoherenceParams dec{0.05 * gauss.eps_prime, 0.05 * gauss.eps_prime};
    const double d = std::abs(open_transfer_fidelity(gauss_set, dec, 4000) -
                              open_transfer_fidelity(gauss_set, dec, 8000));
    o.require(d <= 1e-8, "step halving change " + num(d) + " <= 1e-8");
  }

  {
    const double kappa = 2.0;
    const HamiltonianFn zero = [&basis](double) {
      const auto d = static_cast<Eigen::Index>(basis.dimension());
      return Matrix::Zero(d, d).eval();
    };
    const auto ops = collapse_operators(basis, {kappa, 0.0});
    const auto rho0 = DensityMatrixState::pure(StateVector::basis_state(basis, BasisState::parse("ss,1")));
    const auto traj = propagate_lindblad(zero, ops, rho0, 0.0, 1.0, PropagatorConfig::fixed(1.0 / 4000, 21));
    const auto i = static_cast<Eigen::Index>(basis.index("ss,0"));
    double worst = 0.0;
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
      worst = std::max(worst, std::abs(traj.states[s](i, i).real() - (1.0 - std::exp(-kappa * traj.times[s]))));
    }
    o.require(worst <= 1e-6, "kappa-only decay vs 1 - exp(-kappa t) " + num(worst) + " <= 1e-6");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string out = "acceptance_out";
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool verbose = false;
  app.add_option("--out", out, "scratch directory");
  app.add_option("--threads", threads)->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", verbose, "print the individual measurements");
  CLI11_PARSE(app, argc, argv);

  const fs::path root(out);
  fs::remove_all(root);
  const auto first = root / "run1";
  const auto second = root / "run2";

  std::vector<std::pair<std::string, Outcome>> results;
  try {
    const auto files = run_all(first, threads);
    const auto again = run_all(second, threads);

    const auto pop = [&](const char* f) {
      return load(first / "populations" / (std::string("fig6_") + f + "_summary.json"));
    };
    results.emplace_back("1 epsilon scan peaks",
                         summary_checks(load(first / "scan-epsilon" / "fig4_summary.json"),
                                        {"peak1_location", "peak2_location", "peak1_fidelity",
                                         "peak2_fidelity", "interior_maxima"}));
    results.emplace_back("2 sinusoidal transfer",
                         summary_checks(pop("sta_sinusoidal"), {"final_P5", "max_leakage", "P3_over_P2_plus_P4"}));
    results.emplace_back("3 gaussian transfer", summary_checks(pop("sta_gaussian"), {"final_P5_vs_sinusoidal"}));
    results.emplace_back("4 stirap baseline", summary_checks(pop("stirap"), {"final_P5", "window_over_sta"}));
    results.emplace_back("5 gaussian refit",
                         summary_checks(load(first / "fit-gaussian" / "gaussian_fit_summary.json"),
                                        {"eps_prime", "sigma", "converged"}));
    results.emplace_back("6 robustness grid",
                         summary_checks(load(first / "robustness" / "fig7_summary.json"), {"min_fidelity"}));
    results.emplace_back("7 cesium parameters",
                         summary_checks(load(first / "cesium-check" / "cesium_summary.json"), {"fidelity"}));
    results.emplace_back("8 decoherence structure",
                         summary_checks(load(first / "decoherence" / "fig8_summary.json"),
                                        {"zero_rate_corner", "leakage_dominates"}));
    results.emplace_back("9 property suite", property_suite(first));

    Outcome det;
    det.require(files == again, "same artifact list (" + std::to_string(files.size()) + " files)");
    for (const auto& f : files) {
      if (f.extension() != ".csv") continue;
      det.require(slurp(first / f) == slurp(second / f), f.string() + " byte-identical");
    }
    results.emplace_back("10 determinism", det);
  } catch (const std::exception& e) {
    std::cerr << "acceptance run aborted: " << e.what() << '\n';
    return 1;
  }

  bool all = true;
  for (const auto& [name, o] : results) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << '\n';
    if (verbose || !o.pass) {
      for (const auto& n : o.notes) std::cout << "        " << n << '\n';
    }
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
