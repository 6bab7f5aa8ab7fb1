// swarmsim: command-line driver for the swarm lattice library.
//
// Exit codes: 0 success, 1 assumption or criterion failure, 2 configuration
// error, 3 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "swarm/diagnostics.hpp"
#include "swarm/dynamics.hpp"
#include "swarm/errors.hpp"
#include "swarm/experiment_config.hpp"
#include "swarm/experiments.hpp"
#include "swarm/io.hpp"
#include "swarm/lattice.hpp"
#include "swarm/linearization.hpp"
#include "swarm/rng.hpp"
#include "swarm/swarm_graph.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace swarm;

namespace {

enum ExitCode { kOk = 0, kCriterionFailure = 1, kConfigError = 2, kNumericalFailure = 3 };

// Thrown for numerical failures that already printed their diagnostics.
struct NumericalExit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  std::string out;
  std::size_t jobs = 0;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::vector<std::string> raw_sets;
};

// Registers a flag that forwards its value to ExperimentConfig::set.
void add_override(CLI::App* app, CommonOptions& opts, const std::string& flag,
                  const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&opts, key](const std::string& value) { opts.overrides.emplace_back(key, value); },
      help + " (" + key + ")");
}

void add_common(CLI::App* app, CommonOptions& opts) {
  app->add_option("--config", opts.config_path, "Config file with section.key = value lines");
  app->add_option("--out", opts.out, "Output directory (output.dir)");
  app->add_option("--set", opts.raw_sets, "Override any config key: --set section.key=value");
  add_override(app, opts, "--R", "geometry.R", "Desired link length");
  add_override(app, opts, "--R-a", "geometry.R_a", "Maximum link length");
  add_override(app, opts, "--R-s", "geometry.R_s", "Sensing radius");
  add_override(app, opts, "--profile", "interaction.profile", "Interaction profile");
  add_override(app, opts, "--dt", "simulation.dt", "Time step");
  add_override(app, opts, "--horizon", "simulation.horizon", "Simulated time");
  add_override(app, opts, "--growth", "experiment.growth", "Lattice growth policy");
}

ExperimentConfig resolve_config(const CommonOptions& opts) {
  ExperimentConfig cfg = opts.config_path.empty() ? ExperimentConfig{} : load_config(opts.config_path);
  for (const auto& entry : opts.raw_sets) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + entry + "'");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(' '));
      s.erase(s.find_last_not_of(' ') + 1);
      return s;
    };
    cfg.set(trim(entry.substr(0, eq)), trim(entry.substr(eq + 1)));
  }
  for (const auto& [key, value] : opts.overrides) cfg.set(key, value);
  if (!opts.out.empty()) cfg.output_dir = opts.out;
  return cfg;
}

fs::path artifact_dir(const ExperimentConfig& cfg, const std::string& command) {
  fs::path base = cfg.output_dir;
  if (const char* root = std::getenv("SWARMSIM_OUTPUT_ROOT"); root != nullptr && *root != '\0' &&
                                                             base.is_relative()) {
    base = fs::path(root) / base;
  }
  const fs::path dir = base / command;
  fs::create_directories(dir);
  return dir;
}

std::string hex64(std::uint64_t value) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << value;
  return out.str();
}

void write_manifest(const fs::path& dir, const std::string& command, const ExperimentConfig& cfg,
                    const json& seeds, const std::vector<std::string>& outputs) {
  json manifest = {
      {"tool_version", kToolVersion},
      {"command", command},
      {"config_hash", hex64(cfg.hash())},
      {"config", cfg.to_text()},
      {"seeds", seeds},
      {"outputs", outputs},
  };
  write_json(manifest, dir / "manifest.json");
}

json finite_or_null(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

// ---------------------------------------------------------------- simulate

int cmd_simulate(const CommonOptions& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  cfg.validate_for_simulation();
  const InteractionFunction fn = cfg.interaction();
  const fs::path dir = artifact_dir(cfg, "simulate");

  LatticeSpec spec;
  spec.n = cfg.n;
  spec.R = cfg.sim.R;
  spec.seed = derive_seed(cfg.sim.seed, 0, 0);
  spec.growth = cfg.growth;
  const std::uint64_t perturb_seed = derive_seed(cfg.sim.seed, 1, 0);
  const SwarmConfig lattice = generate_triangular(spec, cfg.sim.R_a);
  const SwarmConfig initial = perturb(lattice, cfg.delta, perturb_seed);
  const json seeds = {{"seed", cfg.sim.seed}, {"lattice", spec.seed}, {"perturb", perturb_seed}};

  // Every step is kept for the diagnostics; the trajectory file is strided.
  SimulationParams every_step = cfg.sim;
  every_step.record_every = 1;
  Trajectory traj;
  try {
    traj = simulate(initial, fn, every_step);
  } catch (const IntegrationDiverged& e) {
    const fs::path snapshot = dir / "diverged_snapshot.csv";
    write_config_csv(e.snapshot, snapshot);
    write_manifest(dir, "simulate", cfg, seeds, {"diverged_snapshot.csv"});
    std::cerr << "error: " << e.what() << "; last finite state written to " << snapshot.string()
              << '\n';
    return kNumericalFailure;
  }

  Trajectory strided;
  strided.params = cfg.sim;
  for (std::size_t k = 0; k < traj.states.size(); k += cfg.sim.record_every) {
    strided.times.push_back(traj.times[k]);
    strided.states.push_back(traj.states[k]);
  }
  write_trajectory_csv(strided, dir / "trajectory.csv");

  const DissipationReport dissipation = dissipation_check(traj, fn, every_step, cfg.dissipation_tol);
  write_diagnostics_csv(dissipation, dir / "diagnostics.csv");

  const LinkSet terminal_links = compute_links(traj.terminal, cfg.sim.R_a);
  const bool rigid = is_infinitesimally_rigid(traj.terminal, terminal_links, cfg.rank_tol);
  const double e_initial = link_error(initial, cfg.sim.R, cfg.sim.R_a);
  const double e_final = terminal_links.empty()
                             ? std::numeric_limits<double>::infinity()
                             : link_error(terminal_links, cfg.sim.R);
  const double drift = center_drift(traj);

  json v_series = json::array();
  for (std::size_t k = 0; k < dissipation.samples.size(); k += cfg.sim.record_every) {
    v_series.push_back({dissipation.samples[k].t, dissipation.samples[k].V});
  }
  const json summary = {
      {"n", cfg.n},
      {"delta", cfg.delta},
      {"profile", fn.name()},
      {"e_initial", finite_or_null(e_initial)},
      {"e_final", finite_or_null(e_final)},
      {"rigid", rigid},
      {"converged", rigid && e_final <= cfg.convergence_tol},
      {"center_drift", drift},
      {"coincident_pairs", traj.coincident_pairs},
      {"dissipation",
       {{"tol_v", dissipation.tol_v},
        {"checked_steps", dissipation.checked_steps},
        {"agreeing_steps", dissipation.agreeing_steps},
        {"agreement_fraction", dissipation.agreement_fraction()},
        {"link_change_steps", dissipation.link_change_steps},
        {"increasing_steps", dissipation.increasing_steps},
        {"worst_relative_gap", dissipation.worst_relative_gap}}},
      {"V", v_series},
  };
  write_json(summary, dir / "summary.json");
  write_config_csv(initial, dir / "initial.csv");
  write_config_csv(traj.terminal, dir / "terminal.csv");
  write_manifest(dir, "simulate", cfg, seeds,
                 {"trajectory.csv", "diagnostics.csv", "summary.json", "initial.csv",
                  "terminal.csv"});

  std::cout << "simulate: n=" << cfg.n << " delta=" << cfg.delta << " seed=" << cfg.sim.seed
            << '\n'
            << "  e(0)         " << format_double(e_initial) << '\n'
            << "  e(T)         " << format_double(e_final) << '\n'
            << "  rigid        " << (rigid ? "yes" : "no") << '\n'
            << "  center drift " << format_double(drift) << '\n'
            << "  artifacts    " << dir.string() << '\n';
  return kOk;
}

// ------------------------------------------------------------------- sweep

TrialOptions trial_options(const ExperimentConfig& cfg) {
  TrialOptions options;
  options.growth = cfg.growth;
  options.convergence_tol = cfg.convergence_tol;
  options.rank_tol = cfg.rank_tol;
  return options;
}

int cmd_sweep(const CommonOptions& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  cfg.validate_for_simulation();
  const InteractionFunction fn = cfg.interaction();
  const fs::path dir = artifact_dir(cfg, "sweep");

  SweepSpec spec;
  spec.delta_values = cfg.deltas;
  spec.trials_per_delta = cfg.trials;
  spec.n = cfg.n;
  spec.sim = cfg.sim;
  spec.lattice_seed_base = cfg.lattice_seed;
  spec.perturb_seed_base = cfg.perturb_seed;
  spec.options = trial_options(cfg);

  const SweepResult result = delta_sweep(spec, fn, opts.jobs);
  write_sweep_summary_csv(result, dir / "sweep_summary.csv");
  write_trials_csv(result, dir / "trials.csv");
  write_manifest(dir, "sweep", cfg,
                 {{"lattice_seed_base", cfg.lattice_seed}, {"perturb_seed_base", cfg.perturb_seed}},
                 {"sweep_summary.csv", "trials.csv"});

  std::cout << "delta      rho    converged  e_mean\n";
  for (const auto& s : result.per_delta) {
    std::printf("%-10.4g %-6.3g %-10.3g %.3e\n", s.delta, s.rho, s.converged_fraction, s.e_mean);
  }
  std::cout << "artifacts " << dir.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- converge

int cmd_converge(const CommonOptions& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  cfg.validate_for_simulation();
  const InteractionFunction fn = cfg.interaction();
  const fs::path dir = artifact_dir(cfg, "converge");

  const ConvergenceStudy study = convergence_study(cfg.n, cfg.delta, cfg.trials, cfg.sim, fn,
                                                   cfg.lattice_seed, cfg.perturb_seed,
                                                   trial_options(cfg), opts.jobs);
  write_convergence_csv(study, dir);
  std::vector<std::string> outputs = {"envelope.csv"};
  for (const auto& trial : study.trials) {
    outputs.push_back("series_" + std::to_string(trial.trial_index) + ".csv");
  }
  write_manifest(dir, "converge", cfg,
                 {{"lattice_seed_base", cfg.lattice_seed}, {"perturb_seed_base", cfg.perturb_seed}},
                 outputs);

  std::size_t converged = 0;
  for (const auto& trial : study.trials) converged += trial.converged ? 1 : 0;
  std::cout << "converge: delta=" << cfg.delta << " trials=" << cfg.trials
            << " converged=" << converged << '\n'
            << "  e_max(0) " << format_double(study.e_max.front()) << '\n'
            << "  e_max(T) " << format_double(study.e_max.back()) << '\n'
            << "  artifacts " << dir.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const CommonOptions& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  cfg.validate_for_simulation();
  const InteractionFunction fn = cfg.interaction();
  const fs::path dir = artifact_dir(cfg, "spectrum");

  struct Row {
    std::size_t n;
    std::uint64_t seed;
    SpectrumReport report;
    double max_angle = 0.0;
    double max_abs_j2 = 0.0;
  };
  std::vector<Row> rows;
  for (const auto n : cfg.n_values) {
    for (const auto seed : cfg.seeds) rows.push_back({n, seed, {}});
  }

  parallel_for(rows.size(), opts.jobs, [&](std::size_t k) {
    Row& row = rows[k];
    LatticeSpec spec;
    spec.n = row.n;
    spec.R = cfg.sim.R;
    spec.seed = row.seed;
    spec.growth = cfg.growth;
    const SwarmConfig lattice = generate_triangular(spec, cfg.sim.R_a);
    const JacobianParts parts = jacobian(lattice, fn, cfg.sim.R_a);
    const Eigen::MatrixXd M = rigidity_matrix(lattice, compute_links(lattice, cfg.sim.R_a));
    try {
      row.report = spectral_analysis(parts.total(), M, cfg.zero_tol);
    } catch (const NumericalError& e) {
      const fs::path dump = dir / ("jacobian_n" + std::to_string(row.n) + "_seed" +
                                   std::to_string(row.seed) + ".txt");
      std::ofstream out = open_output(dump);
      out << std::setprecision(17) << e.offending << '\n';
      close_output(out, dump);
      throw NumericalExit(std::string(e.what()) + " for n = " + std::to_string(row.n) +
                          ", seed " + std::to_string(row.seed) + "; matrix written to " +
                          dump.string());
    }
    row.max_abs_j2 = parts.second.cwiseAbs().maxCoeff();
    const auto angles = principal_angles(row.report.zero_modes, rigid_motion_basis(lattice));
    row.max_angle = angles.empty() ? 0.0 : angles.back();
    write_json(spectrum_to_json(row.report),
               dir / ("spectrum_n" + std::to_string(row.n) + "_seed" + std::to_string(row.seed) +
                      ".json"));
  });

  const fs::path csv = dir / "spectrum_summary.csv";
  std::ofstream out = open_output(csv);
  out << "n,seed,zero_count,negative_count,kernel_aligned,max_kernel_residual,"
         "max_real_nonzero_eig,max_principal_angle,max_abs_J2\n";
  bool all_split = true;
  std::vector<std::string> outputs = {"spectrum_summary.csv"};
  for (const Row& row : rows) {
    const SpectrumReport& r = row.report;
    out << row.n << ',' << row.seed << ',' << r.zero_count << ',' << r.negative_count << ','
        << (r.kernel_aligned ? 1 : 0) << ',' << format_double(r.max_kernel_residual) << ','
        << format_double(r.max_real_nonzero_eig) << ',' << format_double(row.max_angle) << ','
        << format_double(row.max_abs_j2) << '\n';
    const bool split = r.zero_count == 3 && r.negative_count == 2 * row.n - 3 && r.kernel_aligned;
    all_split = all_split && split;
    std::printf("n=%-4zu seed=%-6llu zero=%zu negative=%zu aligned=%s %s\n", row.n,
                static_cast<unsigned long long>(row.seed), r.zero_count, r.negative_count,
                r.kernel_aligned ? "yes" : "no", split ? "ok" : "UNEXPECTED");
    outputs.push_back("spectrum_n" + std::to_string(row.n) + "_seed" + std::to_string(row.seed) +
                      ".json");
  }
  close_output(out, csv);
  write_manifest(dir, "spectrum", cfg, {{"lattice_seeds", cfg.seeds}}, outputs);
  return all_split ? kOk : kCriterionFailure;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const CommonOptions& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  cfg.validate();
  const InteractionFunction fn = cfg.interaction();
  const Assumption1Report r = validate_assumption1(fn, cfg.grid_step);
  const fs::path dir = artifact_dir(cfg, "validate");

  auto verdict = [](bool ok) { return ok ? "pass" : "FAIL"; };
  std::cout << "interaction " << fn.name() << ", grid step " << cfg.grid_step << ", " << r.samples
            << " samples on (0, 2 R_a]\n"
            << "  a1 root at R        " << verdict(r.root_at_R) << "  f(R) = "
            << format_double(r.force_at_R) << '\n'
            << "  a2 sign pattern     " << verdict(r.sign_pattern) << "  violations "
            << r.sign_violations;
  if (r.first_sign_violation) std::cout << " (first at z = " << *r.first_sign_violation << ")";
  std::cout << '\n'
            << "  a3 continuity       " << verdict(r.continuous) << "  largest localized jump "
            << format_double(r.max_localized_jump);
  if (r.discontinuity_at) std::cout << " near z = " << *r.discontinuity_at;
  std::cout << '\n'
            << "  a4 vanishing        " << to_string(r.vanishing) << "  max |f| beyond R_a = "
            << format_double(r.far_field_max) << " at z = " << r.far_field_argmax
            << " (informational)\n";

  const json report = {
      {"profile", fn.name()},
      {"grid_step", r.grid_step},
      {"samples", r.samples},
      {"a1", {{"pass", r.root_at_R}, {"force_at_R", r.force_at_R}}},
      {"a2",
       {{"pass", r.sign_pattern},
        {"violations", r.sign_violations},
        {"first_violation", r.first_sign_violation ? json(*r.first_sign_violation) : json()}}},
      {"a3",
       {{"pass", r.continuous},
        {"max_localized_jump", r.max_localized_jump},
        {"discontinuity_at", r.discontinuity_at ? json(*r.discontinuity_at) : json()}}},
      {"a4",
       {{"status", to_string(r.vanishing)},
        {"far_field_max", r.far_field_max},
        {"far_field_argmax", r.far_field_argmax},
        {"near_field_max", r.near_field_max}}},
  };
  write_json(report, dir / "report.json");
  write_manifest(dir, "validate", cfg, json::object(), {"report.json"});
  return r.required_pass() ? kOk : kCriterionFailure;
}

// ---------------------------------------------------------------- rigidity

int cmd_rigidity(const CommonOptions& opts, const std::string& csv_path) {
  const ExperimentConfig cfg = resolve_config(opts);
  cfg.validate();
  SwarmConfig config;
  try {
    config = read_config_csv(csv_path);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  if (config.size() < 2) throw ConfigError("rigidity needs at least two agents");

  const LinkSet links = compute_links(config, cfg.sim.R_a);
  const RigidityReport rigidity = rigidity_report(config, links, cfg.rank_tol);
  const TriangularReport tri =
      is_triangular(config, cfg.sim.R, cfg.sim.R_a, kDefaultLengthTol * cfg.sim.R, cfg.rank_tol);
  std::cout << "agents        " << config.size() << '\n'
            << "links         " << rigidity.link_count << '\n'
            << "rank(M)       " << rigidity.rank << " (2n-3 = " << rigidity.expected_rank << ")\n"
            << "rigid         " << (rigidity.rigid ? "yes" : "no") << '\n'
            << "link error    " << (links.empty() ? std::string("n/a")
                                                  : format_double(tri.max_length_deviation))
            << '\n'
            << "triangular    " << (tri.triangular ? "yes" : "no") << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar swarm simulator: lattice dynamics, rigidity, spectra and sweeps"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CommonOptions opts;
  std::string rigidity_csv;

  auto* simulate = app.add_subcommand("simulate", "Run one perturbed-lattice trial");
  add_common(simulate, opts);
  add_override(simulate, opts, "--delta", "experiment.delta", "Perturbation radius");
  add_override(simulate, opts, "--seed", "simulation.seed", "Trial seed");
  add_override(simulate, opts, "--n", "experiment.n", "Number of agents");
  add_override(simulate, opts, "--record-every", "simulation.record_every",
               "Trajectory stride in steps");

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over the perturbation radius");
  add_common(sweep, opts);
  sweep->add_option("--jobs", opts.jobs, "Worker threads (0 = all cores)");
  add_override(sweep, opts, "--trials", "experiment.trials", "Trials per delta");
  add_override(sweep, opts, "--n", "experiment.n", "Number of agents");
  add_override(sweep, opts, "--deltas", "experiment.deltas", "Comma-separated delta grid");
  add_override(sweep, opts, "--lattice-seed", "experiment.lattice_seed", "Lattice seed base");
  add_override(sweep, opts, "--perturb-seed", "experiment.perturb_seed", "Perturbation seed base");

  auto* converge = app.add_subcommand("converge", "Error time series over repeated trials");
  add_common(converge, opts);
  converge->add_option("--jobs", opts.jobs, "Worker threads (0 = all cores)");
  add_override(converge, opts, "--delta", "experiment.delta", "Perturbation radius");
  add_override(converge, opts, "--trials", "experiment.trials", "Number of trials");
  add_override(converge, opts, "--n", "experiment.n", "Number of agents");
  add_override(converge, opts, "--lattice-seed", "experiment.lattice_seed", "Lattice seed base");
  add_override(converge, opts, "--perturb-seed", "experiment.perturb_seed",
               "Perturbation seed base");

  auto* spectrum = app.add_subcommand("spectrum", "Jacobian spectra at generated lattices");
  add_common(spectrum, opts);
  spectrum->add_option("--jobs", opts.jobs, "Worker threads (0 = all cores)");
  add_override(spectrum, opts, "--n-values", "experiment.n_values", "Comma-separated agent counts");
  add_override(spectrum, opts, "--seeds", "experiment.seeds", "Comma-separated lattice seeds");

  auto* validate = app.add_subcommand("validate", "Check the interaction function conditions");
  add_common(validate, opts);
  add_override(validate, opts, "--a", "interaction.a", "Repulsion coefficient");
  add_override(validate, opts, "--b", "interaction.b", "Attraction coefficient");
  add_override(validate, opts, "--c", "interaction.c", "Exponent");

  auto* rigidity = app.add_subcommand("rigidity", "Rigidity report for a configuration CSV");
  add_common(rigidity, opts);
  rigidity->add_option("file", rigidity_csv, "CSV with header agent,x,y")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(opts);
    if (*sweep) return cmd_sweep(opts);
    if (*converge) return cmd_converge(opts);
    if (*spectrum) return cmd_spectrum(opts);
    if (*validate) return cmd_validate(opts);
    if (*rigidity) return cmd_rigidity(opts, rigidity_csv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalExit& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kConfigError;
}
