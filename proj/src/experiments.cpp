#include "swarm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "swarm/errors.hpp"
#include "swarm/io.hpp"
#include "swarm/rng.hpp"
#include "swarm/swarm_graph.hpp"

namespace swarm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double link_error_or_inf(const SwarmConfig& config, double R, double R_a) {
  const LinkSet links = compute_links(config, R_a);
  return links.empty() ? kInf : link_error(links, R);
}

}  // namespace

TrialSeeds trial_seeds(std::uint64_t lattice_base, std::uint64_t perturb_base,
                       std::size_t delta_index, std::size_t trial_index) {
  return {derive_seed(lattice_base, delta_index, trial_index),
          derive_seed(perturb_base, delta_index, trial_index)};
}

TrialRecord run_trial(std::size_t n, double delta, const TrialSeeds& seeds,
                      const SimulationParams& sim, const InteractionFunction& fn,
                      const TrialOptions& options) {
  TrialRecord record;
  record.delta = delta;
  record.seeds = seeds;

  LatticeSpec spec;
  spec.n = n;
  spec.R = sim.R;
  spec.seed = seeds.lattice;
  spec.growth = options.growth;
  const SwarmConfig initial = perturb(generate_triangular(spec, sim.R_a), delta, seeds.perturb);
  record.e_initial = link_error_or_inf(initial, sim.R, sim.R_a);

  std::vector<Observer> observers;
  if (options.track_rigidity) {
    observers.emplace_back([&](const StepView& view) {
      if (!record.rigid_throughout) return;
      const LinkSet links = compute_links(view.state, sim.R_a);
      record.rigid_throughout = is_infinitesimally_rigid(view.state, links, options.rank_tol);
    });
  }
  if (options.track_error) {
    observers.emplace_back([&](const StepView& view) {
      record.times.push_back(view.time);
      record.e_series.push_back(link_error_or_inf(view.state, sim.R, sim.R_a));
    });
  }

  SimulateOptions sim_options;
  sim_options.keep_states = false;
  try {
    const Trajectory traj = simulate(initial, fn, sim, observers, sim_options);
    record.coincident_pairs = traj.coincident_pairs;
    const LinkSet links = compute_links(traj.terminal, sim.R_a);
    record.rigid = is_infinitesimally_rigid(traj.terminal, links, options.rank_tol);
    record.e_final = links.empty() ? kInf : link_error(links, sim.R);
    record.converged = record.rigid && record.e_final <= options.convergence_tol;
  } catch (const IntegrationDiverged&) {
    record.diverged = true;
    record.rigid = false;
    record.rigid_throughout = false;
    record.e_final = kInf;
    record.converged = false;
  }
  return record;
}

void SweepSpec::validate() const {
  if (delta_values.empty()) throw InvalidInput("delta grid is empty");
  for (std::size_t k = 0; k < delta_values.size(); ++k) {
    if (!(delta_values[k] >= 0.0) || !std::isfinite(delta_values[k])) {
      throw InvalidInput("delta values must be finite and non-negative");
    }
    if (k > 0 && !(delta_values[k] > delta_values[k - 1])) {
      throw InvalidInput("delta values must be strictly ascending");
    }
  }
  if (trials_per_delta == 0) throw InvalidInput("trials per delta must be at least 1");
  if (n < 3) throw InvalidInput("n must be at least 3");
  sim.validate();
}

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = count;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        // Keep the failure of the lowest index so reruns report the same one.
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();
  if (error) std::rethrow_exception(error);
}

SweepResult delta_sweep(const SweepSpec& spec, const InteractionFunction& fn, std::size_t jobs) {
  spec.validate();
  const std::size_t per = spec.trials_per_delta;
  SweepResult result;
  result.trials.resize(spec.delta_values.size() * per);

  parallel_for(result.trials.size(), jobs, [&](std::size_t task) {
    const std::size_t d = task / per;
    const std::size_t t = task % per;
    const TrialSeeds seeds =
        trial_seeds(spec.lattice_seed_base, spec.perturb_seed_base, d, t);
    TrialRecord record =
        run_trial(spec.n, spec.delta_values[d], seeds, spec.sim, fn, spec.options);
    record.delta_index = d;
    record.trial_index = t;
    result.trials[task] = std::move(record);
  });

  for (std::size_t d = 0; d < spec.delta_values.size(); ++d) {
    DeltaSummary summary;
    summary.delta = spec.delta_values[d];
    summary.trials = per;
    summary.e_min = kInf;
    summary.e_max = -kInf;
    double e_sum = 0.0;
    std::size_t rigid = 0;
    std::size_t converged = 0;
    for (std::size_t t = 0; t < per; ++t) {
      const TrialRecord& r = result.trials[d * per + t];
      rigid += r.rigid ? 1 : 0;
      converged += r.converged ? 1 : 0;
      e_sum += r.e_final;
      summary.e_min = std::min(summary.e_min, r.e_final);
      summary.e_max = std::max(summary.e_max, r.e_final);
    }
    summary.rho = static_cast<double>(rigid) / static_cast<double>(per);
    summary.converged_fraction = static_cast<double>(converged) / static_cast<double>(per);
    summary.e_mean = e_sum / static_cast<double>(per);
    result.per_delta.push_back(summary);
  }
  return result;
}

ConvergenceStudy convergence_study(std::size_t n, double delta, std::size_t trials,
                                   const SimulationParams& sim, const InteractionFunction& fn,
                                   std::uint64_t lattice_seed_base,
                                   std::uint64_t perturb_seed_base, const TrialOptions& options,
                                   std::size_t jobs) {
  if (trials == 0) throw InvalidInput("trials must be at least 1");
  if (n < 3) throw InvalidInput("n must be at least 3");
  sim.validate();

  TrialOptions tracked = options;
  tracked.track_error = true;

  ConvergenceStudy study;
  study.delta = delta;
  study.trials.resize(trials);
  parallel_for(trials, jobs, [&](std::size_t t) {
    const TrialSeeds seeds = trial_seeds(lattice_seed_base, perturb_seed_base, 0, t);
    TrialRecord record = run_trial(n, delta, seeds, sim, fn, tracked);
    record.trial_index = t;
    study.trials[t] = std::move(record);
  });

  // Envelope over the trials that reached each recorded time.
  for (const auto& trial : study.trials) {
    if (trial.times.size() > study.times.size()) study.times = trial.times;
  }
  for (std::size_t k = 0; k < study.times.size(); ++k) {
    double sum = 0.0;
    double lo = kInf;
    double hi = -kInf;
    std::size_t count = 0;
    for (const auto& trial : study.trials) {
      if (k >= trial.e_series.size()) continue;
      const double e = trial.e_series[k];
      sum += e;
      lo = std::min(lo, e);
      hi = std::max(hi, e);
      ++count;
    }
    study.e_mean.push_back(sum / static_cast<double>(count));
    study.e_min.push_back(lo);
    study.e_max.push_back(hi);
  }
  return study;
}

void write_sweep_summary_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "delta,rho,e_mean,e_min,e_max,trials,converged_fraction\n";
  for (const auto& s : result.per_delta) {
    out << format_double(s.delta) << ',' << format_double(s.rho) << ','
        << format_double(s.e_mean) << ',' << format_double(s.e_min) << ','
        << format_double(s.e_max) << ',' << s.trials << ',' << format_double(s.converged_fraction)
        << '\n';
  }
  close_output(out, path);
}

void write_trials_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "delta,trial,lattice_seed,perturb_seed,e_final,rigid,converged,e_initial,diverged,"
         "coincident_pairs\n";
  for (const auto& r : result.trials) {
    out << format_double(r.delta) << ',' << r.trial_index << ',' << r.seeds.lattice << ','
        << r.seeds.perturb << ',' << format_double(r.e_final) << ',' << (r.rigid ? 1 : 0) << ','
        << (r.converged ? 1 : 0) << ',' << format_double(r.e_initial) << ','
        << (r.diverged ? 1 : 0) << ',' << r.coincident_pairs << '\n';
  }
  close_output(out, path);
}

void write_convergence_csv(const ConvergenceStudy& study, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& trial : study.trials) {
    const auto path = dir / ("series_" + std::to_string(trial.trial_index) + ".csv");
    std::ofstream out = open_output(path);
    out << "t,e\n";
    for (std::size_t k = 0; k < trial.times.size(); ++k) {
      out << format_double(trial.times[k]) << ',' << format_double(trial.e_series[k]) << '\n';
    }
    close_output(out, path);
  }
  const auto path = dir / "envelope.csv";
  std::ofstream out = open_output(path);
  out << "t,e_mean,e_min,e_max\n";
  for (std::size_t k = 0; k < study.times.size(); ++k) {
    out << format_double(study.times[k]) << ',' << format_double(study.e_mean[k]) << ','
        << format_double(study.e_min[k]) << ',' << format_double(study.e_max[k]) << '\n';
  }
  close_output(out, path);
}

}  // namespace swarm
