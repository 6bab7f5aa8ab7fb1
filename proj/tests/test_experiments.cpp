#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "swarm/errors.hpp"
#include "swarm/experiments.hpp"
#include "swarm/rng.hpp"

using namespace swarm;

namespace {

SimulationParams quick(double horizon = 5.0) {
  SimulationParams p;
  p.horizon = horizon;
  return p;
}

std::string first_line(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("swarm_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("seed derivation is stable and distinct") {
  const TrialSeeds a = trial_seeds(1, 2, 3, 4);
  const TrialSeeds b = trial_seeds(1, 2, 3, 4);
  CHECK(a.lattice == b.lattice);
  CHECK(a.perturb == b.perturb);
  CHECK(a.lattice == derive_seed(1, 3, 4));
  CHECK(a.perturb == derive_seed(2, 3, 4));
  CHECK(trial_seeds(1, 2, 3, 5).lattice != a.lattice);
  CHECK(trial_seeds(1, 2, 4, 4).lattice != a.lattice);
}

TEST_CASE("unperturbed trial stays on the lattice") {
  const auto fn = fixture::truncated_lj();
  const TrialRecord r = run_trial(25, 0.0, trial_seeds(1, 2, 0, 0), quick(), fn);
  CHECK(r.e_initial <= 1e-12);
  CHECK(r.e_final <= 1e-12);
  CHECK(r.rigid);
  CHECK(r.converged);
  CHECK_FALSE(r.diverged);
}

TEST_CASE("moderate perturbation converges back to a triangular configuration") {
  const auto fn = fixture::default_lj();
  TrialOptions opt;
  opt.track_error = true;
  opt.track_rigidity = true;
  const TrialRecord r = run_trial(25, 0.2, trial_seeds(1, 2, 0, 0), SimulationParams{}, fn, opt);
  CHECK(r.e_initial > 0.0);
  CHECK(r.e_initial <= 0.4);
  CHECK(r.converged);
  CHECK(r.rigid_throughout);
  CHECK(r.e_final < r.e_initial);
  REQUIRE(r.times.size() == r.e_series.size());
  CHECK(r.times.size() == SimulationParams{}.step_count() + 1);
  CHECK(r.e_series.front() == r.e_initial);
  CHECK(r.e_series.back() == r.e_final);
}

TEST_CASE("sweep is reproducible and independent of the thread count") {
  const auto fn = fixture::default_lj();
  SweepSpec spec;
  spec.delta_values = {0.0, 0.2, 0.5};
  spec.trials_per_delta = 3;
  spec.n = 12;
  spec.sim = quick(3.0);

  const SweepResult a = delta_sweep(spec, fn, 1);
  const SweepResult b = delta_sweep(spec, fn, 2);
  REQUIRE(a.trials.size() == 9);
  REQUIRE(b.trials.size() == 9);
  for (std::size_t k = 0; k < a.trials.size(); ++k) {
    CHECK(a.trials[k].delta_index == k / 3);
    CHECK(a.trials[k].trial_index == k % 3);
    CHECK(a.trials[k].e_final == b.trials[k].e_final);
    CHECK(a.trials[k].rigid == b.trials[k].rigid);
  }
  REQUIRE(a.per_delta.size() == 3);
  for (const auto& s : a.per_delta) {
    CHECK(s.trials == 3);
    CHECK(s.rho >= 0.0);
    CHECK(s.rho <= 1.0);
    CHECK(s.converged_fraction <= s.rho);
    CHECK(s.e_min <= s.e_mean);
    CHECK(s.e_mean <= s.e_max);
  }
  CHECK(a.per_delta[0].rho == 1.0);
  CHECK(a.per_delta[0].converged_fraction == 1.0);

  // Converged trials end in a configuration that passes the triangular test.
  for (const auto& t : a.trials) {
    if (t.converged) CHECK(t.e_final <= kConvergenceTol);
    if (t.converged) CHECK(t.rigid);
  }

  // A trial's seeds do not depend on how many trials share its delta.
  SweepSpec more = spec;
  more.trials_per_delta = 4;
  const SweepResult c = delta_sweep(more, fn, 1);
  for (std::size_t d = 0; d < 3; ++d) {
    for (std::size_t t = 0; t < 3; ++t) {
      CHECK(c.trials[d * 4 + t].seeds.lattice == a.trials[d * 3 + t].seeds.lattice);
      CHECK(c.trials[d * 4 + t].e_final == a.trials[d * 3 + t].e_final);
    }
  }
}

TEST_CASE("sweep spec validation") {
  SweepSpec spec;
  spec.delta_values = {0.1, 0.2};
  CHECK_NOTHROW(spec.validate());
  spec.delta_values = {0.2, 0.1};
  CHECK_THROWS_AS(spec.validate(), InvalidInput);
  spec.delta_values = {0.1, 0.1};
  CHECK_THROWS_AS(spec.validate(), InvalidInput);
  spec.delta_values = {-0.1};
  CHECK_THROWS_AS(spec.validate(), InvalidInput);
  spec.delta_values = {};
  CHECK_THROWS_AS(spec.validate(), InvalidInput);
  spec.delta_values = {0.1};
  spec.trials_per_delta = 0;
  CHECK_THROWS_AS(spec.validate(), InvalidInput);
  spec.trials_per_delta = 1;
  spec.n = 2;
  CHECK_THROWS_AS(spec.validate(), InvalidInput);
}

TEST_CASE("convergence study envelopes") {
  const auto fn = fixture::default_lj();
  const double delta = 0.2;
  const ConvergenceStudy s = convergence_study(12, delta, 4, quick(2.0), fn, 1, 2, {}, 2);
  REQUIRE(s.trials.size() == 4);
  REQUIRE(s.times.size() == quick(2.0).step_count() + 1);
  REQUIRE(s.e_mean.size() == s.times.size());
  for (const auto& t : s.trials) CHECK(t.e_series.front() <= 2.0 * delta);
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    CHECK(s.e_min[k] <= s.e_mean[k] * (1.0 + 1e-12));
    CHECK(s.e_mean[k] <= s.e_max[k] * (1.0 + 1e-12));
  }
  CHECK(s.e_max.front() <= 2.0 * delta);
  CHECK_THROWS_AS(convergence_study(12, delta, 0, quick(), fn, 1, 2), InvalidInput);
}

TEST_CASE("parallel_for visits every index once and propagates errors") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, 3, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);

  CHECK_THROWS_WITH_AS(parallel_for(50, 2,
                                    [](std::size_t i) {
                                      if (i == 7 || i == 30) {
                                        throw std::runtime_error("boom " + std::to_string(i));
                                      }
                                    }),
                       "boom 7", std::runtime_error);
}

TEST_CASE("artifact writers") {
  const auto fn = fixture::default_lj();
  SweepSpec spec;
  spec.delta_values = {0.0, 0.1};
  spec.trials_per_delta = 2;
  spec.n = 6;
  spec.sim = quick(0.5);
  const SweepResult r = delta_sweep(spec, fn, 1);
  const auto dir = scratch_dir("writers");
  write_sweep_summary_csv(r, dir / "sweep_summary.csv");
  write_trials_csv(r, dir / "trials.csv");
  CHECK(first_line(dir / "sweep_summary.csv") ==
        "delta,rho,e_mean,e_min,e_max,trials,converged_fraction");
  CHECK(first_line(dir / "trials.csv") ==
        "delta,trial,lattice_seed,perturb_seed,e_final,rigid,converged,e_initial,diverged,"
        "coincident_pairs");

  const ConvergenceStudy s = convergence_study(6, 0.1, 2, quick(0.5), fn, 1, 2, {}, 1);
  write_convergence_csv(s, dir / "conv");
  CHECK(first_line(dir / "conv" / "envelope.csv") == "t,e_mean,e_min,e_max");
  CHECK(first_line(dir / "conv" / "series_0.csv") == "t,e");
  CHECK(std::filesystem::exists(dir / "conv" / "series_1.csv"));
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
