#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "fixtures.hpp"
#include "swarm/errors.hpp"
#include "swarm/experiment_config.hpp"
#include "swarm/io.hpp"

using namespace swarm;

namespace {

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("swarm_io_" + name);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults describe the reference setup") {
  const ExperimentConfig c;
  CHECK(c.sim.R == 1.0);
  CHECK(c.sim.R_a == doctest::Approx((1.0 + std::sqrt(3.0)) / 2.0).epsilon(1e-15));
  CHECK(c.sim.R_s == 3.0);
  CHECK(c.sim.dt == 0.01);
  CHECK(c.sim.horizon == 20.0);
  CHECK(c.lj.a == 0.5);
  CHECK(c.lj.b == 0.5);
  CHECK(c.lj.c == 12);
  CHECK(c.n == 100);
  CHECK_NOTHROW(c.validate_for_simulation());
}

TEST_CASE("parsing") {
  const ExperimentConfig c = parse_config(
      "# comment line\n"
      "\n"
      "geometry.R_s = 2.5   # trailing comment\n"
      "experiment.deltas = 0.1, 0.2,0.3\n"
      "experiment.n_values = 10, 20\n"
      "experiment.growth = uniform_rigid\n"
      "interaction.profile = truncated_lennard_jones\n"
      "simulation.seed = 18446744073709551615\n");
  CHECK(c.sim.R_s == 2.5);
  CHECK(c.deltas == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(c.n_values == std::vector<std::size_t>{10, 20});
  CHECK(c.growth == GrowthPolicy::uniform_rigid);
  CHECK(c.profile == "truncated_lennard_jones");
  CHECK(c.sim.seed == 18446744073709551615ULL);
  CHECK(c.interaction().force(2.0) == 0.0);
}

TEST_CASE("parse errors carry the line number") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line;
    }
    return 0;
  };
  CHECK(line_of("geometry.R = 1\nbogus.key = 3\n") == 2);
  CHECK(line_of("\n\ngeometry.R = abc\n") == 3);
  CHECK(line_of("geometry.R = 1.5x\n") == 1);
  CHECK(line_of("experiment.n = -4\n") == 1);
  CHECK(line_of("no equals sign\n") == 1);
  CHECK(line_of("interaction.profile = morse\n") == 1);
  CHECK(line_of("experiment.growth = random\n") == 1);
  CHECK(line_of("geometry.R =\n") == 1);
  CHECK(line_of("geometry.R = nan\n") == 1);
  CHECK_THROWS_AS(load_config(scratch("missing.conf")), ConfigError);
}

TEST_CASE("canonical text round-trips and hashes stably") {
  ExperimentConfig c;
  c.set("geometry.R_s", "2.75");
  c.set("experiment.deltas", "0, 0.1, 0.30000000000000004");
  c.set("output.dir", "results");
  const ExperimentConfig back = parse_config(c.to_text());
  CHECK(back.to_text() == c.to_text());
  CHECK(back.hash() == c.hash());
  CHECK(back.deltas[2] == 0.30000000000000004);
  ExperimentConfig other = c;
  other.set("experiment.trials", "21");
  CHECK(other.hash() != c.hash());

  const auto path = scratch("roundtrip.conf");
  write_text(path, c.to_text());
  CHECK(load_config(path).hash() == c.hash());
  std::filesystem::remove(path);
}

TEST_CASE("cross-field validation") {
  auto rejects = [](const std::string& text) {
    CHECK_THROWS_AS(parse_config(text).validate(), ConfigError);
  };
  rejects("geometry.R_a = 1.8\n");
  rejects("geometry.R_a = 0.9\n");
  rejects("geometry.R_s = 1.2\n");
  rejects("simulation.dt = 0\n");
  rejects("experiment.n = 2\n");
  rejects("experiment.n_values = 25, 2\n");
  rejects("experiment.deltas = 0.2, 0.1\n");
  rejects("experiment.trials = 0\n");
  rejects("tolerances.zero = 0\n");
  try {
    parse_config("geometry.R_a = 1.8\n").validate();
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("R_a") != std::string::npos);
  }
  // LJ bounds are only enforced for simulation, so the checker can still run.
  const ExperimentConfig neg = parse_config("interaction.a = -0.5\n");
  CHECK_NOTHROW(neg.validate());
  CHECK_THROWS_AS(neg.validate_for_simulation(), ConfigError);
}

}  // TEST_SUITE

TEST_SUITE("io") {

TEST_CASE("doubles round-trip through text") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e308, 0.30000000000000004,
                   std::numeric_limits<double>::denorm_min()}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("configuration CSV round-trip") {
  const SwarmConfig c = perturb(fixture::lattice(30, 2), 0.2, 7);
  const auto path = scratch("config.csv");
  write_config_csv(c, path);
  CHECK(read_config_csv(path) == c);

  write_text(path, "agent,x,y\n0,1,2\n2,3,4\n");
  CHECK_THROWS_AS(read_config_csv(path), InvalidInput);
  write_text(path, "agent,x,y\n0,1\n");
  CHECK_THROWS_AS(read_config_csv(path), InvalidInput);
  write_text(path, "id,x,y\n");
  CHECK_THROWS_AS(read_config_csv(path), InvalidInput);
  std::filesystem::remove(path);
  CHECK_THROWS(read_config_csv(path));
}

TEST_CASE("configuration JSON round-trip") {
  const SwarmConfig c = perturb(fixture::lattice(10, 1), 0.1, 3);
  const nlohmann::json j = config_to_json(c);
  CHECK(j["n"] == 10);
  CHECK(config_from_json(j) == c);
  CHECK(config_from_json(nlohmann::json::parse(j.dump())) == c);
}

TEST_CASE("trajectory and diagnostics writers") {
  const auto fn = fixture::default_lj();
  SimulationParams p;
  p.horizon = 0.05;
  const Trajectory t = simulate(fixture::triangle(), fn, p);
  const auto traj = scratch("traj.csv");
  write_trajectory_csv(t, traj);
  std::ifstream in(traj);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,agent,x,y");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 6 * 3);
  std::filesystem::remove(traj);

  const auto diag = scratch("diag.csv");
  write_diagnostics_csv(dissipation_check(t, fn, p), diag);
  std::ifstream din(diag);
  std::getline(din, header);
  CHECK(header == "t,V,Vdot_analytic,Vdot_numeric,links,links_changed");
  std::filesystem::remove(diag);
}

}  // TEST_SUITE
