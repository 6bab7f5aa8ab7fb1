#include "swarm/experiment_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "swarm/errors.hpp"
#include "swarm/io.hpp"

namespace swarm {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_double(const std::string& key, const std::string& value, std::size_t line) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a finite number, got '" + value + "'", line);
  }
  return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value, std::size_t line) {
  std::size_t used = 0;
  std::uint64_t out = 0;
  const bool negative = !value.empty() && value.front() == '-';
  try {
    out = std::stoull(value, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (negative || used == 0 || used != value.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'", line);
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value, std::size_t line) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(value, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'", line);
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(values[k]);
    } else {
      out += std::to_string(values[k]);
    }
  }
  return out;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value, std::size_t line) {
  auto dbl = [&] { return parse_double(key, value, line); };
  auto uns = [&] { return parse_unsigned(key, value, line); };

  using Setter = std::function<void()>;
  const std::map<std::string, Setter> setters = {
      {"interaction.profile",
       [&] {
         if (value != "lennard_jones" && value != "truncated_lennard_jones" &&
             value != "linear_spring") {
           throw ConfigError("interaction.profile: unknown profile '" + value +
                                 "' (expected lennard_jones, truncated_lennard_jones or "
                                 "linear_spring)",
                             line);
         }
         profile = value;
       }},
      {"interaction.a", [&] { lj.a = dbl(); }},
      {"interaction.b", [&] { lj.b = dbl(); }},
      {"interaction.c", [&] { lj.c = parse_int(key, value, line); }},
      {"interaction.saturation", [&] { lj.saturation = dbl(); }},
      {"interaction.stiffness", [&] { spring_stiffness = dbl(); }},
      {"geometry.R", [&] { sim.R = dbl(); }},
      {"geometry.R_a", [&] { sim.R_a = dbl(); }},
      {"geometry.R_s", [&] { sim.R_s = dbl(); }},
      {"simulation.dt", [&] { sim.dt = dbl(); }},
      {"simulation.horizon", [&] { sim.horizon = dbl(); }},
      {"simulation.record_every", [&] { sim.record_every = uns(); }},
      {"simulation.seed", [&] { sim.seed = uns(); }},
      {"experiment.n", [&] { n = uns(); }},
      {"experiment.delta", [&] { delta = dbl(); }},
      {"experiment.deltas",
       [&] {
         deltas.clear();
         for (const auto& item : split_list(value)) deltas.push_back(parse_double(key, item, line));
       }},
      {"experiment.trials", [&] { trials = uns(); }},
      {"experiment.lattice_seed", [&] { lattice_seed = uns(); }},
      {"experiment.perturb_seed", [&] { perturb_seed = uns(); }},
      {"experiment.n_values",
       [&] {
         n_values.clear();
         for (const auto& item : split_list(value)) {
           n_values.push_back(parse_unsigned(key, item, line));
         }
       }},
      {"experiment.seeds",
       [&] {
         seeds.clear();
         for (const auto& item : split_list(value)) seeds.push_back(parse_unsigned(key, item, line));
       }},
      {"experiment.growth",
       [&] {
         try {
           growth = growth_policy_from_string(value);
         } catch (const InvalidInput& e) {
           throw ConfigError(std::string("experiment.growth: ") + e.what(), line);
         }
       }},
      {"tolerances.rank", [&] { rank_tol = dbl(); }},
      {"tolerances.zero", [&] { zero_tol = dbl(); }},
      {"tolerances.convergence", [&] { convergence_tol = dbl(); }},
      {"tolerances.dissipation", [&] { dissipation_tol = dbl(); }},
      {"tolerances.grid_step", [&] { grid_step = dbl(); }},
      {"output.dir", [&] { output_dir = value; }},
  };

  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown key '" + key + "'", line);
  if (value.empty() && key != "experiment.deltas" && key != "experiment.n_values" &&
      key != "experiment.seeds") {
    throw ConfigError(key + ": missing value", line);
  }
  it->second();
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream out;
  out << "interaction.profile = " << profile << '\n'
      << "interaction.a = " << format_double(lj.a) << '\n'
      << "interaction.b = " << format_double(lj.b) << '\n'
      << "interaction.c = " << lj.c << '\n'
      << "interaction.saturation = " << format_double(lj.saturation) << '\n'
      << "interaction.stiffness = " << format_double(spring_stiffness) << '\n'
      << "geometry.R = " << format_double(sim.R) << '\n'
      << "geometry.R_a = " << format_double(sim.R_a) << '\n'
      << "geometry.R_s = " << format_double(sim.R_s) << '\n'
      << "simulation.dt = " << format_double(sim.dt) << '\n'
      << "simulation.horizon = " << format_double(sim.horizon) << '\n'
      << "simulation.record_every = " << sim.record_every << '\n'
      << "simulation.seed = " << sim.seed << '\n'
      << "experiment.n = " << n << '\n'
      << "experiment.delta = " << format_double(delta) << '\n'
      << "experiment.deltas = " << join(deltas) << '\n'
      << "experiment.trials = " << trials << '\n'
      << "experiment.lattice_seed = " << lattice_seed << '\n'
      << "experiment.perturb_seed = " << perturb_seed << '\n'
      << "experiment.n_values = " << join(n_values) << '\n'
      << "experiment.seeds = " << join(seeds) << '\n'
      << "experiment.growth = " << to_string(growth) << '\n'
      << "tolerances.rank = " << format_double(rank_tol) << '\n'
      << "tolerances.zero = " << format_double(zero_tol) << '\n'
      << "tolerances.convergence = " << format_double(convergence_tol) << '\n'
      << "tolerances.dissipation = " << format_double(dissipation_tol) << '\n'
      << "tolerances.grid_step = " << format_double(grid_step) << '\n'
      << "output.dir = " << output_dir << '\n';
  return out.str();
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : to_text()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void ExperimentConfig::validate() const {
  try {
    sim.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  if (n < 3) throw ConfigError("experiment.n must be at least 3 (smallest triangular configuration)");
  if (!(delta >= 0.0)) throw ConfigError("experiment.delta must be non-negative");
  if (trials == 0) throw ConfigError("experiment.trials must be at least 1");
  if (deltas.empty()) throw ConfigError("experiment.deltas is empty");
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (!(deltas[k] >= 0.0)) throw ConfigError("experiment.deltas must be non-negative");
    if (k > 0 && !(deltas[k] > deltas[k - 1])) {
      throw ConfigError("experiment.deltas must be strictly ascending");
    }
  }
  if (n_values.empty()) throw ConfigError("experiment.n_values is empty");
  for (const auto value : n_values) {
    if (value < 3) {
      throw ConfigError("experiment.n_values: n = " + std::to_string(value) +
                        " is below 3, the smallest triangular configuration");
    }
  }
  if (seeds.empty()) throw ConfigError("experiment.seeds is empty");
  if (lj.c < 1) throw ConfigError("interaction.c must be a positive integer");
  if (!(lj.saturation > 0.0)) throw ConfigError("interaction.saturation must be positive");
  for (const auto& [name, value] :
       {std::pair{"tolerances.rank", rank_tol}, std::pair{"tolerances.zero", zero_tol},
        std::pair{"tolerances.convergence", convergence_tol},
        std::pair{"tolerances.dissipation", dissipation_tol},
        std::pair{"tolerances.grid_step", grid_step}}) {
    if (!(value > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  }
}

void ExperimentConfig::validate_for_simulation() const {
  validate();
  if (profile != "linear_spring") {
    if (const auto problem = lj.violation()) throw ConfigError(*problem);
  }
}

InteractionFunction ExperimentConfig::interaction() const {
  if (profile == "truncated_lennard_jones") {
    return InteractionFunction::truncated_lennard_jones(lj, sim.R, sim.R_a);
  }
  if (profile == "linear_spring") {
    return InteractionFunction::linear_spring(sim.R, sim.R_a, spring_stiffness);
  }
  return InteractionFunction::lennard_jones(lj, sim.R, sim.R_a);
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    config.set(key, trim(line.substr(eq + 1)), line_no);
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace swarm
