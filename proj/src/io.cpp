#include "swarm/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>

#include "swarm/errors.hpp"

namespace swarm {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void close_output(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_config_csv(const SwarmConfig& config, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "agent,x,y\n";
  for (std::size_t i = 0; i < config.size(); ++i) {
    out << i << ',' << format_double(config[i].x()) << ',' << format_double(config[i].y()) << '\n';
  }
  close_output(out, path);
}

namespace {

double parse_number(const std::string& field, std::size_t line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size()) {
    throw InvalidInput("line " + std::to_string(line) + ": not a number: '" + field + "'");
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

SwarmConfig read_config_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path.string());
  std::string text;
  std::size_t line_no = 0;
  std::vector<Vec2> positions;
  bool header_seen = false;
  while (std::getline(in, text)) {
    ++line_no;
    text = trim(text);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != "agent,x,y") {
        throw InvalidInput(path.string() + ": expected header 'agent,x,y', got '" + text + "'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream row(text);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 3) {
      throw InvalidInput("line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const double agent = parse_number(fields[0], line_no);
    if (agent != static_cast<double>(positions.size())) {
      throw InvalidInput("line " + std::to_string(line_no) + ": agents must be numbered 0..n-1 in order");
    }
    positions.emplace_back(parse_number(fields[1], line_no), parse_number(fields[2], line_no));
  }
  if (!header_seen) throw InvalidInput(path.string() + ": empty configuration file");
  SwarmConfig config(std::move(positions));
  config.require_finite();
  return config;
}

nlohmann::json config_to_json(const SwarmConfig& config) {
  nlohmann::json positions = nlohmann::json::array();
  for (const Vec2& p : config.positions()) positions.push_back({p.x(), p.y()});
  return {{"n", config.size()}, {"positions", positions}};
}

SwarmConfig config_from_json(const nlohmann::json& json) {
  try {
    std::vector<Vec2> positions;
    for (const auto& p : json.at("positions")) {
      if (p.size() != 2) throw InvalidInput("each position needs two coordinates");
      positions.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    if (json.contains("n") && json.at("n").get<std::size_t>() != positions.size()) {
      throw InvalidInput("'n' does not match the number of positions");
    }
    SwarmConfig config(std::move(positions));
    config.require_finite();
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed configuration JSON: ") + e.what());
  }
}

void write_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "t,agent,x,y\n";
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    const std::string t = format_double(trajectory.times[k]);
    const SwarmConfig& state = trajectory.states[k];
    for (std::size_t i = 0; i < state.size(); ++i) {
      out << t << ',' << i << ',' << format_double(state[i].x()) << ','
          << format_double(state[i].y()) << '\n';
    }
  }
  close_output(out, path);
}

void write_diagnostics_csv(const DissipationReport& report, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "t,V,Vdot_analytic,Vdot_numeric,links,links_changed\n";
  for (const auto& s : report.samples) {
    out << format_double(s.t) << ',' << format_double(s.V) << ','
        << format_double(s.Vdot_analytic) << ',' << format_double(s.Vdot_numeric) << ','
        << s.link_count << ',' << (s.links_changed ? 1 : 0) << '\n';
  }
  close_output(out, path);
}

nlohmann::json spectrum_to_json(const SpectrumReport& report) {
  nlohmann::json eigenvalues = nlohmann::json::array();
  for (const auto& lambda : report.eigenvalues) {
    eigenvalues.push_back({lambda.real(), lambda.imag()});
  }
  return {
      {"eigenvalues", eigenvalues},
      {"spectral_radius", report.spectral_radius},
      {"zero_threshold", report.zero_threshold},
      {"zero_count", report.zero_count},
      {"negative_count", report.negative_count},
      {"unclassified_count", report.unclassified_count},
      {"kernel_aligned", report.kernel_aligned},
      {"max_kernel_residual", report.max_kernel_residual},
      {"min_nonkernel_residual", report.min_nonkernel_residual},
      {"max_real_nonzero_eig", report.max_real_nonzero_eig},
  };
}

void write_json(const nlohmann::json& json, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << json.dump(2) << '\n';
  close_output(out, path);
}

}  // namespace swarm
