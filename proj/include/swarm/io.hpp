#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "swarm/config.hpp"
#include "swarm/diagnostics.hpp"
#include "swarm/dynamics.hpp"
#include "swarm/linearization.hpp"

namespace swarm {

// Opens for writing; throws std::runtime_error naming the path on failure.
std::ofstream open_output(const std::filesystem::path& path);
// Flushes and closes; throws if any write failed.
void close_output(std::ofstream& out, const std::filesystem::path& path);

/// 17 significant digits, so values round-trip exactly.
std::string format_double(double value);

// Configuration CSV: header `agent,x,y`, one row per agent in index order.
void write_config_csv(const SwarmConfig& config, const std::filesystem::path& path);
SwarmConfig read_config_csv(const std::filesystem::path& path);

nlohmann::json config_to_json(const SwarmConfig& config);
SwarmConfig config_from_json(const nlohmann::json& json);

// `t,agent,x,y` for every recorded state.
void write_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path);

// `t,V,Vdot_analytic,Vdot_numeric,links,links_changed`.
void write_diagnostics_csv(const DissipationReport& report, const std::filesystem::path& path);

nlohmann::json spectrum_to_json(const SpectrumReport& report);

void write_json(const nlohmann::json& json, const std::filesystem::path& path);

}  // namespace swarm
