#pragma once

#include <string>

#include <json.hpp>

#include "taskgrid/metric.hpp"
#include "taskgrid/trajectory.hpp"

namespace taskgrid {

using ordered_json = nlohmann::ordered_json;

// Environment document: { "version", "seed", "grid", "nodes", "budget" }.
// Serialization is canonical: loading and re-serializing is byte-identical.
ordered_json environment_to_json(const Environment& env);
Environment environment_from_json(const ordered_json& doc, const std::string& config_key = "");
std::string environment_to_string(const Environment& env);

void write_environment(const std::string& path, const Environment& env);
Environment read_environment(const std::string& path);

ordered_json discovery_to_json(const Discovery& d);
Discovery discovery_from_json(const ordered_json& doc);

// Metric report document; per-step verdicts included on request.
ordered_json metric_report_to_json(const MetricReport& report, bool per_step);

// Line-delimited JSON: header record first, then one record per turn.
std::string trajectory_to_string(const Trajectory& traj);
Trajectory trajectory_from_string(const std::string& text);
void write_trajectory(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory(const std::string& path);

}  // namespace taskgrid
