#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taskgrid/env.hpp"

namespace taskgrid {

// One turn of an episode; position is the post-action agent position.
struct TrajectoryStep {
  int t = 0;
  Cell position{};
  std::string action;                   // direction the agent chose
  std::vector<Direction> admissible;    // at the post-action position
  std::optional<Discovery> discovery;
  std::vector<std::string> events;      // "discovered:<id>", "achieved:<id>", "noop"
  Terminal terminal = Terminal::Running;
};

// Self-contained episode log; the header embeds the environment document.
struct Trajectory {
  Environment env;
  uint64_t episode_seed = 0;
  std::string agent;
  std::string prompt_variant;
  bool harness = false;
  std::string config_key;
  std::vector<TrajectoryStep> steps;
  std::string failure;  // non-empty when the driver aborted (e.g. adapter exhaustion)
};

}  // namespace taskgrid
