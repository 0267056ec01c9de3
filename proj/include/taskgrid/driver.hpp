#pragma once

#include <functional>
#include <memory>
#include <string>

#include "taskgrid/agents.hpp"
#include "taskgrid/trajectory.hpp"

namespace taskgrid {

// Agents are built per episode; oracle-style agents keep a view of the live
// episode state.
using AgentFactory =
    std::function<std::unique_ptr<Agent>(const Environment&, const EpisodeState&)>;

struct RunMeta {
  std::string agent_name;
  PromptVariant variant;
  uint64_t episode_seed = 0;
};

// Runs one episode to its terminal state. Inadmissible actions are re-prompted
// up to three times without consuming a timestep; after that the turn is
// recorded as a stay-in-place no-op that does consume one.
Trajectory run_episode(const Environment& env, const AgentFactory& factory, const RunMeta& meta);

std::vector<std::string> observation_events(const Observation& obs, bool noop);

}  // namespace taskgrid
