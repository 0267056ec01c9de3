#pragma once

#include <string>
#include <vector>

#include "taskgrid/metric.hpp"

namespace taskgrid {

enum class RenderBackend { Ascii, Svg };

// One frame per timestep, t = 0 .. steps: map with per-cell knowledge, node
// statuses, agent position/path, and the running metric readout.
std::vector<std::string> render_frames(const Environment& env, const Trajectory& traj,
                                       RenderBackend backend);

const char* render_extension(RenderBackend backend);

}  // namespace taskgrid
