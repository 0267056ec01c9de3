#pragma once

#include <cstdint>
#include <vector>

#include "taskgrid/driver.hpp"
#include "taskgrid/metric.hpp"

namespace taskgrid {

// Batch kernels over independent seeds/episodes. Each has a serial reference
// implementation and an OpenMP variant; outputs are index-stable, so the two
// must agree byte-for-byte (tested). `threads` <= 1 selects the serial path.

std::vector<Environment> generate_batch_serial(const std::vector<GenConfig>& configs);
std::vector<Environment> generate_batch(const std::vector<GenConfig>& configs, int threads);

struct EpisodeJob {
  const Environment* env = nullptr;
  AgentFactory factory;  // must be safe to invoke concurrently
  RunMeta meta;
};

std::vector<Trajectory> run_batch_serial(const std::vector<EpisodeJob>& jobs);
std::vector<Trajectory> run_batch(const std::vector<EpisodeJob>& jobs, int threads);

struct EvalJob {
  const Environment* env = nullptr;
  const Trajectory* traj = nullptr;
};

std::vector<MetricReport> evaluate_batch_serial(const std::vector<EvalJob>& jobs);
std::vector<MetricReport> evaluate_batch(const std::vector<EvalJob>& jobs, int threads);

}  // namespace taskgrid
