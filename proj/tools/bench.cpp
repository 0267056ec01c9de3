// Throughput comparison between the serial reference kernels and the OpenMP
// variants, over generation, episode runs, and trajectory evaluation.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "taskgrid/batch.hpp"
#include "taskgrid/json_io.hpp"

using namespace taskgrid;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<GenConfig> make_configs(int count) {
  std::vector<GenConfig> configs;
  DagSize sizes[] = {DagSize::Small, DagSize::Medium, DagSize::Large};
  ExploitDemand demands[] = {ExploitDemand::Low, ExploitDemand::Medium, ExploitDemand::High};
  for (int i = 0; i < count; ++i) {
    GenConfig cfg;
    cfg.dag_size = sizes[i % 3];
    cfg.exploit_demand = demands[(i / 3) % 3];
    cfg.difficulty = Difficulty::Medium;
    cfg.seed = static_cast<uint64_t>(i);
    configs.push_back(cfg);
  }
  return configs;
}

void row(const char* name, int items, double serial_s, double parallel_s) {
  std::printf("%-22s %6d items   serial %7.3fs (%8.1f/s)   openmp %7.3fs (%8.1f/s)   speedup %.2fx\n",
              name, items, serial_s, items / serial_s, parallel_s, items / parallel_s,
              serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
  int count = argc > 1 ? std::atoi(argv[1]) : 300;
  int threads = 4;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("taskgrid batch benchmark: %d items per kernel, %d threads\n", count, threads);

  auto configs = make_configs(count);

  auto t0 = Clock::now();
  auto envs_serial = generate_batch_serial(configs);
  double gen_serial = seconds_since(t0);
  t0 = Clock::now();
  auto envs = generate_batch(configs, threads);
  double gen_parallel = seconds_since(t0);
  row("generate", count, gen_serial, gen_parallel);

  auto factory = [](const Environment&, const EpisodeState&) {
    return std::make_unique<FrontierExplorerAgent>();
  };
  std::vector<EpisodeJob> episode_jobs;
  for (auto& env : envs) episode_jobs.push_back({&env, factory, {"explorer", {}, env.seed}});

  t0 = Clock::now();
  auto traj_serial = run_batch_serial(episode_jobs);
  double run_serial = seconds_since(t0);
  t0 = Clock::now();
  auto trajectories = run_batch(episode_jobs, threads);
  double run_parallel = seconds_since(t0);
  row("run episodes", count, run_serial, run_parallel);

  std::vector<EvalJob> eval_jobs;
  for (size_t i = 0; i < envs.size(); ++i) eval_jobs.push_back({&envs[i], &trajectories[i]});

  t0 = Clock::now();
  auto reports_serial = evaluate_batch_serial(eval_jobs);
  double eval_serial = seconds_since(t0);
  t0 = Clock::now();
  auto reports = evaluate_batch(eval_jobs, threads);
  double eval_parallel = seconds_since(t0);
  row("evaluate", count, eval_serial, eval_parallel);

  // Sanity: parallel results must match the serial reference.
  size_t mismatches = 0;
  for (size_t i = 0; i < envs.size(); ++i) {
    if (environment_to_string(envs_serial[i]) != environment_to_string(envs[i])) ++mismatches;
    if (trajectory_to_string(traj_serial[i]) != trajectory_to_string(trajectories[i])) ++mismatches;
    if (reports_serial[i].steps != reports[i].steps ||
        reports_serial[i].success != reports[i].success)
      ++mismatches;
  }
  std::printf("serial/openmp mismatches: %zu\n", mismatches);
  return mismatches == 0 ? 0 : 1;
}
