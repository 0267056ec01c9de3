#include "taskgrid/batch.hpp"

#include <optional>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace taskgrid {

namespace {

// Runs jobs[i] -> out[i] either serially or under an OpenMP parallel-for.
// The first captured exception is rethrown after the loop completes.
template <typename Job, typename Result, typename Fn>
std::vector<Result> map_jobs(const std::vector<Job>& jobs, int threads, Fn&& fn) {
  std::vector<std::optional<Result>> slots(jobs.size());
  std::exception_ptr failure = nullptr;

  if (threads <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i) slots[i] = fn(jobs[i]);
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(jobs.size()); ++i) {
      try {
        slots[static_cast<size_t>(i)] = fn(jobs[static_cast<size_t>(i)]);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
#else
    for (size_t i = 0; i < jobs.size(); ++i) slots[i] = fn(jobs[i]);
#endif
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<Result> out;
  out.reserve(jobs.size());
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace

std::vector<Environment> generate_batch_serial(const std::vector<GenConfig>& configs) {
  return map_jobs<GenConfig, Environment>(configs, 1,
                                          [](const GenConfig& c) { return generate_environment(c); });
}

std::vector<Environment> generate_batch(const std::vector<GenConfig>& configs, int threads) {
  return map_jobs<GenConfig, Environment>(configs, threads,
                                          [](const GenConfig& c) { return generate_environment(c); });
}

std::vector<Trajectory> run_batch_serial(const std::vector<EpisodeJob>& jobs) {
  return map_jobs<EpisodeJob, Trajectory>(
      jobs, 1, [](const EpisodeJob& j) { return run_episode(*j.env, j.factory, j.meta); });
}

std::vector<Trajectory> run_batch(const std::vector<EpisodeJob>& jobs, int threads) {
  return map_jobs<EpisodeJob, Trajectory>(
      jobs, threads, [](const EpisodeJob& j) { return run_episode(*j.env, j.factory, j.meta); });
}

std::vector<MetricReport> evaluate_batch_serial(const std::vector<EvalJob>& jobs) {
  return map_jobs<EvalJob, MetricReport>(
      jobs, 1, [](const EvalJob& j) { return evaluate_trajectory(*j.env, *j.traj); });
}

std::vector<MetricReport> evaluate_batch(const std::vector<EvalJob>& jobs, int threads) {
  return map_jobs<EvalJob, MetricReport>(
      jobs, threads, [](const EvalJob& j) { return evaluate_trajectory(*j.env, *j.traj); });
}

}  // namespace taskgrid
