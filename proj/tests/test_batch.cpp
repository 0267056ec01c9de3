#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "taskgrid/batch.hpp"
#include "taskgrid/json_io.hpp"
#include "test_helpers.hpp"

using namespace taskgrid;
using namespace taskgrid::testing;

namespace {

std::vector<GenConfig> sweep(int seeds_per_preset) {
  std::vector<GenConfig> configs;
  for (uint64_t seed = 0; seed < static_cast<uint64_t>(seeds_per_preset); ++seed)
    for (auto cfg : all_presets(seed)) {
      cfg.seed = seed;
      configs.push_back(cfg);
    }
  return configs;
}

AgentFactory explorer_factory() {
  return [](const Environment&, const EpisodeState&) {
    return std::make_unique<FrontierExplorerAgent>();
  };
}

}  // namespace

TEST_CASE("parallel generation matches the serial reference byte-for-byte") {
  auto configs = sweep(4);
  auto serial = generate_batch_serial(configs);
  auto parallel = generate_batch(configs, 4);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i)
    CHECK(environment_to_string(serial[i]) == environment_to_string(parallel[i]));
}

TEST_CASE("parallel episode runs match the serial reference byte-for-byte") {
  auto configs = sweep(2);
  auto envs = generate_batch_serial(configs);

  std::vector<EpisodeJob> jobs;
  for (size_t i = 0; i < envs.size(); ++i)
    jobs.push_back({&envs[i], explorer_factory(), {"explorer", {}, envs[i].seed}});

  auto serial = run_batch_serial(jobs);
  auto parallel = run_batch(jobs, 4);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i)
    CHECK(trajectory_to_string(serial[i]) == trajectory_to_string(parallel[i]));
}

TEST_CASE("parallel evaluation matches the serial reference") {
  auto configs = sweep(2);
  auto envs = generate_batch_serial(configs);
  std::vector<EpisodeJob> episode_jobs;
  for (size_t i = 0; i < envs.size(); ++i)
    episode_jobs.push_back({&envs[i], explorer_factory(), {"explorer", {}, envs[i].seed}});
  auto trajectories = run_batch_serial(episode_jobs);

  std::vector<EvalJob> jobs;
  for (size_t i = 0; i < envs.size(); ++i) jobs.push_back({&envs[i], &trajectories[i]});
  auto serial = evaluate_batch_serial(jobs);
  auto parallel = evaluate_batch(jobs, 4);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].success == parallel[i].success);
    CHECK(serial[i].steps == parallel[i].steps);
    CHECK(serial[i].exploration_error == parallel[i].exploration_error);
    CHECK(serial[i].exploitation_error == parallel[i].exploitation_error);
    REQUIRE(serial[i].per_step.size() == parallel[i].per_step.size());
    for (size_t s = 0; s < serial[i].per_step.size(); ++s) {
      CHECK(serial[i].per_step[s].err == parallel[i].per_step[s].err);
      CHECK(serial[i].per_step[s].stale_after == parallel[i].per_step[s].stale_after);
    }
  }
}

TEST_CASE("random agents seeded per episode are order-independent") {
  GenConfig cfg = preset(DagSize::Small, ExploitDemand::High, Difficulty::Easy, 3);
  Environment env = generate_environment(cfg);

  auto factory_for = [](uint64_t episode_seed) -> AgentFactory {
    return [episode_seed](const Environment& e, const EpisodeState&) {
      return std::make_unique<RandomAgent>(Rng::mix(e.seed, episode_seed));
    };
  };

  std::vector<EpisodeJob> jobs;
  for (uint64_t s = 0; s < 8; ++s) jobs.push_back({&env, factory_for(s), {"random", {}, s}});

  auto serial = run_batch_serial(jobs);
  auto parallel = run_batch(jobs, 3);
  for (size_t i = 0; i < jobs.size(); ++i)
    CHECK(trajectory_to_string(serial[i]) == trajectory_to_string(parallel[i]));
}

TEST_CASE("batch errors propagate") {
  GenConfig bad = preset(DagSize::Small, ExploitDemand::High, Difficulty::Easy, 0);
  bad.option_count_probs = {{1, 0.3}};  // invalid table
  std::vector<GenConfig> configs{bad};
  CHECK_THROWS(generate_batch_serial(configs));
  CHECK_THROWS(generate_batch(configs, 2));
}
