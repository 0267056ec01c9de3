#include "taskgrid/driver.hpp"

namespace taskgrid {

std::vector<std::string> observation_events(const Observation& obs, bool noop) {
  std::vector<std::string> events;
  if (noop) events.push_back("noop");
  if (obs.discovery) {
    if (obs.discovery->first_sight) events.push_back("discovered:" + obs.discovery->node_id);
    if (obs.discovery->activated_now) events.push_back("achieved:" + obs.discovery->node_id);
  }
  return events;
}

Trajectory run_episode(const Environment& env, const AgentFactory& factory, const RunMeta& meta) {
  auto [state, obs] = reset(env);
  auto agent = factory(env, state);

  AgentKnowledge knowledge;
  knowledge.observe(obs);

  Trajectory traj{env,
                  meta.episode_seed,
                  meta.agent_name,
                  prompt_style_name(meta.variant.style),
                  meta.variant.harness,
                  env.config_key,
                  {},
                  {}};

  constexpr int kMaxRetries = 3;
  while (state.terminal() == Terminal::Running) {
    std::string summary =
        meta.variant.harness ? build_memory_summary(knowledge, knowledge.goal_label) : "";
    std::string text = render_observation(
        obs, meta.variant.harness ? ObsFormat::WithSummary : ObsFormat::Plain, summary);

    Direction chosen{};
    bool admissible = false;
    std::string prompt = text;
    try {
      for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
        chosen = agent->decide(prompt, knowledge);
        if (admissible_moves(env.map, state.position()).contains(chosen)) {
          admissible = true;
          break;
        }
        prompt =
            text + "\nThat action is not admissible here. Choose one of the available directions.";
      }
    } catch (const AgentUnavailable& e) {
      traj.failure = e.what();
      return traj;
    }

    bool noop = !admissible;
    obs = admissible ? step(state, chosen) : step_stay(state);
    knowledge.observe(obs);

    TrajectoryStep rec;
    rec.t = state.timestep();
    rec.position = state.position();
    rec.action = direction_name(chosen);
    rec.admissible = obs.admissible;
    rec.discovery = obs.discovery;
    rec.events = observation_events(obs, noop);
    rec.terminal = state.terminal();
    traj.steps.push_back(std::move(rec));
  }
  return traj;
}

}  // namespace taskgrid
