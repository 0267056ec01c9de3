#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <set>
#include <string>
#include <vector>

#include "taskgrid/env.hpp"
#include "taskgrid/metric.hpp"
#include "taskgrid/rng.hpp"

namespace taskgrid {

// What the agent learned about one discovered node, from observations alone.
struct KnownNode {
  std::string label;
  Cell position{};
  std::vector<std::vector<std::string>> option_labels;
  std::string prereq_text;
  std::vector<std::string> successors;
  std::vector<std::string> ancestors;
  bool activated = false;
  bool is_goal = false;
};

// Pure fold over the observation history; contains nothing the environment
// did not already return.
struct AgentKnowledge {
  Cell position{};
  int steps_spent = 0;
  std::vector<Direction> admissible;

  std::vector<Cell> visited_order;   // first-visit order
  std::set<Cell> visited;
  std::vector<Cell> frontier_order;  // first-seen order
  std::set<Cell> frontier;           // known traversable, unvisited
  std::vector<Cell> obstacle_order;
  std::set<Cell> obstacles;          // inferred impassable

  std::vector<KnownNode> discovered;  // discovery order
  std::vector<std::string> activated_order;
  std::optional<std::string> goal_label;

  void observe(const Observation& obs);

  // Labels of discovered, not-yet-activated nodes whose known prerequisites
  // are satisfied by the activated set.
  std::vector<std::string> activatable() const;

  const KnownNode* find(const std::string& label) const;
};

// Fixed-order structured restatement of the observation history
// (coordinate system, goal, visited, frontier, obstacles, node records,
// activated, activatable). Adds organization, never information.
std::string build_memory_summary(const AgentKnowledge& knowledge,
                                 const std::optional<std::string>& goal_known);

enum class PromptStyle { Base, Exploration, Exploitation, Balance };

struct PromptVariant {
  PromptStyle style = PromptStyle::Base;
  bool harness = false;
};

const char* prompt_style_name(PromptStyle s);
std::optional<PromptStyle> parse_prompt_style(const std::string& name);

// Shared environment description + optional strategy sentence + shared action
// format line. Variants differ from base only by the strategy sentence.
std::string build_system_prompt(const PromptVariant& variant);

// Raised by agents whose backend is gone for good (e.g. a chat adapter out of
// retries); the driver records it on the trajectory instead of crashing.
struct AgentUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual Direction decide(const std::string& observation_text, const AgentKnowledge& knowledge) = 0;
  virtual std::string name() const = 0;
};

class RandomAgent : public Agent {
 public:
  explicit RandomAgent(uint64_t seed) : rng_(seed) {}
  Direction decide(const std::string&, const AgentKnowledge& knowledge) override;
  std::string name() const override { return "random"; }

 private:
  Rng rng_;
};

// Heads for the nearest frontier cell along a shortest path within the
// known-traversable subgraph; falls back to the nearest activatable node once
// the frontier is exhausted. Ties break on (y, x), then direction order.
Direction frontier_explorer_policy(const AgentKnowledge& knowledge);

class FrontierExplorerAgent : public Agent {
 public:
  Direction decide(const std::string&, const AgentKnowledge& knowledge) override {
    return frontier_explorer_policy(knowledge);
  }
  std::string name() const override { return "explorer"; }
};

// Full-map shortest path to the nearest metric target, re-planning after
// every progress event (the committed target stays fixed in between); scores
// zero metric error by construction. Evaluation-side baseline with oracle
// access.
class OracleAgent : public Agent {
 public:
  OracleAgent(const Environment& env, const EpisodeState& state)
      : env_(&env), state_(&state), distances_(env.map) {}
  Direction decide(const std::string&, const AgentKnowledge&) override;
  std::string name() const override { return "oracle"; }

 private:
  const Environment* env_;
  const EpisodeState* state_;
  DistanceOracle distances_;
  std::optional<Cell> committed_;
  size_t seen_progress_marks_ = 0;  // observed cells + achieved nodes
};

}  // namespace taskgrid
