#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "taskgrid/gen.hpp"

namespace taskgrid {

enum class CellState { Unknown, Unobserved, Observed };
enum class NodeStatus { Undiscovered, Discovered, Achieved };
enum class Terminal { Running, Success, BudgetExhausted };

const char* terminal_name(Terminal t);

struct NodeProgressEntry {
  NodeStatus status = NodeStatus::Undiscovered;
  std::optional<int> first_seen_t;
  std::optional<int> achieved_t;
};

// Per-turn discovery payload; present on first sight of a node or on the
// visit that activates it.
struct Discovery {
  std::string node_id;
  std::string label;
  bool first_sight = false;
  bool activated_now = false;
  bool immediate = false;  // no prerequisites
  bool is_goal = false;
  std::string prereq_text;                              // DNF over labels, "" if none
  std::vector<std::vector<std::string>> option_labels;  // structured prerequisites
  std::vector<std::string> ancestors;                   // parent then child labels
  std::vector<std::string> successors;                  // child labels

  friend bool operator==(const Discovery&, const Discovery&) = default;
};

struct Observation {
  Cell position{};
  std::optional<Discovery> discovery;
  std::vector<Direction> admissible;  // canonical order
  int steps_spent = 0;
};

class EpisodeState {
 public:
  explicit EpisodeState(const Environment& env);

  const Environment& env() const { return *env_; }
  Cell position() const { return position_; }
  int timestep() const { return t_; }
  int64_t steps_remaining() const { return steps_remaining_; }
  Terminal terminal() const { return terminal_; }

  CellState cell_state(Cell c) const;
  NodeStatus node_status(const NodeId& id) const;
  const NodeProgressEntry& node_progress(const NodeId& id) const;
  const std::set<NodeId>& achieved() const { return achieved_; }

  std::vector<Cell> unobserved_cells() const;  // (y, x) order
  bool goal_achieved() const;

  Observation current_observation() const;  // no discovery payload

 private:
  friend std::pair<EpisodeState, Observation> reset(const Environment& env);
  friend Observation step(EpisodeState& state, Direction action);
  friend Observation step_stay(EpisodeState& state);

  void observe_cell(Cell c);

  const Environment* env_;
  Cell position_{};
  int t_ = 0;
  int64_t steps_remaining_ = 0;
  Terminal terminal_ = Terminal::Running;
  std::vector<CellState> knowledge_;
  std::vector<NodeProgressEntry> progress_;  // parallel to dag nodes
  std::set<NodeId> achieved_;
};

std::pair<EpisodeState, Observation> reset(const Environment& env);

// Moves one cell; action must be admissible and the episode running.
Observation step(EpisodeState& state, Direction action);

// Stay-in-place step that still consumes one timestep (used by the driver
// after repeated inadmissible actions).
Observation step_stay(EpisodeState& state);

// Discovered nodes whose preconditions are currently satisfied.
std::set<NodeId> pending_set(const EpisodeState& state);

enum class ObsFormat { Plain, WithSummary };

// Renders the per-turn observation text. Plain:
//   OBSERVATION: You are at [x, y]. <discovery or "You found nothing here.">
//   Available directions: up, down
// WithSummary folds the directions and step count into the first line and
// appends `summary` after a blank line.
std::string render_observation(const Observation& obs, ObsFormat format,
                               const std::string& summary = "");

// "A", "A and B", "A and B, or C" over option label sets.
std::string render_prereq_dnf(const std::vector<std::vector<std::string>>& option_labels);

}  // namespace taskgrid
