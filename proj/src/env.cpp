#include "taskgrid/env.hpp"

#include <algorithm>
#include <stdexcept>

namespace taskgrid {

namespace {

std::string cell_text(Cell c) {
  return "[" + std::to_string(c.x) + ", " + std::to_string(c.y) + "]";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// "up", "up or down", "up, down, or left"
std::string or_list(const std::vector<std::string>& parts) {
  if (parts.size() == 1) return parts[0];
  if (parts.size() == 2) return parts[0] + " or " + parts[1];
  std::string out;
  for (size_t i = 0; i + 1 < parts.size(); ++i) out += parts[i] + ", ";
  out += "or " + parts.back();
  return out;
}

std::vector<std::string> unique_in_order(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items)
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  return out;
}

Discovery make_discovery(const Environment& env, const TaskNode& node, bool first_sight,
                         bool activated_now) {
  Discovery d;
  d.node_id = node.id;
  d.label = node.label;
  d.first_sight = first_sight;
  d.activated_now = activated_now;
  d.immediate = node.precondition.options.empty();
  d.is_goal = node.is_goal;

  auto label_of = [&](const NodeId& id) { return env.dag.find(id)->label; };
  for (const auto& option : node.precondition.options) {
    std::vector<std::string> labels;
    for (const auto& parent : option) labels.push_back(label_of(parent));
    d.option_labels.push_back(std::move(labels));
  }
  d.prereq_text = render_prereq_dnf(d.option_labels);

  std::vector<std::string> parents;
  for (const auto& id : node.precondition.referenced()) parents.push_back(label_of(id));
  for (const auto& id : env.dag.children_of(node.id)) d.successors.push_back(label_of(id));
  d.ancestors = unique_in_order([&] {
    std::vector<std::string> all = parents;
    all.insert(all.end(), d.successors.begin(), d.successors.end());
    return all;
  }());
  return d;
}

}  // namespace

const char* terminal_name(Terminal t) {
  switch (t) {
    case Terminal::Running: return "running";
    case Terminal::Success: return "success";
    case Terminal::BudgetExhausted: return "budget_exhausted";
  }
  throw std::logic_error("invalid terminal");
}

EpisodeState::EpisodeState(const Environment& env)
    : env_(&env),
      position_(env.map.start()),
      steps_remaining_(env.budget),
      knowledge_(static_cast<size_t>(env.map.width()) * static_cast<size_t>(env.map.height()),
                 CellState::Unknown),
      progress_(env.dag.nodes().size()) {}

CellState EpisodeState::cell_state(Cell c) const {
  if (!env_->map.in_bounds(c)) return CellState::Unknown;
  return knowledge_[env_->map.index(c)];
}

NodeStatus EpisodeState::node_status(const NodeId& id) const { return node_progress(id).status; }

const NodeProgressEntry& EpisodeState::node_progress(const NodeId& id) const {
  const auto& nodes = env_->dag.nodes();
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return progress_[i];
  throw std::invalid_argument("node_progress: unknown node " + id);
}

std::vector<Cell> EpisodeState::unobserved_cells() const {
  std::vector<Cell> out;
  for (int y = 0; y < env_->map.height(); ++y)
    for (int x = 0; x < env_->map.width(); ++x)
      if (knowledge_[env_->map.index({x, y})] == CellState::Unobserved) out.push_back({x, y});
  return out;
}

bool EpisodeState::goal_achieved() const {
  const auto& nodes = env_->dag.nodes();
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].is_goal) return progress_[i].status == NodeStatus::Achieved;
  return false;
}

Observation EpisodeState::current_observation() const {
  Observation obs;
  obs.position = position_;
  obs.admissible = admissible_moves(env_->map, position_).directions;
  obs.steps_spent = t_;
  return obs;
}

void EpisodeState::observe_cell(Cell c) {
  knowledge_[env_->map.index(c)] = CellState::Observed;
  for (Direction d : kDirections) {
    Cell nb = neighbor_cell(c, d);
    if (env_->map.traversable(nb) && knowledge_[env_->map.index(nb)] == CellState::Unknown)
      knowledge_[env_->map.index(nb)] = CellState::Unobserved;
  }
}

std::pair<EpisodeState, Observation> reset(const Environment& env) {
  EpisodeState state(env);
  state.observe_cell(state.position_);
  return {state, state.current_observation()};
}

Observation step(EpisodeState& state, Direction action) {
  if (state.terminal_ != Terminal::Running)
    throw std::logic_error("step: episode already terminal");
  Cell to = neighbor_cell(state.position_, action);
  if (!state.env_->map.traversable(to))
    throw std::invalid_argument("step: action not admissible");

  state.position_ = to;
  state.t_ += 1;
  state.steps_remaining_ -= 1;
  state.observe_cell(to);

  Observation obs = state.current_observation();

  const auto& nodes = state.env_->dag.nodes();
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].location != to) continue;
    auto& entry = state.progress_[i];
    bool first_sight = entry.status == NodeStatus::Undiscovered;
    if (first_sight) {
      entry.status = NodeStatus::Discovered;
      entry.first_seen_t = state.t_;
    }
    bool activated_now = false;
    if (entry.status != NodeStatus::Achieved &&
        nodes[i].precondition.satisfied(state.achieved_)) {
      entry.status = NodeStatus::Achieved;
      entry.achieved_t = state.t_;
      state.achieved_.insert(nodes[i].id);
      activated_now = true;
    }
    if (first_sight || activated_now)
      obs.discovery = make_discovery(*state.env_, nodes[i], first_sight, activated_now);
    break;
  }

  if (state.goal_achieved())
    state.terminal_ = Terminal::Success;
  else if (state.steps_remaining_ <= 0)
    state.terminal_ = Terminal::BudgetExhausted;
  return obs;
}

Observation step_stay(EpisodeState& state) {
  if (state.terminal_ != Terminal::Running)
    throw std::logic_error("step_stay: episode already terminal");
  state.t_ += 1;
  state.steps_remaining_ -= 1;
  if (state.steps_remaining_ <= 0) state.terminal_ = Terminal::BudgetExhausted;
  return state.current_observation();
}

std::set<NodeId> pending_set(const EpisodeState& state) {
  std::set<NodeId> out;
  for (const auto& node : state.env().dag.nodes())
    if (state.node_status(node.id) == NodeStatus::Discovered &&
        node.precondition.satisfied(state.achieved()))
      out.insert(node.id);
  return out;
}

std::string render_prereq_dnf(const std::vector<std::vector<std::string>>& option_labels) {
  std::vector<std::string> options;
  for (const auto& option : option_labels) {
    std::string text = join(option, " and ");
    if (std::find(options.begin(), options.end(), text) == options.end())
      options.push_back(std::move(text));
  }
  return join(options, ", or ");
}

std::string render_observation(const Observation& obs, ObsFormat format,
                               const std::string& summary) {
  std::string line = "OBSERVATION: You are at " + cell_text(obs.position) + ".";

  if (!obs.discovery) {
    line += " You found nothing here.";
  } else {
    const Discovery& d = *obs.discovery;
    if (d.first_sight) {
      line += " You discovered state " + d.label + ".";
      if (d.is_goal) line += " It is the goal state.";
      if (d.immediate && d.activated_now) {
        line += " " + d.label + " has no prerequisites and is immediately activated!";
      } else if (d.activated_now) {
        line += " " + d.label + " is now activated!";
      } else {
        line += " To activate it, you need " + d.prereq_text + ".";
      }
      if (!d.ancestors.empty())
        line += " " + d.label + " has ancestors: " + join(d.ancestors, ", ") + ".";
    } else {
      // Activation on a revisit.
      line += " You found " + d.label + " which is now activated.";
      if (!d.successors.empty()) line += " Now, you can go to " + join(d.successors, ", ") + ".";
    }
  }

  std::vector<std::string> dirs;
  for (Direction d : obs.admissible) dirs.push_back(direction_name(d));

  if (format == ObsFormat::Plain)
    return line + "\nAvailable directions: " + join(dirs, ", ");

  line += " Your available action is " + or_list(dirs) + ".";
  line += " You spent " + std::to_string(obs.steps_spent) + " steps.";
  if (!summary.empty()) line += "\n\n" + summary;
  return line;
}

}  // namespace taskgrid
