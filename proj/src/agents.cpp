#include "taskgrid/agents.hpp"

#include <algorithm>
#include <map>
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

std::string join_cells(const std::vector<Cell>& cells) {
  std::vector<std::string> parts;
  parts.reserve(cells.size());
  for (Cell c : cells) parts.push_back(cell_text(c));
  return join(parts, ", ");
}

}  // namespace

void AgentKnowledge::observe(const Observation& obs) {
  position = obs.position;
  steps_spent = obs.steps_spent;
  admissible = obs.admissible;

  if (visited.insert(position).second) visited_order.push_back(position);
  if (frontier.erase(position) > 0)
    frontier_order.erase(std::find(frontier_order.begin(), frontier_order.end(), position));

  for (Direction d : kDirections) {
    Cell nb = neighbor_cell(position, d);
    bool open = std::find(obs.admissible.begin(), obs.admissible.end(), d) != obs.admissible.end();
    if (open) {
      if (!visited.count(nb) && frontier.insert(nb).second) frontier_order.push_back(nb);
    } else if (nb.x >= 0 && nb.y >= 0) {
      if (obstacles.insert(nb).second) obstacle_order.push_back(nb);
    }
  }

  if (!obs.discovery) return;
  const Discovery& d = *obs.discovery;
  if (d.first_sight) {
    KnownNode node{d.label,     position,     d.option_labels, d.prereq_text,
                   d.successors, d.ancestors, false,           d.is_goal};
    discovered.push_back(std::move(node));
    if (d.is_goal) goal_label = d.label;
  }
  if (d.activated_now) {
    activated_order.push_back(d.label);
    for (auto& node : discovered)
      if (node.label == d.label) node.activated = true;
  }
}

std::vector<std::string> AgentKnowledge::activatable() const {
  std::set<std::string> active(activated_order.begin(), activated_order.end());
  std::vector<std::string> out;
  for (const auto& node : discovered) {
    if (node.activated) continue;
    bool ready = node.option_labels.empty();
    for (const auto& option : node.option_labels) {
      bool all = std::all_of(option.begin(), option.end(),
                             [&](const std::string& p) { return active.count(p) > 0; });
      if (all) {
        ready = true;
        break;
      }
    }
    if (ready) out.push_back(node.label);
  }
  return out;
}

const KnownNode* AgentKnowledge::find(const std::string& label) const {
  for (const auto& node : discovered)
    if (node.label == label) return &node;
  return nullptr;
}

std::string build_memory_summary(const AgentKnowledge& knowledge,
                                 const std::optional<std::string>& goal_known) {
  std::string out =
      "From your movements so far, coordinate system: [x, y] where up=y+1, down=y-1, "
      "left=x-1, right=x+1.";
  if (goal_known) out += " The goal state is " + *goal_known + ".";
  if (!knowledge.visited_order.empty())
    out += " You have visited " + join_cells(knowledge.visited_order) + ".";
  if (!knowledge.frontier_order.empty())
    out += " You have not visited these cells yet, but you know you can pass through them: " +
           join_cells(knowledge.frontier_order) + ".";
  if (!knowledge.obstacle_order.empty())
    out += " You know you cannot pass through these cells: " +
           join_cells(knowledge.obstacle_order) + ".";
  for (const auto& node : knowledge.discovered) {
    out += " You discovered " + node.label + " at " + cell_text(node.position) + ".";
    if (node.activated)
      out += " It is already activated.";
    else
      out += " It is not activated yet. To activate it, you should find " + node.prereq_text +
             " first.";
    if (!node.successors.empty())
      out += " Once it is activated, you can next pursue " + join(node.successors, ", ") + ".";
  }
  if (!knowledge.activated_order.empty())
    out += " Activated states: " + join(knowledge.activated_order, ", ") + ".";
  auto ready = knowledge.activatable();
  if (!ready.empty())
    out += " The discovered states whose prerequisites are already satisfied: " +
           join(ready, ", ") + ".";
  return out;
}

const char* prompt_style_name(PromptStyle s) {
  switch (s) {
    case PromptStyle::Base: return "base";
    case PromptStyle::Exploration: return "exploration";
    case PromptStyle::Exploitation: return "exploitation";
    case PromptStyle::Balance: return "balance";
  }
  throw std::logic_error("invalid prompt style");
}

std::optional<PromptStyle> parse_prompt_style(const std::string& name) {
  if (name == "base") return PromptStyle::Base;
  if (name == "exploration") return PromptStyle::Exploration;
  if (name == "exploitation") return PromptStyle::Exploitation;
  if (name == "balance") return PromptStyle::Balance;
  return std::nullopt;
}

std::string build_system_prompt(const PromptVariant& variant) {
  std::string out = "You are controlling an agent in a partially observed symbolic grid environment.\n";
  out += "Your objective is to activate the goal state.\n";
  if (variant.harness) {
    out +=
        "At each step, you are given your current observation that contains your current "
        "position, the directions you can legally move, and any newly discovered symbolic states "
        "at your current cell. Also, you are given a summary of your explored map, visited cells, "
        "reachable frontier cells, discovered states, activated states, and prerequisite "
        "relations.\n";
  } else {
    out +=
        "At each step, you are given your current position, the directions you can legally move, "
        "and any newly discovered symbolic states at your current cell.\n";
  }
  out += "Newly discovered states may include prerequisite information and ancestor hints.\n";
  out += "A state can be activated when you are on its cell and its prerequisites are satisfied.\n";
  out += "The full map, hidden budget, and undiscovered states are not available to you.\n";
  switch (variant.style) {
    case PromptStyle::Base: break;
    case PromptStyle::Exploration:
      out +=
          "Prioritize exploration when deciding where to move. Treat exploration as deliberately "
          "moving toward cells you have not visited yet and roaming to uncover cells and symbolic "
          "states that you have not discovered yet.\n";
      break;
    case PromptStyle::Exploitation:
      out +=
          "Prioritize exploitation when deciding where to move. Among the symbolic states you "
          "have already discovered, first target states whose prerequisites are already "
          "satisfied, and move along the shortest available path to activate them.\n";
      break;
    case PromptStyle::Balance:
      out +=
          "Balance exploration and exploitation when deciding where to move. Treat exploration "
          "as deliberately moving toward cells you have not visited yet and roaming to uncover "
          "cells and symbolic states that you have not discovered yet. Treat exploitation as "
          "targeting already discovered symbolic states whose prerequisites are already satisfied "
          "and moving along the shortest available path to activate them. Choose the balance "
          "between these two behaviors based on which actions are most likely to solve the task "
          "in the fewest steps.\n";
      break;
  }
  out +=
      "Reply with exactly one JSON object containing one valid action from available_directions "
      "like this: {\"action\":\"up\"}, {\"action\":\"down\"}, {\"action\":\"left\"}, "
      "{\"action\":\"right\"}";
  return out;
}

Direction RandomAgent::decide(const std::string&, const AgentKnowledge& knowledge) {
  if (knowledge.admissible.empty())
    throw std::logic_error("RandomAgent: no admissible moves in knowledge");
  return knowledge.admissible[rng_.uniform_index(knowledge.admissible.size())];
}

namespace {

// BFS over the agent-known traversable cells (visited + frontier).
std::map<Cell, int> known_distance_field(const AgentKnowledge& k, Cell src) {
  auto known = [&](Cell c) { return k.visited.count(c) > 0 || k.frontier.count(c) > 0; };
  std::map<Cell, int> dist;
  std::vector<Cell> queue{src};
  dist[src] = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    Cell c = queue[head];
    for (Direction d : kDirections) {
      Cell nb = neighbor_cell(c, d);
      if (known(nb) && !dist.count(nb)) {
        dist[nb] = dist[c] + 1;
        queue.push_back(nb);
      }
    }
  }
  return dist;
}

Direction first_step_toward(const AgentKnowledge& k, Cell target) {
  auto from_target = known_distance_field(k, target);
  auto at = from_target.find(k.position);
  if (at == from_target.end())
    throw std::runtime_error("frontier_explorer_policy: target unreachable in known subgraph");
  for (Direction d : kDirections) {
    Cell nb = neighbor_cell(k.position, d);
    auto it = from_target.find(nb);
    if (it != from_target.end() && it->second == at->second - 1) return d;
  }
  throw std::logic_error("frontier_explorer_policy: no descending step found");
}

}  // namespace

Direction frontier_explorer_policy(const AgentKnowledge& knowledge) {
  std::vector<Cell> targets(knowledge.frontier.begin(), knowledge.frontier.end());
  if (targets.empty()) {
    for (const auto& label : knowledge.activatable())
      targets.push_back(knowledge.find(label)->position);
    std::sort(targets.begin(), targets.end());
  }
  if (targets.empty())
    throw std::runtime_error("frontier_explorer_policy: no frontier and no activatable node");

  auto dist = known_distance_field(knowledge, knowledge.position);
  const Cell* best = nullptr;
  int best_dist = 0;
  for (const Cell& c : targets) {
    auto it = dist.find(c);
    if (it == dist.end()) continue;
    if (!best || it->second < best_dist || (it->second == best_dist && c < *best)) {
      best = &c;
      best_dist = it->second;
    }
  }
  if (!best) throw std::runtime_error("frontier_explorer_policy: all targets unreachable");
  return first_step_toward(knowledge, *best);
}

Direction OracleAgent::decide(const std::string&, const AgentKnowledge&) {
  Cell pos = state_->position();

  // Progress events (new observed cell or new achievement) trigger a re-plan.
  size_t observed = 0;
  for (Cell c : state_->env().map.traversable_cells())
    if (state_->cell_state(c) == CellState::Observed) ++observed;
  size_t marks = observed + state_->achieved().size();
  if (marks != seen_progress_marks_ || !committed_ || *committed_ == pos) {
    seen_progress_marks_ = marks;
    TargetCase tc = classify_case(*state_);
    const auto& from_pos = distances_.field_from(pos);
    Cell best{};
    int best_dist = -1;
    for (Cell z : tc.targets) {
      int d = from_pos[env_->map.index(z)];
      if (best_dist < 0 || d < best_dist || (d == best_dist && z < best)) {
        best = z;
        best_dist = d;
      }
    }
    committed_ = best;
  }

  const auto& from_target = distances_.field_from(*committed_);
  int here = from_target[env_->map.index(pos)];
  for (Direction d : kDirections) {
    Cell nb = neighbor_cell(pos, d);
    if (env_->map.traversable(nb) && from_target[env_->map.index(nb)] == here - 1) return d;
  }
  throw std::logic_error("OracleAgent: no descending step toward target");
}

}  // namespace taskgrid
