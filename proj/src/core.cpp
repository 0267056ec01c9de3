#include "taskgrid/core.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <stdexcept>

namespace taskgrid {

Cell neighbor_cell(Cell c, Direction d) {
  switch (d) {
    case Direction::Up: return {c.x, c.y + 1};
    case Direction::Down: return {c.x, c.y - 1};
    case Direction::Left: return {c.x - 1, c.y};
    case Direction::Right: return {c.x + 1, c.y};
  }
  throw std::logic_error("invalid direction");
}

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    case Direction::Left: return "left";
    case Direction::Right: return "right";
  }
  throw std::logic_error("invalid direction");
}

std::optional<Direction> parse_direction(const std::string& name) {
  std::string lower;
  lower.reserve(name.size());
  for (char ch : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (lower == "up") return Direction::Up;
  if (lower == "down") return Direction::Down;
  if (lower == "left") return Direction::Left;
  if (lower == "right") return Direction::Right;
  return std::nullopt;
}

GridMap::GridMap(int width, int height, Cell start, const std::vector<Cell>& open_cells) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("GridMap: non-positive dimensions");
  width_ = width;
  height_ = height;
  start_ = start;
  open_.assign(static_cast<size_t>(width) * static_cast<size_t>(height), 0);
  for (Cell c : open_cells) {
    if (!in_bounds(c)) throw std::invalid_argument("GridMap: traversable cell out of bounds");
    if (!open_[index(c)]) {
      open_[index(c)] = 1;
      ++traversable_count_;
    }
  }
  if (!traversable(start_)) throw std::invalid_argument("GridMap: start not traversable");
}

GridMap GridMap::from_obstacles(int width, int height, Cell start,
                                const std::vector<Cell>& obstacles) {
  std::vector<uint8_t> blocked(static_cast<size_t>(width) * static_cast<size_t>(height), 0);
  for (Cell c : obstacles) {
    if (c.x < 0 || c.x >= width || c.y < 0 || c.y >= height)
      throw std::invalid_argument("GridMap: obstacle out of bounds");
    blocked[static_cast<size_t>(c.y) * width + c.x] = 1;
  }
  std::vector<Cell> open;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (!blocked[static_cast<size_t>(y) * width + x]) open.push_back({x, y});
  return GridMap(width, height, start, open);
}

std::vector<Cell> GridMap::traversable_cells() const {
  std::vector<Cell> out;
  out.reserve(static_cast<size_t>(traversable_count_));
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (open_[index({x, y})]) out.push_back({x, y});
  return out;
}

std::vector<Cell> GridMap::obstacle_cells() const {
  std::vector<Cell> out;
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (!open_[index({x, y})]) out.push_back({x, y});
  return out;
}

bool GridMap::connected() const {
  auto field = distance_field(*this, start_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (open_[index({x, y})] && field[index({x, y})] < 0) return false;
  return true;
}

bool Precondition::satisfied(const std::set<NodeId>& achieved) const {
  if (options.empty()) return true;
  for (const auto& option : options) {
    bool all = true;
    for (const auto& parent : option)
      if (!achieved.count(parent)) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

std::vector<NodeId> Precondition::referenced() const {
  std::set<NodeId> seen;
  std::vector<NodeId> out;
  for (const auto& option : options)
    for (const auto& parent : option)
      if (seen.insert(parent).second) out.push_back(parent);
  return out;
}

TaskDag::TaskDag(std::vector<TaskNode> nodes) : nodes_(std::move(nodes)) {}

const TaskNode* TaskDag::find(const NodeId& id) const {
  for (const auto& n : nodes_)
    if (n.id == id) return &n;
  return nullptr;
}

const TaskNode& TaskDag::goal() const {
  const TaskNode* goal = nullptr;
  for (const auto& n : nodes_) {
    if (n.is_goal) {
      if (goal) throw std::logic_error("TaskDag: multiple goal nodes");
      goal = &n;
    }
  }
  if (!goal) throw std::logic_error("TaskDag: no goal node");
  return *goal;
}

std::vector<NodeId> TaskDag::children_of(const NodeId& id) const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_) {
    for (const auto& parent : n.precondition.referenced()) {
      if (parent == id) {
        out.push_back(n.id);
        break;
      }
    }
  }
  return out;
}

std::map<NodeId, int> TaskDag::depths() const {
  std::map<NodeId, int> depth;
  // Kahn-style relaxation over the dependency edges.
  bool changed = true;
  size_t rounds = 0;
  for (const auto& n : nodes_)
    if (n.precondition.options.empty()) depth[n.id] = 0;
  while (changed) {
    if (++rounds > nodes_.size() + 1) return {};  // cycle
    changed = false;
    for (const auto& n : nodes_) {
      if (depth.count(n.id)) continue;
      int best = -1;
      bool all_known = true;
      for (const auto& parent : n.precondition.referenced()) {
        auto it = depth.find(parent);
        if (it == depth.end()) {
          all_known = false;
          break;
        }
        best = std::max(best, it->second);
      }
      if (all_known) {
        if (!find(n.id)) return {};
        depth[n.id] = best + 1;
        changed = true;
      }
    }
    if (depth.size() == nodes_.size()) break;
  }
  if (depth.size() != nodes_.size()) return {};  // cycle or bad reference
  return depth;
}

bool MoveSet::contains(Direction d) const {
  return std::find(directions.begin(), directions.end(), d) != directions.end();
}

MoveSet admissible_moves(const GridMap& map, Cell cell) {
  if (!map.traversable(cell)) throw std::invalid_argument("admissible_moves: cell not traversable");
  MoveSet out;
  for (Direction d : kDirections)
    if (map.traversable(neighbor_cell(cell, d))) out.directions.push_back(d);
  return out;
}

std::vector<int> distance_field(const GridMap& map, Cell src) {
  if (!map.traversable(src)) throw std::invalid_argument("distance_field: source not traversable");
  std::vector<int> dist(static_cast<size_t>(map.width()) * static_cast<size_t>(map.height()), -1);
  std::deque<Cell> queue;
  dist[map.index(src)] = 0;
  queue.push_back(src);
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    for (Direction d : kDirections) {
      Cell nb = neighbor_cell(c, d);
      if (map.traversable(nb) && dist[map.index(nb)] < 0) {
        dist[map.index(nb)] = dist[map.index(c)] + 1;
        queue.push_back(nb);
      }
    }
  }
  return dist;
}

int shortest_distance(const GridMap& map, Cell a, Cell b) {
  if (!map.traversable(a) || !map.traversable(b))
    throw std::invalid_argument("shortest_distance: endpoint not traversable");
  auto field = distance_field(map, a);
  int d = field[map.index(b)];
  if (d < 0) throw std::runtime_error("shortest_distance: unreachable pair");
  return d;
}

bool precondition_satisfied(const TaskNode& node, const std::set<NodeId>& achieved) {
  return node.precondition.satisfied(achieved);
}

ValidationReport validate_dag(const TaskDag& dag, const GridMap& map) {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.failures.push_back(std::move(msg)); };

  int goal_count = 0;
  const TaskNode* goal = nullptr;
  for (const auto& n : dag.nodes())
    if (n.is_goal) {
      ++goal_count;
      goal = &n;
    }
  if (goal_count != 1)
    fail("goal-count: expected exactly 1 goal node, found " + std::to_string(goal_count));

  std::set<NodeId> ids;
  for (const auto& n : dag.nodes())
    if (!ids.insert(n.id).second) fail("duplicate-id: " + n.id);

  std::map<Cell, NodeId> by_location;
  for (const auto& n : dag.nodes()) {
    if (!map.traversable(n.location)) fail("off-map: node " + n.id + " is not on a traversable cell");
    if (n.location == map.start()) fail("node-on-start: node " + n.id + " sits on the start cell");
    auto [it, inserted] = by_location.insert({n.location, n.id});
    if (!inserted) fail("duplicate-location: nodes " + it->second + " and " + n.id);
  }

  for (const auto& n : dag.nodes()) {
    for (const auto& option : n.precondition.options) {
      if (option.empty()) fail("empty-option: node " + n.id);
      for (const auto& parent : option) {
        if (parent == n.id) fail("self-reference: node " + n.id);
        if (!ids.count(parent)) fail("bad-reference: node " + n.id + " references " + parent);
      }
    }
  }

  if (dag.depths().empty() && !dag.nodes().empty()) fail("cycle: dependency graph is not acyclic");

  if (goal_count == 1) {
    // Reverse reachability from the goal over parent edges must cover all nodes.
    std::set<NodeId> reaches_goal{goal->id};
    std::deque<NodeId> queue{goal->id};
    while (!queue.empty()) {
      NodeId cur = queue.front();
      queue.pop_front();
      const TaskNode* node = dag.find(cur);
      if (!node) continue;
      for (const auto& parent : node->precondition.referenced())
        if (reaches_goal.insert(parent).second) queue.push_back(parent);
    }
    for (const auto& n : dag.nodes())
      if (!reaches_goal.count(n.id))
        fail("goal-connectivity: node " + n.id + " has no dependency path to the goal");
  }

  return report;
}

const std::vector<int>& DistanceOracle::field_from(Cell src) {
  auto it = fields_.find(src);
  if (it == fields_.end()) it = fields_.emplace(src, distance_field(*map_, src)).first;
  return it->second;
}

int DistanceOracle::distance(Cell a, Cell b) {
  int d = field_from(a)[map_->index(b)];
  if (d < 0) throw std::runtime_error("DistanceOracle: unreachable pair");
  return d;
}

}  // namespace taskgrid
