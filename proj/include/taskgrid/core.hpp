#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace taskgrid {

// Grid coordinate. Convention: up = y+1, down = y-1, left = x-1, right = x+1.
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  // Ordering is (y, x); this is the tie-break order used everywhere.
  friend auto operator<=>(const Cell& a, const Cell& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

enum class Direction { Up, Down, Left, Right };

// Canonical iteration / tie-break order.
inline constexpr Direction kDirections[] = {Direction::Up, Direction::Down,
                                            Direction::Left, Direction::Right};

Cell neighbor_cell(Cell c, Direction d);
const char* direction_name(Direction d);
std::optional<Direction> parse_direction(const std::string& name);

// Set of traversable cells in a bounded 2D grid. Obstacles are the in-bounds
// complement of the traversable set.
class GridMap {
 public:
  GridMap(int width, int height, Cell start, const std::vector<Cell>& traversable);
  static GridMap from_obstacles(int width, int height, Cell start,
                                const std::vector<Cell>& obstacles);

  int width() const { return width_; }
  int height() const { return height_; }
  Cell start() const { return start_; }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
  }
  bool traversable(Cell c) const { return in_bounds(c) && open_[index(c)]; }
  size_t index(Cell c) const {
    return static_cast<size_t>(c.y) * static_cast<size_t>(width_) + static_cast<size_t>(c.x);
  }

  int traversable_count() const { return traversable_count_; }
  std::vector<Cell> traversable_cells() const;  // (y, x) order
  std::vector<Cell> obstacle_cells() const;     // (y, x) order

  // True if the traversable set is one 4-connected component containing start.
  bool connected() const;

 private:
  GridMap() = default;
  int width_ = 0;
  int height_ = 0;
  Cell start_{};
  std::vector<uint8_t> open_;
  int traversable_count_ = 0;
};

using NodeId = std::string;

// Disjunctive-normal-form precondition: satisfied iff some option has all of
// its parents achieved. Empty options list = no prerequisites.
struct Precondition {
  std::vector<std::vector<NodeId>> options;

  bool satisfied(const std::set<NodeId>& achieved) const;
  std::vector<NodeId> referenced() const;  // all parent ids, deduplicated
};

struct TaskNode {
  NodeId id;
  std::string label;
  Cell location{-1, -1};  // {-1,-1} while unassigned
  Precondition precondition;
  bool is_goal = false;
};

class TaskDag {
 public:
  TaskDag() = default;
  explicit TaskDag(std::vector<TaskNode> nodes);

  const std::vector<TaskNode>& nodes() const { return nodes_; }
  std::vector<TaskNode>& nodes() { return nodes_; }
  const TaskNode* find(const NodeId& id) const;
  const TaskNode& goal() const;  // throws if not exactly one goal

  // Children under the dependency relation (u is a parent in some option of v).
  std::vector<NodeId> children_of(const NodeId& id) const;

  // Depth per node: 0 for nodes without parents, else 1 + max parent depth.
  // Empty result if the dependency graph has a cycle or a bad reference.
  std::map<NodeId, int> depths() const;

 private:
  std::vector<TaskNode> nodes_;
};

struct ValidationReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

struct MoveSet {
  std::vector<Direction> directions;  // canonical order
  bool contains(Direction d) const;
};

// Directions whose neighbor cell is traversable. Throws if cell itself is not.
MoveSet admissible_moves(const GridMap& map, Cell cell);

// Shortest 4-connected path length within the traversable set. Distances are
// over the full map (oracle view), not the agent-known subgraph. Throws on
// non-traversable endpoints or unreachable pairs.
int shortest_distance(const GridMap& map, Cell a, Cell b);

// BFS distance field from src over the traversable set; -1 = unreachable.
std::vector<int> distance_field(const GridMap& map, Cell src);

bool precondition_satisfied(const TaskNode& node, const std::set<NodeId>& achieved);

// Structural checks: goal count, acyclicity, references, duplicate locations,
// node-on-start, off-map nodes, goal connectivity. Report lists each failure.
ValidationReport validate_dag(const TaskDag& dag, const GridMap& map);

// Memoizing full-map distance oracle; one BFS field per queried source.
class DistanceOracle {
 public:
  explicit DistanceOracle(const GridMap& map) : map_(&map) {}
  const std::vector<int>& field_from(Cell src);
  int distance(Cell a, Cell b);

 private:
  const GridMap* map_;
  std::map<Cell, std::vector<int>> fields_;
};

}  // namespace taskgrid
