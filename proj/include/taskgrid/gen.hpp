#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "taskgrid/core.hpp"
#include "taskgrid/rng.hpp"

namespace taskgrid {

enum class DagSize { Small, Medium, Large };          // 4 / 6 / 8 nodes
enum class ExploitDemand { Low, Medium, High };       // density 0.1 / 0.25 / 0.4
enum class Difficulty { Easy, Medium, Hard };
enum class LabelMode { Symbolic, Semantic };

using CountProbs = std::map<int, double>;

struct GenConfig {
  DagSize dag_size = DagSize::Small;
  ExploitDemand exploit_demand = ExploitDemand::Medium;
  Difficulty difficulty = Difficulty::Medium;

  // Empty tables fall back to the difficulty presets.
  CountProbs option_count_probs;
  CountProbs dependency_count_probs;
  CountProbs goal_dependency_count_probs;

  double parent_depth_bias = 1.0;   // beta
  double aspect_ratio = 1.0;
  double budget_multiplier = 3.0;   // alpha
  int layer_cap = 3;
  LabelMode label_mode = LabelMode::Symbolic;
  uint64_t seed = 0;

  int node_count() const;
  double density() const;
  std::pair<int, int> corridor_width_range() const;  // inclusive
  double open_keep_prob() const;  // survival prob of off-corridor cells

  CountProbs effective_option_probs() const;
  CountProbs effective_dependency_probs() const;
  CountProbs effective_goal_dependency_probs() const;

  // Human-readable preset key, e.g. "small-medium-easy-symbolic".
  std::string preset_key() const;

  // Empty vector = valid.
  std::vector<std::string> validate() const;
};

const char* dag_size_name(DagSize s);
const char* exploit_demand_name(ExploitDemand d);
const char* difficulty_name(Difficulty d);
const char* label_mode_name(LabelMode m);

struct Environment {
  GridMap map;
  TaskDag dag;
  int64_t budget = 0;
  uint64_t seed = 0;
  int version = 1;
  std::string config_key;  // preset key when generated, file stem when loaded
};

// DAG structure sampling; locations stay unassigned ({-1,-1}).
TaskDag sample_task_dag(const GenConfig& config, Rng& rng);

// Symbolic: distinct 4-char uppercase alphanumeric tokens, rejecting monotone
// character runs. Semantic: the first `count` entries of the bundled table.
std::vector<std::string> generate_labels(int count, LabelMode mode, Rng& rng);

const std::vector<std::string>& semantic_name_table();

// Integer grid dimensions: minimal-height factorizations w x ceil(target/w)
// scored by |log(w/h) - log(aspect)|, ties toward larger width.
std::pair<int, int> choose_grid_dims(int node_count, double density, double aspect);

// Carving introspection for tests and diagnostics.
struct PlacementTrace {
  std::vector<std::vector<Cell>> spines;  // 1-wide shortest-path cells per corridor
  std::vector<int> widths;                // sampled width per corridor
  int widened_cells = 0;                  // cells added beyond the spines
};

// Assigns node locations and carves corridors; returns the resulting map.
GridMap place_on_grid(TaskDag& dag, const GenConfig& config, Rng& rng,
                      PlacementTrace* trace = nullptr);

int64_t compute_budget(const GridMap& map, double alpha);

Environment generate_environment(const GenConfig& config);

// Exponential parent-depth weight: exp(-beta * ((child_depth - 1) - parent_depth)).
double parent_depth_weight(int parent_depth, int child_depth, double beta);

// One weighted parent draw among candidate depths; exposed for direct
// distribution testing.
size_t sample_parent_index(const std::vector<int>& candidate_depths, int child_depth,
                           double beta, Rng& rng);

}  // namespace taskgrid
