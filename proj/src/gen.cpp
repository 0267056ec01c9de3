#include "taskgrid/gen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace taskgrid {

namespace {

constexpr int kRetryLimit = 64;

const char kTokenAlphabet[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
// Goal ids always use G; other nodes draw from the rest.
const char kIdLetters[] = "ABCDEFHIJKLMNOPQRSTUVWXYZ";

int draw_count(const CountProbs& probs, Rng& rng) {
  std::vector<double> weights;
  std::vector<int> values;
  for (const auto& [value, p] : probs) {
    values.push_back(value);
    weights.push_back(p);
  }
  return values[rng.weighted_index(weights)];
}

// Count draw constrained to the number of available candidates.
int draw_feasible_count(const CountProbs& probs, size_t available, Rng& rng) {
  for (int attempt = 0; attempt < kRetryLimit; ++attempt) {
    int c = draw_count(probs, rng);
    if (static_cast<size_t>(c) <= available) return c;
  }
  throw std::runtime_error("sample_task_dag: dependency count exceeds available parents after " +
                           std::to_string(kRetryLimit) + " retries");
}

bool probs_valid(const CountProbs& probs) {
  if (probs.empty()) return false;
  double total = 0.0;
  for (const auto& [value, p] : probs) {
    if (value < 1 || p < 0.0) return false;
    total += p;
  }
  return std::abs(total - 1.0) < 1e-9;
}

std::string format_two_digits(int v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}

bool is_monotone_run(const std::string& token) {
  auto ord = [](char ch) {
    return static_cast<int>(std::string_view(kTokenAlphabet).find(ch));
  };
  bool asc = true, desc = true;
  for (size_t i = 1; i < token.size(); ++i) {
    int step = ord(token[i]) - ord(token[i - 1]);
    asc = asc && step == 1;
    desc = desc && step == -1;
  }
  return asc || desc;
}

}  // namespace

int GenConfig::node_count() const {
  switch (dag_size) {
    case DagSize::Small: return 4;
    case DagSize::Medium: return 6;
    case DagSize::Large: return 8;
  }
  throw std::logic_error("invalid dag size");
}

double GenConfig::density() const {
  switch (exploit_demand) {
    case ExploitDemand::Low: return 0.1;
    case ExploitDemand::Medium: return 0.4;
    case ExploitDemand::High: return 0.4;
  }
  throw std::logic_error("invalid exploit demand");
}

std::pair<int, int> GenConfig::corridor_width_range() const {
  // Width pairs with the exploration demand implied by the density: sparse
  // maps (low exploitation = high exploration) get wide 2-3 corridors, dense
  // maps narrow 1-wide ones.
  switch (exploit_demand) {
    case ExploitDemand::Low: return {2, 3};
    case ExploitDemand::Medium: return {1, 3};
    case ExploitDemand::High: return {1, 1};
  }
  throw std::logic_error("invalid exploit demand");
}

double GenConfig::open_keep_prob() const {
  // Obstacles are placed into the open grid rather than the grid being carved
  // from solid: cells off the corridor skeleton survive with this probability.
  // Dense maps stay mostly open (their tiny grids leave no room for both an
  // 8-node DAG and heavy obstruction within the alpha*|O| step budget).
  switch (exploit_demand) {
    case ExploitDemand::Low: return 0.1;
    case ExploitDemand::Medium: return 0.4;
    case ExploitDemand::High: return 0.8;
  }
  throw std::logic_error("invalid exploit demand");
}

CountProbs GenConfig::effective_option_probs() const {
  if (!option_count_probs.empty()) return option_count_probs;
  switch (difficulty) {
    case Difficulty::Easy: return {{1, 1.0}};
    case Difficulty::Medium: return {{1, 0.8}, {2, 0.2}};
    case Difficulty::Hard: return {{1, 0.6}, {2, 0.4}};
  }
  throw std::logic_error("invalid difficulty");
}

CountProbs GenConfig::effective_dependency_probs() const {
  if (!dependency_count_probs.empty()) return dependency_count_probs;
  switch (difficulty) {
    case Difficulty::Easy:
    case Difficulty::Medium: return {{1, 0.5}, {2, 0.5}};
    case Difficulty::Hard: return {{1, 1.0 / 3}, {2, 1.0 / 3}, {3, 1.0 / 3}};
  }
  throw std::logic_error("invalid difficulty");
}

CountProbs GenConfig::effective_goal_dependency_probs() const {
  if (!goal_dependency_count_probs.empty()) return goal_dependency_count_probs;
  return effective_dependency_probs();
}

std::string GenConfig::preset_key() const {
  return std::string(dag_size_name(dag_size)) + "-" + exploit_demand_name(exploit_demand) + "-" +
         difficulty_name(difficulty) + "-" + label_mode_name(label_mode);
}

std::vector<std::string> GenConfig::validate() const {
  std::vector<std::string> errors;
  if (!probs_valid(effective_option_probs()))
    errors.push_back("option_count_probs must be non-empty and sum to 1");
  if (!probs_valid(effective_dependency_probs()))
    errors.push_back("dependency_count_probs must be non-empty and sum to 1");
  if (!probs_valid(effective_goal_dependency_probs()))
    errors.push_back("goal_dependency_count_probs must be non-empty and sum to 1");
  if (!(budget_multiplier > 0.0)) errors.push_back("budget_multiplier must be > 0");
  if (layer_cap < 1) errors.push_back("layer_cap must be >= 1");
  if (!(aspect_ratio > 0.0)) errors.push_back("aspect_ratio must be > 0");
  if (!(parent_depth_bias >= 0.0)) errors.push_back("parent_depth_bias must be >= 0");
  return errors;
}

const char* dag_size_name(DagSize s) {
  switch (s) {
    case DagSize::Small: return "small";
    case DagSize::Medium: return "medium";
    case DagSize::Large: return "large";
  }
  throw std::logic_error("invalid dag size");
}

const char* exploit_demand_name(ExploitDemand d) {
  switch (d) {
    case ExploitDemand::Low: return "low";
    case ExploitDemand::Medium: return "medium";
    case ExploitDemand::High: return "high";
  }
  throw std::logic_error("invalid exploit demand");
}

const char* difficulty_name(Difficulty d) {
  switch (d) {
    case Difficulty::Easy: return "easy";
    case Difficulty::Medium: return "medium";
    case Difficulty::Hard: return "hard";
  }
  throw std::logic_error("invalid difficulty");
}

const char* label_mode_name(LabelMode m) {
  return m == LabelMode::Symbolic ? "symbolic" : "semantic";
}

double parent_depth_weight(int parent_depth, int child_depth, double beta) {
  return std::exp(-beta * static_cast<double>((child_depth - 1) - parent_depth));
}

size_t sample_parent_index(const std::vector<int>& candidate_depths, int child_depth,
                           double beta, Rng& rng) {
  std::vector<double> weights;
  weights.reserve(candidate_depths.size());
  for (int d : candidate_depths) weights.push_back(parent_depth_weight(d, child_depth, beta));
  return rng.weighted_index(weights);
}

TaskDag sample_task_dag(const GenConfig& config, Rng& rng) {
  auto errors = config.validate();
  if (!errors.empty()) throw std::invalid_argument("sample_task_dag: " + errors.front());

  const int n = config.node_count();
  const CountProbs option_probs = config.effective_option_probs();
  const CountProbs dep_probs = config.effective_dependency_probs();
  const CountProbs goal_dep_probs = config.effective_goal_dependency_probs();

  // Layer partition: non-goal nodes fill layers 0..D-1, the goal sits alone at D.
  std::vector<int> layer_sizes;
  int remaining = n - 1;
  while (remaining > 0) {
    int s = static_cast<int>(rng.uniform_int(1, std::min(config.layer_cap, remaining)));
    layer_sizes.push_back(s);
    remaining -= s;
  }
  const int goal_depth = static_cast<int>(layer_sizes.size());

  std::vector<TaskNode> nodes;
  std::vector<int> node_depth;
  std::vector<std::vector<size_t>> by_layer(static_cast<size_t>(goal_depth) + 1);

  auto make_id = [&](bool goal, int index) {
    if (goal) return std::string("G_00");
    char letter = kIdLetters[rng.uniform_index(sizeof(kIdLetters) - 1)];
    return std::string(1, letter) + "_" + format_two_digits(index);
  };

  // Parents for one option. The first parent of a node's first option comes
  // uniformly from the previous layer so that recomputed depths match the
  // assigned layers; every other slot uses the exponential depth weighting.
  auto sample_option = [&](int child_depth, bool first_option) {
    std::vector<size_t> candidates;
    for (int d = 0; d < child_depth; ++d)
      for (size_t idx : by_layer[static_cast<size_t>(d)]) candidates.push_back(idx);

    const CountProbs& probs = child_depth == goal_depth ? goal_dep_probs : dep_probs;
    int count = draw_feasible_count(probs, candidates.size(), rng);

    std::vector<size_t> chosen;
    if (first_option) {
      const auto& prev = by_layer[static_cast<size_t>(child_depth - 1)];
      chosen.push_back(prev[rng.uniform_index(prev.size())]);
    }
    while (static_cast<int>(chosen.size()) < count) {
      std::vector<size_t> pool;
      std::vector<int> pool_depths;
      for (size_t idx : candidates)
        if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) {
          pool.push_back(idx);
          pool_depths.push_back(node_depth[idx]);
        }
      chosen.push_back(pool[sample_parent_index(pool_depths, child_depth, config.parent_depth_bias, rng)]);
    }

    std::vector<NodeId> option;
    option.reserve(chosen.size());
    for (size_t idx : chosen) option.push_back(nodes[idx].id);
    std::sort(option.begin(), option.end());
    return option;
  };

  int next_index = 1;
  for (int depth = 0; depth <= goal_depth; ++depth) {
    const bool is_goal_layer = depth == goal_depth;
    const int layer_size = is_goal_layer ? 1 : layer_sizes[static_cast<size_t>(depth)];
    for (int k = 0; k < layer_size; ++k) {
      TaskNode node;
      node.is_goal = is_goal_layer;
      node.id = make_id(node.is_goal, next_index);
      if (!node.is_goal) ++next_index;
      if (depth > 0) {
        int option_count = draw_count(option_probs, rng);
        for (int j = 0; j < option_count; ++j)
          node.precondition.options.push_back(sample_option(depth, j == 0));
      }
      node_depth.push_back(depth);
      by_layer[static_cast<size_t>(depth)].push_back(nodes.size());
      nodes.push_back(std::move(node));
    }
  }

  TaskDag dag(std::move(nodes));

  // Goal repair: nodes with no dependency path to the goal are appended to one
  // of the goal's options.
  auto reaches_goal = [&dag]() {
    std::set<NodeId> reached{dag.goal().id};
    std::deque<NodeId> queue{dag.goal().id};
    while (!queue.empty()) {
      const TaskNode* node = dag.find(queue.front());
      queue.pop_front();
      for (const auto& parent : node->precondition.referenced())
        if (reached.insert(parent).second) queue.push_back(parent);
    }
    return reached;
  };
  auto reached = reaches_goal();
  for (auto& node : dag.nodes()) {
    if (reached.count(node.id)) continue;
    for (auto& goal_node : dag.nodes()) {
      if (!goal_node.is_goal) continue;
      auto& option =
          goal_node.precondition.options[rng.uniform_index(goal_node.precondition.options.size())];
      option.push_back(node.id);
      std::sort(option.begin(), option.end());
    }
    reached = reaches_goal();
  }

  return dag;
}

const std::vector<std::string>& semantic_name_table() {
  static const std::vector<std::string> table = {
      "Pasta",
      "Tomato Sauce",
      "Tomato Pasta",
      "Cheese",
      "Tomato Pasta with Cheese",
      "Olive Oil",
      "Garlic",
      "Basil",
      "Parmesan",
      "Penne",
      "Marinara",
      "Garlic Bread",
  };
  return table;
}

std::vector<std::string> generate_labels(int count, LabelMode mode, Rng& rng) {
  if (count < 1) throw std::invalid_argument("generate_labels: count must be >= 1");
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(count));
  if (mode == LabelMode::Semantic) {
    const auto& table = semantic_name_table();
    if (static_cast<size_t>(count) > table.size())
      throw std::runtime_error("generate_labels: semantic table has only " +
                               std::to_string(table.size()) + " names");
    out.assign(table.begin(), table.begin() + count);
    return out;
  }
  std::set<std::string> used;
  const size_t alphabet = sizeof(kTokenAlphabet) - 1;
  while (out.size() < static_cast<size_t>(count)) {
    std::string token;
    for (int i = 0; i < 4; ++i) token.push_back(kTokenAlphabet[rng.uniform_index(alphabet)]);
    if (is_monotone_run(token) || !used.insert(token).second) continue;
    out.push_back(std::move(token));
  }
  return out;
}

std::pair<int, int> choose_grid_dims(int node_count, double density, double aspect) {
  const int target = static_cast<int>(std::ceil(static_cast<double>(node_count) / density));
  const int max_w = std::max(target, static_cast<int>(std::ceil(target * std::max(1.0, aspect))));
  int best_w = 1, best_h = target;
  double best_score = std::abs(std::log(1.0 / target) - std::log(aspect));
  for (int w = 2; w <= max_w; ++w) {
    int h = (target + w - 1) / w;
    double score = std::abs(std::log(static_cast<double>(w) / h) - std::log(aspect));
    if (score < best_score - 1e-12 || (std::abs(score - best_score) <= 1e-12 && w > best_w)) {
      best_score = score;
      best_w = w;
      best_h = h;
    }
  }
  return {best_w, best_h};
}

GridMap place_on_grid(TaskDag& dag, const GenConfig& config, Rng& rng, PlacementTrace* trace) {
  const int n = static_cast<int>(dag.nodes().size());
  auto [width, height] = choose_grid_dims(n, config.density(), config.aspect_ratio);
  const auto [min_width_pref, max_width_pref] = config.corridor_width_range();

  if (static_cast<int64_t>(width) * height < n + 1)
    throw std::runtime_error("place_on_grid: grid too small for nodes plus start");

  for (int attempt = 0; attempt < kRetryLimit; ++attempt) {
    if (trace) *trace = PlacementTrace{};
    // Scatter start + node cells over the grid.
    std::vector<Cell> all_cells;
    all_cells.reserve(static_cast<size_t>(width) * height);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) all_cells.push_back({x, y});
    rng.shuffle(all_cells);

    Cell start = all_cells[0];
    std::vector<Cell> node_cells(all_cells.begin() + 1, all_cells.begin() + 1 + n);

    std::vector<uint8_t> open(static_cast<size_t>(width) * height, 0);
    auto idx = [&](Cell c) { return static_cast<size_t>(c.y) * width + c.x; };
    auto in_bounds = [&](Cell c) { return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height; };
    open[idx(start)] = 1;

    // Randomized shortest-path spine from each node cell to the carved region,
    // widened by the sampled corridor width.
    std::vector<size_t> order(node_cells.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    for (size_t oi : order) {
      Cell target = node_cells[oi];
      if (open[idx(target)]) continue;

      // Multi-source BFS from the carved region over the full grid.
      std::vector<int> dist(static_cast<size_t>(width) * height, -1);
      std::deque<Cell> queue;
      for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
          if (open[idx({x, y})]) {
            dist[idx({x, y})] = 0;
            queue.push_back({x, y});
          }
      while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        for (Direction d : kDirections) {
          Cell nb = neighbor_cell(c, d);
          if (in_bounds(nb) && dist[idx(nb)] < 0) {
            dist[idx(nb)] = dist[idx(c)] + 1;
            queue.push_back(nb);
          }
        }
      }

      // Walk downhill from the node cell with random tie-breaking.
      std::vector<Cell> path{target};
      Cell cur = target;
      while (dist[idx(cur)] != 0) {
        std::vector<Cell> next;
        for (Direction d : kDirections) {
          Cell nb = neighbor_cell(cur, d);
          if (in_bounds(nb) && dist[idx(nb)] == dist[idx(cur)] - 1) next.push_back(nb);
        }
        cur = next[rng.uniform_index(next.size())];
        path.push_back(cur);
      }

      int corridor_width = static_cast<int>(rng.uniform_int(min_width_pref, max_width_pref));
      bool widen_positive = rng.uniform_index(2) == 0;
      for (size_t i = 0; i < path.size(); ++i) {
        open[idx(path[i])] = 1;
        if (corridor_width < 2) continue;
        // Perpendicular offsets relative to the travel direction.
        Cell prev = i > 0 ? path[i - 1] : path[i];
        Cell cell = path[i];
        bool horizontal_move = i > 0 ? prev.y == cell.y : true;
        Cell side_a = horizontal_move ? Cell{cell.x, cell.y + 1} : Cell{cell.x + 1, cell.y};
        Cell side_b = horizontal_move ? Cell{cell.x, cell.y - 1} : Cell{cell.x - 1, cell.y};
        Cell first = widen_positive ? side_a : side_b;
        Cell second = widen_positive ? side_b : side_a;
        if (in_bounds(first) && !open[idx(first)]) {
          open[idx(first)] = 1;
          if (trace) trace->widened_cells += 1;
        }
        if (corridor_width >= 3 && in_bounds(second) && !open[idx(second)]) {
          open[idx(second)] = 1;
          if (trace) trace->widened_cells += 1;
        }
      }
      if (trace) {
        trace->spines.push_back(path);
        trace->widths.push_back(corridor_width);
      }
    }

    // Off-corridor cells survive with the preset's keep probability.
    double keep = config.open_keep_prob();
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        Cell c{x, y};
        if (!open[idx(c)] && keep > 0.0 && rng.uniform01() < keep) open[idx(c)] = 1;
      }

    std::vector<Cell> traversable;
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        if (open[idx({x, y})]) traversable.push_back({x, y});

    GridMap map(width, height, start, traversable);
    if (!map.connected()) continue;

    // Start must stay node-free; the scatter already guarantees distinctness.
    bool start_clear = true;
    for (Cell c : node_cells)
      if (c == start) start_clear = false;
    if (!start_clear) continue;

    for (size_t i = 0; i < dag.nodes().size(); ++i) dag.nodes()[i].location = node_cells[i];
    return map;
  }
  throw std::runtime_error("place_on_grid: no valid placement after " +
                           std::to_string(kRetryLimit) + " attempts");
}

int64_t compute_budget(const GridMap& map, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("compute_budget: alpha must be > 0");
  return static_cast<int64_t>(std::floor(alpha * static_cast<double>(map.traversable_count())));
}

Environment generate_environment(const GenConfig& config) {
  Rng rng(config.seed);
  TaskDag dag = sample_task_dag(config, rng);
  auto labels = generate_labels(static_cast<int>(dag.nodes().size()), config.label_mode, rng);
  for (size_t i = 0; i < dag.nodes().size(); ++i) dag.nodes()[i].label = labels[i];
  GridMap map = place_on_grid(dag, config, rng);

  auto report = validate_dag(dag, map);
  if (!report.ok())
    throw std::runtime_error("generate_environment: validation failed: " + report.failures.front());

  int64_t budget = compute_budget(map, config.budget_multiplier);
  Environment env{std::move(map), std::move(dag), budget, config.seed, 1, config.preset_key()};
  return env;
}

}  // namespace taskgrid
