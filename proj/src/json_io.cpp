#include "taskgrid/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace taskgrid {

namespace {

ordered_json cell_to_json(Cell c) { return ordered_json::array({c.x, c.y}); }

Cell cell_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("expected [x, y] cell");
  return Cell{j[0].get<int>(), j[1].get<int>()};
}

ordered_json directions_to_json(const std::vector<Direction>& dirs) {
  ordered_json arr = ordered_json::array();
  for (Direction d : dirs) arr.push_back(direction_name(d));
  return arr;
}

std::vector<Direction> directions_from_json(const ordered_json& arr) {
  std::vector<Direction> out;
  for (const auto& item : arr) {
    auto d = parse_direction(item.get<std::string>());
    if (!d) throw std::runtime_error("bad direction: " + item.get<std::string>());
    out.push_back(*d);
  }
  return out;
}

Terminal terminal_from_string(const std::string& s) {
  if (s == "running") return Terminal::Running;
  if (s == "success") return Terminal::Success;
  if (s == "budget_exhausted") return Terminal::BudgetExhausted;
  throw std::runtime_error("bad terminal: " + s);
}

}  // namespace

ordered_json environment_to_json(const Environment& env) {
  ordered_json doc;
  doc["version"] = env.version;
  doc["seed"] = env.seed;

  ordered_json grid;
  grid["width"] = env.map.width();
  grid["height"] = env.map.height();
  grid["start"] = cell_to_json(env.map.start());
  ordered_json obstacles = ordered_json::array();
  for (Cell c : env.map.obstacle_cells()) obstacles.push_back(cell_to_json(c));
  grid["obstacles"] = obstacles;
  doc["grid"] = grid;

  ordered_json nodes = ordered_json::array();
  for (const auto& node : env.dag.nodes()) {
    ordered_json n;
    n["id"] = node.id;
    n["label"] = node.label;
    n["location"] = cell_to_json(node.location);
    ordered_json options = ordered_json::array();
    for (const auto& option : node.precondition.options) {
      ordered_json o = ordered_json::array();
      for (const auto& parent : option) o.push_back(parent);
      options.push_back(o);
    }
    n["options"] = options;
    n["goal"] = node.is_goal;
    nodes.push_back(n);
  }
  doc["nodes"] = nodes;
  doc["budget"] = env.budget;
  return doc;
}

Environment environment_from_json(const ordered_json& doc, const std::string& config_key) {
  int version = doc.at("version").get<int>();
  if (version != 1) throw std::runtime_error("unsupported environment version");
  uint64_t seed = doc.at("seed").get<uint64_t>();

  const auto& grid = doc.at("grid");
  int width = grid.at("width").get<int>();
  int height = grid.at("height").get<int>();
  Cell start = cell_from_json(grid.at("start"));
  std::vector<Cell> obstacles;
  for (const auto& item : grid.at("obstacles")) obstacles.push_back(cell_from_json(item));
  GridMap map = GridMap::from_obstacles(width, height, start, obstacles);
  if (!map.connected()) throw std::runtime_error("environment map is not connected");

  std::vector<TaskNode> nodes;
  for (const auto& item : doc.at("nodes")) {
    TaskNode node;
    node.id = item.at("id").get<std::string>();
    node.label = item.at("label").get<std::string>();
    node.location = cell_from_json(item.at("location"));
    for (const auto& option : item.at("options")) {
      std::vector<NodeId> parents;
      for (const auto& parent : option) parents.push_back(parent.get<std::string>());
      node.precondition.options.push_back(std::move(parents));
    }
    node.is_goal = item.at("goal").get<bool>();
    nodes.push_back(std::move(node));
  }

  Environment env{std::move(map), TaskDag(std::move(nodes)), doc.at("budget").get<int64_t>(),
                  seed, version, config_key};
  auto report = validate_dag(env.dag, env.map);
  if (!report.ok()) throw std::runtime_error("environment failed validation: " + report.failures.front());
  return env;
}

std::string environment_to_string(const Environment& env) {
  return environment_to_json(env).dump(2) + "\n";
}

void write_environment(const std::string& path, const Environment& env) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << environment_to_string(env);
}

Environment read_environment(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return environment_from_json(ordered_json::parse(buf.str()), stem);
}

ordered_json discovery_to_json(const Discovery& d) {
  ordered_json j;
  j["node_id"] = d.node_id;
  j["label"] = d.label;
  j["first_sight"] = d.first_sight;
  j["activated_now"] = d.activated_now;
  j["immediate"] = d.immediate;
  j["is_goal"] = d.is_goal;
  j["prereq_text"] = d.prereq_text;
  ordered_json options = ordered_json::array();
  for (const auto& option : d.option_labels) {
    ordered_json o = ordered_json::array();
    for (const auto& label : option) o.push_back(label);
    options.push_back(o);
  }
  j["option_labels"] = options;
  j["ancestors"] = d.ancestors;
  j["successors"] = d.successors;
  return j;
}

Discovery discovery_from_json(const ordered_json& doc) {
  Discovery d;
  d.node_id = doc.at("node_id").get<std::string>();
  d.label = doc.at("label").get<std::string>();
  d.first_sight = doc.at("first_sight").get<bool>();
  d.activated_now = doc.at("activated_now").get<bool>();
  d.immediate = doc.at("immediate").get<bool>();
  d.is_goal = doc.at("is_goal").get<bool>();
  d.prereq_text = doc.at("prereq_text").get<std::string>();
  for (const auto& option : doc.at("option_labels")) {
    std::vector<std::string> labels;
    for (const auto& label : option) labels.push_back(label.get<std::string>());
    d.option_labels.push_back(std::move(labels));
  }
  for (const auto& a : doc.at("ancestors")) d.ancestors.push_back(a.get<std::string>());
  for (const auto& s : doc.at("successors")) d.successors.push_back(s.get<std::string>());
  return d;
}


ordered_json metric_report_to_json(const MetricReport& report, bool per_step) {
  ordered_json doc;
  doc["success"] = report.success;
  doc["steps"] = report.steps;
  doc["exploration_error"] =
      report.exploration_error ? ordered_json(*report.exploration_error) : ordered_json(nullptr);
  doc["exploitation_error"] =
      report.exploitation_error ? ordered_json(*report.exploitation_error) : ordered_json(nullptr);
  ordered_json cases;
  cases["case1"] = report.case_counts[0];
  cases["case2"] = report.case_counts[1];
  cases["case3"] = report.case_counts[2];
  cases["case4"] = report.case_counts[3];
  doc["case_counts"] = cases;
  if (per_step) {
    ordered_json steps = ordered_json::array();
    for (const auto& v : report.per_step) {
      ordered_json s;
      s["t"] = v.t;
      s["case"] = static_cast<int>(v.case_id);
      s["gain"] = v.gain;
      s["progress"] = v.progress_event;
      s["stale_before"] = v.stale_before;
      s["stale_after"] = v.stale_after;
      s["c"] = v.seg_cyclomatic;
      s["e"] = v.seg_edge_excess;
      s["n"] = v.seg_node_excess;
      s["err"] = v.err;
      s["attribution"] = attribution_name(v.attribution);
      steps.push_back(s);
    }
    doc["per_step"] = steps;
  }
  return doc;
}

std::string trajectory_to_string(const Trajectory& traj) {
  std::string out;
  ordered_json header;
  header["type"] = "header";
  header["version"] = 1;
  header["seed"] = traj.episode_seed;
  header["agent"] = traj.agent;
  header["prompt_variant"] = traj.prompt_variant;
  header["harness"] = traj.harness;
  header["config"] = traj.config_key;
  if (!traj.failure.empty()) header["failure"] = traj.failure;
  header["environment"] = environment_to_json(traj.env);
  out += header.dump() + "\n";

  for (const auto& s : traj.steps) {
    ordered_json rec;
    rec["t"] = s.t;
    rec["position"] = cell_to_json(s.position);
    rec["action"] = s.action;
    rec["admissible"] = directions_to_json(s.admissible);
    rec["discovery"] = s.discovery ? discovery_to_json(*s.discovery) : ordered_json(nullptr);
    rec["events"] = s.events;
    rec["terminal"] = terminal_name(s.terminal);
    out += rec.dump() + "\n";
  }
  return out;
}

Trajectory trajectory_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trajectory");
  ordered_json header = ordered_json::parse(line);
  if (header.value("type", "") != "header") throw std::runtime_error("missing trajectory header");

  Trajectory traj{environment_from_json(header.at("environment"),
                                        header.value("config", "")),
                  header.at("seed").get<uint64_t>(),
                  header.value("agent", ""),
                  header.value("prompt_variant", ""),
                  header.value("harness", false),
                  header.value("config", ""),
                  {},
                  header.value("failure", "")};

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json rec = ordered_json::parse(line);
    TrajectoryStep s;
    s.t = rec.at("t").get<int>();
    s.position = cell_from_json(rec.at("position"));
    s.action = rec.at("action").get<std::string>();
    s.admissible = directions_from_json(rec.at("admissible"));
    if (!rec.at("discovery").is_null()) s.discovery = discovery_from_json(rec.at("discovery"));
    for (const auto& e : rec.at("events")) s.events.push_back(e.get<std::string>());
    s.terminal = terminal_from_string(rec.at("terminal").get<std::string>());
    traj.steps.push_back(std::move(s));
  }
  return traj;
}

void write_trajectory(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << trajectory_to_string(traj);
}

Trajectory read_trajectory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return trajectory_from_string(buf.str());
}

}  // namespace taskgrid
