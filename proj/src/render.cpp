#include "taskgrid/render.hpp"

#include <stdexcept>

namespace taskgrid {

namespace {

struct FrameContext {
  const Environment& env;
  const EpisodeState& state;
  const std::vector<Cell>& path;  // positions p(0)..p(t)
  int t;
  const StepVerdict* verdict;  // null at t = 0
};

std::string readout_line(const FrameContext& ctx) {
  std::string line = "t=" + std::to_string(ctx.t);
  if (ctx.verdict) {
    line += " case=" + std::to_string(static_cast<int>(ctx.verdict->case_id));
    line += " gain=" + std::to_string(ctx.verdict->gain);
    line += ctx.verdict->progress_event ? " progress=1" : " progress=0";
    line += " err=" + std::to_string(ctx.verdict->err);
    line += " c=" + std::to_string(ctx.verdict->seg_cyclomatic);
    line += " e=" + std::to_string(ctx.verdict->seg_edge_excess);
    line += " n=" + std::to_string(ctx.verdict->seg_node_excess);
    line += " S=" + std::to_string(ctx.verdict->stale_after);
  } else {
    line += " case=- gain=- progress=- err=- c=0 e=0 n=0 S=0";
  }
  return line;
}

char cell_char(const FrameContext& ctx, Cell c) {
  const auto& map = ctx.env.map;
  if (c == ctx.state.position()) return '@';
  if (!map.traversable(c)) return '#';
  for (const auto& node : ctx.env.dag.nodes()) {
    if (node.location != c) continue;
    switch (ctx.state.node_status(node.id)) {
      case NodeStatus::Undiscovered: return node.is_goal ? 'N' : 'n';
      case NodeStatus::Discovered: return node.is_goal ? 'D' : 'd';
      case NodeStatus::Achieved: return node.is_goal ? 'A' : 'a';
    }
  }
  if (c == map.start()) return 'S';
  switch (ctx.state.cell_state(c)) {
    case CellState::Observed: return '.';
    case CellState::Unobserved: return 'o';
    case CellState::Unknown: return ' ';
  }
  return ' ';
}

std::string ascii_frame(const FrameContext& ctx) {
  const auto& map = ctx.env.map;
  std::string out = readout_line(ctx) + "\n";
  std::string border = "+" + std::string(static_cast<size_t>(map.width()), '-') + "+\n";
  out += border;
  for (int y = map.height() - 1; y >= 0; --y) {
    out += '|';
    for (int x = 0; x < map.width(); ++x) out += cell_char(ctx, {x, y});
    out += "|\n";
  }
  out += border;
  return out;
}

std::string svg_frame(const FrameContext& ctx) {
  const auto& map = ctx.env.map;
  const int cell = 24;
  const int header = 20;
  const int w = map.width() * cell;
  const int h = map.height() * cell + header;
  auto px = [&](Cell c) { return c.x * cell; };
  // y axis flips: row 0 is drawn at the bottom.
  auto py = [&](Cell c) { return header + (map.height() - 1 - c.y) * cell; };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
                    "\" height=\"" + std::to_string(h) + "\">\n";
  out += "<text x=\"2\" y=\"14\" font-family=\"monospace\" font-size=\"12\">" +
         readout_line(ctx) + "</text>\n";

  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      Cell c{x, y};
      std::string fill = "#444444";  // obstacle
      if (map.traversable(c)) {
        switch (ctx.state.cell_state(c)) {
          case CellState::Observed: fill = "#ffffff"; break;
          case CellState::Unobserved: fill = "#bcd9f0"; break;
          case CellState::Unknown: fill = "#d9d9d9"; break;
        }
      }
      out += "<rect x=\"" + std::to_string(px(c)) + "\" y=\"" + std::to_string(py(c)) +
             "\" width=\"" + std::to_string(cell) + "\" height=\"" + std::to_string(cell) +
             "\" fill=\"" + fill + "\" stroke=\"#888888\"/>\n";
    }
  }

  if (ctx.path.size() > 1) {
    std::string points;
    for (Cell c : ctx.path) {
      points += std::to_string(px(c) + cell / 2) + "," + std::to_string(py(c) + cell / 2) + " ";
    }
    out += "<polyline points=\"" + points +
           "\" fill=\"none\" stroke=\"#9467bd\" stroke-width=\"2\" stroke-dasharray=\"4 2\"/>\n";
  }

  for (const auto& node : ctx.env.dag.nodes()) {
    std::string fill = "#c0c0c0";
    switch (ctx.state.node_status(node.id)) {
      case NodeStatus::Undiscovered: fill = "#c0c0c0"; break;
      case NodeStatus::Discovered: fill = "#f2c744"; break;
      case NodeStatus::Achieved: fill = "#5cb85c"; break;
    }
    std::string stroke = node.is_goal ? "#d62728" : "#333333";
    out += "<circle cx=\"" + std::to_string(px(node.location) + cell / 2) + "\" cy=\"" +
           std::to_string(py(node.location) + cell / 2) + "\" r=\"" + std::to_string(cell / 3) +
           "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + std::to_string(px(node.location) + 2) + "\" y=\"" +
           std::to_string(py(node.location) + 10) + "\" font-family=\"monospace\" font-size=\"8\">" +
           node.label + "</text>\n";
  }

  Cell agent = ctx.state.position();
  out += "<circle cx=\"" + std::to_string(px(agent) + cell / 2) + "\" cy=\"" +
         std::to_string(py(agent) + cell / 2) + "\" r=\"" + std::to_string(cell / 4) +
         "\" fill=\"#1f77b4\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace

const char* render_extension(RenderBackend backend) {
  return backend == RenderBackend::Ascii ? "txt" : "svg";
}

std::vector<std::string> render_frames(const Environment& env, const Trajectory& traj,
                                       RenderBackend backend) {
  MetricReport report = evaluate_trajectory(env, traj);

  std::vector<std::string> frames;
  auto [state, obs] = reset(env);
  std::vector<Cell> path{state.position()};

  auto emit = [&](int t, const StepVerdict* verdict) {
    FrameContext ctx{env, state, path, t, verdict};
    frames.push_back(backend == RenderBackend::Ascii ? ascii_frame(ctx) : svg_frame(ctx));
  };

  emit(0, nullptr);
  for (size_t i = 0; i < traj.steps.size(); ++i) {
    const auto& rec = traj.steps[i];
    auto dir = parse_direction(rec.action);
    if (dir && admissible_moves(env.map, state.position()).contains(*dir))
      step(state, *dir);
    else
      step_stay(state);
    path.push_back(state.position());
    emit(static_cast<int>(i) + 1, &report.per_step[i]);
  }
  return frames;
}

}  // namespace taskgrid
