#include "taskgrid/metric.hpp"

#include <algorithm>
#include <stdexcept>

namespace taskgrid {

const char* attribution_name(Attribution a) {
  switch (a) {
    case Attribution::None: return "none";
    case Attribution::Exploration: return "exploration";
    case Attribution::Exploitation: return "exploitation";
    case Attribution::Both: return "both";
  }
  throw std::logic_error("invalid attribution");
}

NoProgressSegment NoProgressSegment::fresh(Cell seed) {
  NoProgressSegment seg;
  seg.visits_[seed] = 1;
  return seg;
}

void NoProgressSegment::add_step(Cell from, Cell to) {
  int& visits = visits_[to];
  visits += 1;
  if (visits > 2) node_excess_ += 1;
  if (from == to) {
    // Stay-in-place: a visit but no edge, and no new vertex was introduced,
    // so the cyclomatic number is unchanged.
    return;
  }
  auto key = from < to ? std::make_pair(from, to) : std::make_pair(to, from);
  int& traversals = edges_[key];
  traversals += 1;
  if (traversals > 2) edge_excess_ += 1;
  cyclomatic_ = static_cast<long long>(edges_.size()) - static_cast<long long>(visits_.size()) + 1;
}

int NoProgressSegment::visit_count(Cell v) const {
  auto it = visits_.find(v);
  return it == visits_.end() ? 0 : it->second;
}

int NoProgressSegment::traversal_count(Cell a, Cell b) const {
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = edges_.find(key);
  return it == edges_.end() ? 0 : it->second;
}

NoProgressSegment advance_segment(const NoProgressSegment& seg, Cell from, Cell to,
                                  bool progress) {
  if (progress) return NoProgressSegment::fresh(to);
  NoProgressSegment next = seg;
  next.add_step(from, to);
  return next;
}

int step_error(bool progress, int gain, size_t target_count, long long stale_before,
               long long stale_after) {
  if (progress) return 0;
  if (gain == 0) return 1;
  if (target_count == 1) return 0;
  return stale_after > stale_before ? 1 : 0;
}

Attribution attribute_error(CaseId case_id, int err) {
  if (!err) return Attribution::None;
  switch (case_id) {
    case CaseId::Case1: return Attribution::Exploration;
    case CaseId::Case2:
    case CaseId::Case3: return Attribution::Exploitation;
    case CaseId::Case4: return Attribution::Both;
  }
  throw std::logic_error("invalid case");
}

TargetCase classify_case(const EpisodeState& state) {
  if (state.goal_achieved()) throw std::logic_error("classify_case: goal already achieved");

  auto pending = pending_set(state);
  auto unobserved = state.unobserved_cells();
  if (pending.empty() && unobserved.empty())
    throw std::logic_error("classify_case: pending set and unobserved set both empty");

  const auto& dag = state.env().dag;
  auto pending_cells = [&] {
    std::vector<Cell> cells;
    for (const auto& id : pending) cells.push_back(dag.find(id)->location);
    std::sort(cells.begin(), cells.end());
    return cells;
  };

  TargetCase out;
  if (pending.empty()) {
    out.id = CaseId::Case1;
    out.targets = unobserved;
  } else if (pending.count(dag.goal().id)) {
    out.id = CaseId::Case2;
    out.targets = {dag.goal().location};
  } else if (unobserved.empty()) {
    out.id = CaseId::Case3;
    out.targets = pending_cells();
  } else {
    out.id = CaseId::Case4;
    out.targets = pending_cells();
    out.targets.insert(out.targets.end(), unobserved.begin(), unobserved.end());
    std::sort(out.targets.begin(), out.targets.end());
  }
  return out;
}

int gain(const EpisodeState& state, Cell next_pos, const std::vector<Cell>& targets,
         DistanceOracle& distances) {
  for (Cell z : targets)
    if (z == next_pos) return 1;
  if (next_pos == state.position()) return 0;
  const auto& from_next = distances.field_from(next_pos);
  const auto& from_cur = distances.field_from(state.position());
  const auto& map = state.env().map;
  for (Cell z : targets)
    if (from_next[map.index(z)] < from_cur[map.index(z)]) return 1;
  return 0;
}

MetricReport evaluate_trajectory(const Environment& env, const Trajectory& log) {
  MetricReport report;
  DistanceOracle distances(env.map);

  auto [state, obs0] = reset(env);
  NoProgressSegment segment = NoProgressSegment::fresh(state.position());

  for (size_t i = 0; i < log.steps.size(); ++i) {
    const TrajectoryStep& rec = log.steps[i];
    const int record_index = static_cast<int>(i);
    if (state.terminal() != Terminal::Running)
      throw ReplayError(record_index, "trajectory continues after terminal state");

    auto dir = parse_direction(rec.action);
    if (!dir) throw ReplayError(record_index, "unparseable action '" + rec.action + "'");

    TargetCase tc = classify_case(state);
    Cell from = state.position();
    bool admissible = admissible_moves(env.map, from).contains(*dir);
    Cell to = admissible ? neighbor_cell(from, *dir) : from;

    bool enters_unobserved = admissible && state.cell_state(to) != CellState::Observed;
    int g = gain(state, to, tc.targets, distances);

    Observation obs = admissible ? step(state, *dir) : step_stay(state);

    std::vector<std::string> events;
    if (!admissible) events.push_back("noop");
    if (obs.discovery) {
      if (obs.discovery->first_sight) events.push_back("discovered:" + obs.discovery->node_id);
      if (obs.discovery->activated_now) events.push_back("achieved:" + obs.discovery->node_id);
    }

    bool achieved_any = obs.discovery && obs.discovery->activated_now;
    bool progress = enters_unobserved || achieved_any;

    StepVerdict verdict;
    verdict.t = state.timestep();
    verdict.case_id = tc.id;
    verdict.gain = g;
    verdict.progress_event = progress;
    verdict.stale_before = segment.stale_score();
    if (progress)
      segment = NoProgressSegment::fresh(to);
    else
      segment.add_step(from, to);
    verdict.stale_after = segment.stale_score();
    verdict.err = step_error(progress, g, tc.targets.size(), verdict.stale_before,
                             verdict.stale_after);
    verdict.seg_cyclomatic = segment.cyclomatic();
    verdict.seg_edge_excess = segment.edge_excess();
    verdict.seg_node_excess = segment.node_excess();
    verdict.attribution = attribute_error(tc.id, verdict.err);

    // The log must agree with the replayed episode.
    if (rec.position != state.position())
      throw ReplayError(record_index, "position mismatch");
    if (rec.t != state.timestep()) throw ReplayError(record_index, "timestep mismatch");
    if (rec.admissible != obs.admissible) throw ReplayError(record_index, "admissible mismatch");
    if (rec.events != events) throw ReplayError(record_index, "event mismatch");
    if (rec.terminal != state.terminal()) throw ReplayError(record_index, "terminal mismatch");

    report.case_counts[static_cast<size_t>(tc.id) - 1] += 1;
    report.per_step.push_back(verdict);
  }

  report.success = state.terminal() == Terminal::Success;
  report.steps = state.timestep();

  int explore_steps = 0, explore_errors = 0, exploit_steps = 0, exploit_errors = 0;
  for (const auto& v : report.per_step) {
    bool explore = v.case_id == CaseId::Case1 || v.case_id == CaseId::Case4;
    bool exploit = v.case_id != CaseId::Case1;
    if (explore) {
      explore_steps += 1;
      explore_errors += v.err;
    }
    if (exploit) {
      exploit_steps += 1;
      exploit_errors += v.err;
    }
  }
  if (explore_steps > 0)
    report.exploration_error = static_cast<double>(explore_errors) / explore_steps;
  if (exploit_steps > 0)
    report.exploitation_error = static_cast<double>(exploit_errors) / exploit_steps;
  return report;
}

}  // namespace taskgrid
