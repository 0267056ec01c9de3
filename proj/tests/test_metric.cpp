#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "taskgrid/driver.hpp"
#include "taskgrid/json_io.hpp"
#include "taskgrid/metric.hpp"
#include "test_helpers.hpp"

using namespace taskgrid;
using namespace taskgrid::testing;

namespace {

struct SegmentRow {
  Cell pos;
  long long c, e, n, s;
};

// Feeds a walk (starting at row 0's position) through the segment and checks
// every (c, e, n, S) entry.
void check_segment_table(const std::vector<SegmentRow>& rows) {
  NoProgressSegment seg = NoProgressSegment::fresh(rows[0].pos);
  CHECK(seg.stale_score() == rows[0].s);
  for (size_t i = 1; i < rows.size(); ++i) {
    seg = advance_segment(seg, rows[i - 1].pos, rows[i].pos, false);
    INFO("row ", i);
    CHECK(seg.cyclomatic() == rows[i].c);
    CHECK(seg.edge_excess() == rows[i].e);
    CHECK(seg.node_excess() == rows[i].n);
    CHECK(seg.stale_score() == rows[i].s);
  }
}

// Applies one step to an episode and builds the log record the driver would
// have written.
TrajectoryStep apply_step(EpisodeState& state, Direction d) {
  Observation o = step(state, d);
  TrajectoryStep rec;
  rec.t = state.timestep();
  rec.position = state.position();
  rec.action = direction_name(d);
  rec.admissible = o.admissible;
  rec.discovery = o.discovery;
  rec.events = observation_events(o, false);
  rec.terminal = state.terminal();
  return rec;
}

Trajectory record_walk(const Environment& env, const std::vector<Direction>& actions) {
  auto [state, obs] = reset(env);
  Trajectory traj{env, 0, "scripted", "base", false, env.config_key, {}};
  for (Direction d : actions) traj.steps.push_back(apply_step(state, d));
  return traj;
}

// (0,0)=A source, (1,0)=start, (2,0)=goal requiring A, stub (1,1).
Environment pocket_env() {
  GridMap map = GridMap(3, 2, {1, 0}, {{0, 0}, {1, 0}, {2, 0}, {1, 1}});
  TaskNode a{"A_01", "A_01", {0, 0}, {}, false};
  TaskNode g{"G_00", "G_00", {2, 0}, {{{"A_01"}}}, true};
  return Environment{std::move(map), TaskDag({a, g}), 40, 0, 1, "fixture-pocket"};
}

// (0,0)=A source, (1,0)=start, (2,0)=B requiring A, tower (1,1),(1,2) with
// the goal on (1,2) requiring B.
Environment tower_env() {
  GridMap map = GridMap(3, 3, {1, 0}, {{0, 0}, {1, 0}, {2, 0}, {1, 1}, {1, 2}});
  TaskNode a{"A_01", "A_01", {0, 0}, {}, false};
  TaskNode b{"B_02", "B_02", {2, 0}, {{{"A_01"}}}, false};
  TaskNode g{"G_00", "G_00", {1, 2}, {{{"B_02"}}}, true};
  return Environment{std::move(map), TaskDag({a, b, g}), 40, 0, 1, "fixture-tower"};
}

}  // namespace

TEST_CASE("segment: probe a branch and back out once") {
  check_segment_table({
      {{-1, 0}, 0, 0, 0, 0},
      {{0, 0}, 0, 0, 0, 0},
      {{1, 0}, 0, 0, 0, 0},
      {{0, 0}, 0, 0, 0, 0},
      {{-1, 0}, 0, 0, 0, 0},
  });
}

TEST_CASE("segment: useful gateway revisit") {
  check_segment_table({
      {{-1, 0}, 0, 0, 0, 0},
      {{0, 0}, 0, 0, 0, 0},
      {{1, 0}, 0, 0, 0, 0},
      {{0, 0}, 0, 0, 0, 0},
      {{0, 1}, 0, 0, 0, 0},
  });
}

TEST_CASE("segment: re-enter the same exhausted branch") {
  check_segment_table({
      {{-1, 0}, 0, 0, 0, 0},
      {{0, 0}, 0, 0, 0, 0},
      {{1, 0}, 0, 0, 0, 0},
      {{0, 0}, 0, 0, 0, 0},
      {{-1, 0}, 0, 0, 0, 0},
      {{0, 0}, 0, 1, 1, 2},
      {{1, 0}, 0, 2, 1, 3},
  });
}

TEST_CASE("segment: repeated use of the same cycle") {
  check_segment_table({
      {{-1, -1}, 0, 0, 0, 0},
      {{0, -1}, 0, 0, 0, 0},
      {{0, 0}, 0, 0, 0, 0},
      {{-1, 0}, 0, 0, 0, 0},
      {{-1, -1}, 1, 0, 0, 1},
      {{0, -1}, 1, 0, 0, 1},
      {{0, 0}, 1, 0, 0, 1},
      {{-1, 0}, 1, 0, 0, 1},
      {{-1, -1}, 1, 0, 1, 2},
  });
}

TEST_CASE("segment: corridor oscillation") {
  check_segment_table({
      {{0, 0}, 0, 0, 0, 0},
      {{0, 1}, 0, 0, 0, 0},
      {{0, 0}, 0, 0, 0, 0},
      {{0, -1}, 0, 0, 0, 0},
      {{0, 0}, 0, 0, 1, 1},
      {{0, 1}, 0, 1, 1, 2},
      {{0, 0}, 0, 2, 2, 4},
      {{0, -1}, 0, 3, 2, 5},
  });
}

TEST_CASE("segment: comb / broom graph") {
  check_segment_table({
      {{-1, 0}, 0, 0, 0, 0},
      {{0, 0}, 0, 0, 0, 0},
      {{1, 0}, 0, 0, 0, 0},
      {{1, 1}, 0, 0, 0, 0},
      {{1, 0}, 0, 0, 0, 0},
      {{0, 0}, 0, 0, 0, 0},
      {{-1, 0}, 0, 0, 0, 0},
      {{0, 0}, 0, 1, 1, 2},
      {{0, 1}, 0, 1, 1, 2},
  });
}

TEST_CASE("segment: progress resets to a fresh singleton") {
  NoProgressSegment seg = NoProgressSegment::fresh({0, 0});
  seg = advance_segment(seg, {0, 0}, {1, 0}, false);
  seg = advance_segment(seg, {1, 0}, {0, 0}, false);
  CHECK(seg.visit_count({0, 0}) == 2);
  seg = advance_segment(seg, {0, 0}, {1, 0}, true);
  CHECK(seg.stale_score() == 0);
  CHECK(seg.visit_count({1, 0}) == 1);
  CHECK(seg.visit_count({0, 0}) == 0);
}

TEST_CASE("segment: stay-in-place increments only the visit count") {
  NoProgressSegment seg = NoProgressSegment::fresh({0, 0});
  seg.add_step({0, 0}, {0, 0});
  CHECK(seg.visit_count({0, 0}) == 2);
  CHECK(seg.traversal_count({0, 0}, {0, 0}) == 0);
  CHECK(seg.stale_score() == 0);
  seg.add_step({0, 0}, {0, 0});
  CHECK(seg.stale_score() == 1);  // third visit
}

TEST_CASE("segment stale score is non-decreasing within a segment") {
  Rng rng(5);
  NoProgressSegment seg = NoProgressSegment::fresh({0, 0});
  Cell pos{0, 0};
  long long last = 0;
  for (int i = 0; i < 500; ++i) {
    Direction d = kDirections[rng.uniform_index(4)];
    Cell next = neighbor_cell(pos, d);
    seg.add_step(pos, next);
    pos = next;
    CHECK(seg.stale_score() >= last);
    last = seg.stale_score();
  }
}

TEST_CASE("initial state classifies as Case 1") {
  Environment env = tower_env();
  auto [state, obs] = reset(env);
  TargetCase tc = classify_case(state);
  CHECK(tc.id == CaseId::Case1);
  CHECK(tc.targets == std::vector<Cell>{{0, 0}, {2, 0}, {1, 1}});
}

TEST_CASE("pending non-goal with unseen cells classifies as Case 4") {
  Environment env = tower_env();
  auto [state, obs] = reset(env);
  step(state, Direction::Right);  // discover B (unmet)
  step(state, Direction::Left);
  step(state, Direction::Left);   // achieve A -> B pending; (1,1) etc unseen
  TargetCase tc = classify_case(state);
  CHECK(tc.id == CaseId::Case4);
  CHECK(tc.targets == std::vector<Cell>{{2, 0}, {1, 1}});
}

TEST_CASE("pending non-goal on a fully observed map classifies as Case 3") {
  Environment env = tower_env();
  auto [state, obs] = reset(env);
  step(state, Direction::Up);     // (1,1)
  step(state, Direction::Up);     // (1,2): discover goal, unmet
  step(state, Direction::Down);
  step(state, Direction::Down);
  step(state, Direction::Right);  // (2,0): discover B, unmet
  step(state, Direction::Left);
  step(state, Direction::Left);   // (0,0): achieve A -> B pending, map fully seen
  CHECK(state.unobserved_cells().empty());
  TargetCase tc = classify_case(state);
  CHECK(tc.id == CaseId::Case3);
  CHECK(tc.targets == std::vector<Cell>{{2, 0}});
}

TEST_CASE("goal pending dominates while unobserved cells remain (Case 2)") {
  GridMap map = GridMap(3, 2, {1, 0}, {{0, 0}, {1, 0}, {2, 0}, {0, 1}});
  TaskNode a{"A_01", "A_01", {2, 0}, {}, false};
  TaskNode g{"G_00", "G_00", {0, 0}, {{{"A_01"}}}, true};
  Environment env{std::move(map), TaskDag({a, g}), 40, 0, 1, "fixture-case2"};
  auto [state, obs] = reset(env);
  step(state, Direction::Left);   // discover goal (unmet)
  step(state, Direction::Right);
  step(state, Direction::Right);  // achieve A; (0,1) still unobserved
  REQUIRE_FALSE(state.unobserved_cells().empty());
  TargetCase tc = classify_case(state);
  CHECK(tc.id == CaseId::Case2);
  CHECK(tc.targets == std::vector<Cell>{{0, 0}});
}

TEST_CASE("gain branches") {
  Environment env = pocket_env();
  auto [state, obs] = reset(env);
  DistanceOracle distances(env.map);

  CHECK(gain(state, {0, 0}, {{0, 0}}, distances) == 1);            // enters a target
  CHECK(gain(state, {0, 0}, {{0, 0}, {2, 0}}, distances) == 1);    // closes on one target
  CHECK(gain(state, {1, 1}, {{0, 0}, {2, 0}}, distances) == 0);    // away from all
  CHECK(gain(state, state.position(), {{0, 0}}, distances) == 0);  // no-op
}

TEST_CASE("symmetric targets keep gain at 1 for every action") {
  // Plus-shaped map: center start, four arm tips as targets.
  GridMap map = GridMap(3, 3, {1, 1}, {{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}});
  TaskNode a{"A", "A", {1, 0}, {}, false};
  TaskNode g{"G", "G", {2, 1}, {{{"A"}}}, true};
  Environment env{std::move(map), TaskDag({a, g}), 40, 0, 1, "fixture-plus"};
  auto [state, obs] = reset(env);
  DistanceOracle distances(env.map);
  std::vector<Cell> tips{{1, 0}, {0, 1}, {2, 1}, {1, 2}};
  for (Direction d : admissible_moves(env.map, {1, 1}).directions)
    CHECK(gain(state, neighbor_cell({1, 1}, d), tips, distances) == 1);
}

TEST_CASE("hand-enumerated pocket episode: per-step verdicts, 2/7 exploration error") {
  Environment env = pocket_env();
  Trajectory traj =
      record_walk(env, {Direction::Up, Direction::Down, Direction::Up, Direction::Down,
                        Direction::Left, Direction::Right, Direction::Right});
  MetricReport report = evaluate_trajectory(env, traj);
  REQUIRE(report.per_step.size() == 7);

  // t1 up -> (1,1): unobserved entry, progress.
  CHECK(report.per_step[0].case_id == CaseId::Case1);
  CHECK(report.per_step[0].progress_event);
  CHECK(report.per_step[0].err == 0);
  // t2 down -> (1,0): gain toward both remaining targets, simple path so far.
  CHECK(report.per_step[1].gain == 1);
  CHECK(report.per_step[1].err == 0);
  // t3 up -> (1,1): moves away from (0,0) and (2,0) -> gain 0, error.
  CHECK(report.per_step[2].gain == 0);
  CHECK(report.per_step[2].err == 1);
  CHECK(report.per_step[2].attribution == Attribution::Exploration);
  // t4 down -> (1,0): gain 1 but third traversal of the stub edge: stale 0->1.
  CHECK(report.per_step[3].gain == 1);
  CHECK(report.per_step[3].stale_before == 0);
  CHECK(report.per_step[3].stale_after == 1);
  CHECK(report.per_step[3].err == 1);
  CHECK(report.per_step[3].attribution == Attribution::Exploration);
  // t5 left -> (0,0): progress (unobserved entry + achieves A_01).
  CHECK(report.per_step[4].progress_event);
  CHECK(report.per_step[4].err == 0);
  // t6 right -> (1,0): single remaining target, gain 1 -> stale check skipped.
  CHECK(report.per_step[5].gain == 1);
  CHECK(report.per_step[5].err == 0);
  // t7 right -> (2,0): goal discovered with A achieved -> success.
  CHECK(report.per_step[6].progress_event);
  CHECK(report.per_step[6].err == 0);

  CHECK(report.success);
  CHECK(report.steps == 7);
  CHECK(report.case_counts == std::array<int, 4>{7, 0, 0, 0});
  REQUIRE(report.exploration_error.has_value());
  CHECK(*report.exploration_error == doctest::Approx(2.0 / 7.0));
  CHECK_FALSE(report.exploitation_error.has_value());
}

TEST_CASE("hand-enumerated tower episode: case transitions and 1/7 exploitation error") {
  Environment env = tower_env();
  Trajectory traj = record_walk(
      env, {Direction::Up, Direction::Up, Direction::Down, Direction::Down, Direction::Right,
            Direction::Left, Direction::Left, Direction::Right, Direction::Left,
            Direction::Right, Direction::Right, Direction::Left, Direction::Up, Direction::Up});
  MetricReport report = evaluate_trajectory(env, traj);
  REQUIRE(report.per_step.size() == 14);

  // t1 (1,1), t2 (1,2): progress; goal discovered (unmet) at t2.
  CHECK(report.per_step[0].progress_event);
  CHECK(report.per_step[1].progress_event);
  CHECK(report.per_step[1].case_id == CaseId::Case1);
  // t3, t4: backtrack down the tower, gaining on (0,0)/(2,0).
  CHECK(report.per_step[2].err == 0);
  CHECK(report.per_step[3].err == 0);
  // t5 right -> (2,0): progress, discovers B (unmet).
  CHECK(report.per_step[4].progress_event);
  // t6 left, t7 left -> (0,0): achieves A; B becomes pending, map fully seen.
  CHECK(report.per_step[5].case_id == CaseId::Case1);
  CHECK(report.per_step[5].err == 0);
  CHECK(report.per_step[6].progress_event);
  // t8 [Case3, target (2,0)]: gain 1.
  CHECK(report.per_step[7].case_id == CaseId::Case3);
  CHECK(report.per_step[7].gain == 1);
  CHECK(report.per_step[7].err == 0);
  // t9 left -> (0,0): away from the single pending target -> exploitation error.
  CHECK(report.per_step[8].case_id == CaseId::Case3);
  CHECK(report.per_step[8].gain == 0);
  CHECK(report.per_step[8].err == 1);
  CHECK(report.per_step[8].attribution == Attribution::Exploitation);
  // t10 right: gain 1; the third edge traversal raises the stale score, but a
  // singleton target set skips the stale check.
  CHECK(report.per_step[9].case_id == CaseId::Case3);
  CHECK(report.per_step[9].gain == 1);
  CHECK(report.per_step[9].stale_after > report.per_step[9].stale_before);
  CHECK(report.per_step[9].err == 0);
  // t11 right -> (2,0): achieves pending B -> progress; goal becomes pending.
  CHECK(report.per_step[10].case_id == CaseId::Case3);
  CHECK(report.per_step[10].progress_event);
  // t12..t14 [Case2]: walk to the goal and win.
  CHECK(report.per_step[11].case_id == CaseId::Case2);
  CHECK(report.per_step[11].err == 0);
  CHECK(report.per_step[12].case_id == CaseId::Case2);
  CHECK(report.per_step[13].case_id == CaseId::Case2);
  CHECK(report.per_step[13].progress_event);
  CHECK(report.success);

  CHECK(report.case_counts == std::array<int, 4>{7, 3, 4, 0});
  REQUIRE(report.exploration_error.has_value());
  REQUIRE(report.exploitation_error.has_value());
  CHECK(*report.exploration_error == doctest::Approx(0.0));
  CHECK(*report.exploitation_error == doctest::Approx(1.0 / 7.0));
}

TEST_CASE("case-4 steps reach pending targets through unseen territory") {
  Environment env = tower_env();
  Trajectory traj = record_walk(env, {Direction::Right, Direction::Left, Direction::Left,
                                      Direction::Right, Direction::Right, Direction::Left,
                                      Direction::Up, Direction::Up});
  MetricReport report = evaluate_trajectory(env, traj);
  REQUIRE(report.per_step.size() == 8);
  // After achieving A at t3, B is pending while (1,1) is unseen -> Case 4.
  CHECK(report.per_step[3].case_id == CaseId::Case4);
  CHECK(report.per_step[3].gain == 1);
  CHECK(report.per_step[3].err == 0);
  CHECK(report.per_step[4].case_id == CaseId::Case4);
  CHECK(report.per_step[4].progress_event);  // achieves pending B
  CHECK(report.success);
  CHECK(report.case_counts == std::array<int, 4>{6, 0, 0, 2});
}

TEST_CASE("figure-2c style loop: gain stays 1 but the stale score flags cycling") {
  // 2x2 block walkable in a cycle; targets placed symmetrically outside the
  // loop so every move gains on one of them.
  GridMap map = full_map(4, 4, {1, 1});
  TaskNode a{"A", "A", {0, 0}, {}, false};
  TaskNode g{"G", "G", {3, 3}, {{{"A"}}}, true};
  Environment env{std::move(map), TaskDag({a, g}), 100, 0, 1, "fixture-loop"};
  auto [state, obs] = reset(env);
  DistanceOracle distances(env.map);

  // Pre-observe the block so the laps below are never progress events.
  std::vector<Direction> warmup{Direction::Right, Direction::Up, Direction::Left,
                                Direction::Down};
  Trajectory traj{env, 0, "scripted", "base", false, env.config_key, {}};
  for (Direction d : warmup) traj.steps.push_back(apply_step(state, d));
  // Two more laps around the same 2x2 cycle: (1,1)->(2,1)->(2,2)->(1,2)->(1,1).
  for (int lap = 0; lap < 2; ++lap)
    for (Direction d : warmup) traj.steps.push_back(apply_step(state, d));

  MetricReport report = evaluate_trajectory(env, traj);
  REQUIRE(report.per_step.size() == 12);
  // The warmup's last landing (1,2) seeds the segment; the second lap closes
  // the 2x2 cycle on returning there at step 7 (index 6).
  for (size_t i = 0; i < 12; ++i) {
    CHECK(report.per_step[i].case_id == CaseId::Case1);
    if (i >= 4) CHECK(report.per_step[i].gain == 1);  // symmetric targets
  }
  const auto& close1 = report.per_step[6];
  CHECK(close1.err == 1);
  CHECK(close1.seg_cyclomatic == 1);
  CHECK(report.per_step[7].err == 0);  // same lap, no new cycle
  // Third lap: third visits to (1,2) then (1,1) raise n (and e on the last
  // edge), so the stale score climbs twice more.
  CHECK(report.per_step[8].err == 0);
  CHECK(report.per_step[9].err == 0);
  CHECK(report.per_step[10].err == 1);
  CHECK(report.per_step[10].seg_node_excess == 1);
  CHECK(report.per_step[11].err == 1);
  CHECK(report.per_step[11].seg_node_excess == 2);
  CHECK(report.per_step[11].seg_edge_excess == 1);
}

TEST_CASE("replay divergence is reported with the record index") {
  Environment env = pocket_env();
  Trajectory traj = record_walk(env, {Direction::Up, Direction::Down});
  traj.steps[1].position = {2, 0};  // corrupt
  try {
    evaluate_trajectory(env, traj);
    FAIL("expected ReplayError");
  } catch (const ReplayError& e) {
    CHECK(e.record_index == 1);
  }
}

TEST_CASE("trajectory continuing after terminal is rejected") {
  Environment env = pocket_env();
  Trajectory traj = record_walk(env, {Direction::Left, Direction::Right, Direction::Right});
  CHECK(traj.steps.back().terminal == Terminal::Success);
  TrajectoryStep extra = traj.steps.back();
  extra.t += 1;
  traj.steps.push_back(extra);
  CHECK_THROWS_AS(evaluate_trajectory(env, traj), ReplayError);
}

TEST_CASE("metric algebra holds over random walks") {
  Environment env = tower_env();
  Rng rng(31);
  for (int episode = 0; episode < 40; ++episode) {
    auto [state, obs] = reset(env);
    Trajectory traj{env, 0, "random", "base", false, env.config_key, {}};
    while (state.terminal() == Terminal::Running) {
      auto moves = admissible_moves(env.map, state.position()).directions;
      traj.steps.push_back(apply_step(state, moves[rng.uniform_index(moves.size())]));
    }
    MetricReport report = evaluate_trajectory(env, traj);

    int total_err = 0, explore_attr = 0, exploit_attr = 0, both_attr = 0;
    for (const auto& v : report.per_step) {
      total_err += v.err;
      if (v.progress_event) CHECK(v.err == 0);
      if (v.err) CHECK(v.attribution != Attribution::None);
      if (!v.err) CHECK(v.attribution == Attribution::None);
      if (v.attribution == Attribution::Exploration || v.attribution == Attribution::Both)
        explore_attr += 1;
      if (v.attribution == Attribution::Exploitation || v.attribution == Attribution::Both)
        exploit_attr += 1;
      if (v.attribution == Attribution::Both) both_attr += 1;
    }
    CHECK(explore_attr + exploit_attr - both_attr == total_err);

    int case_total = 0;
    for (int c : report.case_counts) case_total += c;
    CHECK(case_total == report.steps);  // exactly one case per step

    if (report.exploration_error) {
      CHECK(*report.exploration_error >= 0.0);
      CHECK(*report.exploration_error <= 1.0);
    }
    if (report.exploitation_error) {
      CHECK(*report.exploitation_error >= 0.0);
      CHECK(*report.exploitation_error <= 1.0);
    }
  }
}

TEST_CASE("inadmissible actions replay as stay-in-place no-ops") {
  Environment env = pocket_env();
  auto [state, obs] = reset(env);
  Trajectory traj{env, 0, "stubborn", "base", false, env.config_key, {}};

  // Driver semantics: the failed action consumes a timestep in place.
  Observation o = step_stay(state);
  TrajectoryStep rec;
  rec.t = state.timestep();
  rec.position = state.position();
  rec.action = "down";  // not admissible at (1,0)
  rec.admissible = o.admissible;
  rec.events = observation_events(o, true);
  rec.terminal = state.terminal();
  traj.steps.push_back(rec);
  traj.steps.push_back(apply_step(state, Direction::Up));

  MetricReport report = evaluate_trajectory(env, traj);
  REQUIRE(report.per_step.size() == 2);
  // The no-op scores gain 0, hence an error attributed by the current case.
  CHECK(report.per_step[0].gain == 0);
  CHECK(report.per_step[0].err == 1);
  CHECK(report.per_step[0].attribution == Attribution::Exploration);
  CHECK_FALSE(report.per_step[0].progress_event);
  CHECK(report.per_step[1].progress_event);
}

TEST_CASE("step_error branch order is authoritative") {
  // Progress wins even with gain 0 (en-route unobserved entries in Case 2).
  CHECK(step_error(true, 0, 5, 0, 3) == 0);
  CHECK(step_error(true, 1, 1, 0, 0) == 0);
  // No gain is an error regardless of the stale score.
  CHECK(step_error(false, 0, 3, 0, 0) == 1);
  // Singleton target skips the stale check entirely.
  CHECK(step_error(false, 1, 1, 0, 9) == 0);
  // Multi-target gain steps err exactly when the stale score rose.
  CHECK(step_error(false, 1, 2, 1, 1) == 0);
  CHECK(step_error(false, 1, 2, 1, 2) == 1);

  CHECK(attribute_error(CaseId::Case1, 1) == Attribution::Exploration);
  CHECK(attribute_error(CaseId::Case2, 1) == Attribution::Exploitation);
  CHECK(attribute_error(CaseId::Case3, 1) == Attribution::Exploitation);
  CHECK(attribute_error(CaseId::Case4, 1) == Attribution::Both);
  CHECK(attribute_error(CaseId::Case4, 0) == Attribution::None);
}
