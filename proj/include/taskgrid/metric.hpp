#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "taskgrid/trajectory.hpp"

namespace taskgrid {

enum class CaseId { Case1 = 1, Case2 = 2, Case3 = 3, Case4 = 4 };
enum class Attribution { None, Exploration, Exploitation, Both };

const char* attribution_name(Attribution a);

// Required-action classification with its productive destinations.
//   Case1: nothing pending            -> unobserved cells   (exploration)
//   Case2: goal pending               -> goal cell          (exploitation)
//   Case3: pending, map fully seen    -> pending cells      (exploitation)
//   Case4: pending and unseen cells   -> union              (either)
struct TargetCase {
  CaseId id = CaseId::Case1;
  std::vector<Cell> targets;  // non-empty, (y, x) order
};

// Multigraph of the walk since the last progress event. The stale score
// S = c + e + n flags structurally redundant movement: c is the cyclomatic
// number, e and n count edge traversals and cell visits beyond two.
class NoProgressSegment {
 public:
  static NoProgressSegment fresh(Cell seed);

  // Records one move; from == to records only a visit (stay-in-place).
  void add_step(Cell from, Cell to);

  long long cyclomatic() const { return cyclomatic_; }
  long long edge_excess() const { return edge_excess_; }
  long long node_excess() const { return node_excess_; }
  long long stale_score() const { return cyclomatic_ + edge_excess_ + node_excess_; }

  int visit_count(Cell v) const;
  int traversal_count(Cell a, Cell b) const;

 private:
  std::map<Cell, int> visits_;
  std::map<std::pair<Cell, Cell>, int> edges_;  // canonical (min, max) keys
  long long cyclomatic_ = 0;
  long long edge_excess_ = 0;
  long long node_excess_ = 0;
};

struct StepVerdict {
  int t = 0;                     // timestep after the action
  CaseId case_id = CaseId::Case1;
  int gain = 0;
  bool progress_event = false;
  long long stale_before = 0;
  long long stale_after = 0;
  long long seg_cyclomatic = 0;  // post-step segment components
  long long seg_edge_excess = 0;
  long long seg_node_excess = 0;
  int err = 0;
  Attribution attribution = Attribution::None;
};

struct MetricReport {
  std::vector<StepVerdict> per_step;
  bool success = false;
  int steps = 0;
  std::optional<double> exploration_error;   // over Case1 + Case4 steps
  std::optional<double> exploitation_error;  // over Case2 + Case3 + Case4 steps
  std::array<int, 4> case_counts{0, 0, 0, 0};
};

// Classifies the pre-action state. Requires goal unachieved and a non-empty
// pending-or-unobserved union (guaranteed by the episode liveness invariant).
TargetCase classify_case(const EpisodeState& state);

// 1 iff next_pos enters a target or strictly reduces the full-map shortest
// distance to at least one target.
int gain(const EpisodeState& state, Cell next_pos, const std::vector<Cell>& targets,
         DistanceOracle& distances);

// Functional segment update used by tests; progress yields a fresh segment
// seeded at `to`.
NoProgressSegment advance_segment(const NoProgressSegment& seg, Cell from, Cell to, bool progress);

// The four-branch error rule, evaluated in order: progress -> 0; no gain -> 1;
// singleton target with gain -> 0; otherwise 1 iff the stale score rose.
int step_error(bool progress, int gain, size_t target_count, long long stale_before,
               long long stale_after);

// Case 1 -> exploration, 2/3 -> exploitation, 4 -> both; None when err is 0.
Attribution attribute_error(CaseId case_id, int err);

struct ReplayError : std::runtime_error {
  ReplayError(int record_index, const std::string& what)
      : std::runtime_error("replay divergence at record " + std::to_string(record_index) + ": " +
                           what),
        record_index(record_index) {}
  int record_index;
};

// Replays the log against the environment, producing one verdict per step and
// the normalized error rates. Throws ReplayError on env/log mismatch.
MetricReport evaluate_trajectory(const Environment& env, const Trajectory& log);

}  // namespace taskgrid
