#ifndef STACKBELIEF_BELIEF_PROTOCOL_HPP
#define STACKBELIEF_BELIEF_PROTOCOL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "stackbelief/lq_game.hpp"
#include "stackbelief/mmae.hpp"
#include "stackbelief/strategy.hpp"

namespace stackbelief {

// Which follower BR belief the leader held from each re-solve instant on.
// Start times strictly increase, the first is 0, all are < T (except that a
// single-segment schedule also covers the tau = T no-re-solve case).
struct BeliefSchedule {
  struct Segment {
    int start_time = 0;
    QuadCostModel belief;
  };
  std::vector<Segment> segments;
  std::string scheme_label;  // "fixed-belief" or "adaptive"
};

// One simulated playthrough of the belief-update protocol.
struct RunRecord {
  Trajectory trajectory;  // composite over [0, T]
  CostBreakdown breakdown;
  BeliefSchedule schedule;
  InfoStructure info = InfoStructure::kOpenLoop;
  std::uint64_t seed = 0;
  // Leader announcement per schedule segment (each spans [start, T)).
  std::vector<StrategyProfile> leader_announcements;
  // Adaptive runs only: posterior after every step, first entry the prior.
  std::vector<Eigen::VectorXd> posterior_trace;

  double total_leader_cost() const { return breakdown.total; }
};

// Two-belief protocol: play the full-horizon solution under b1 (true follower
// best-responding to the announcement) until tau, re-solve the truncated game
// under b2 from the realized state, follower re-responds, play out. tau = T
// means no re-solve.
RunRecord run_with_update(const StackelbergGame& game, const QuadCostModel& b1,
                          const QuadCostModel& b2, int tau, InfoStructure info,
                          const Eigen::VectorXd& x0, std::uint64_t seed = 0);

// Fixed-belief scheme: re-solve under the same belief every tau steps.
RunRecord run_fixed_periodic(const StackelbergGame& game,
                             const QuadCostModel& belief, int tau,
                             InfoStructure info, const Eigen::VectorXd& x0,
                             std::uint64_t seed = 0);

// Adaptive scheme: MMAE posterior updated every step; at every multiple of
// tau the leader re-solves under the current MAP belief (at t = 0 the MAP of
// the uniform prior, ties broken by hypothesis order).
RunRecord run_adaptive(const StackelbergGame& game,
                       const std::vector<QuadCostModel>& hypotheses, int tau,
                       InfoStructure info, const Eigen::VectorXd& x0,
                       std::uint64_t seed = 0);

struct BeliefComparison {
  std::vector<std::string> labels;
  std::vector<double> totals;
  std::vector<RunRecord> records;
  std::string winner;
};

// Runs the two-belief protocol with b1 = b2 = b for every belief in the set
// (shared game, x0 and tau) and reports per-belief totals plus the argmin
// label. Ties break toward the true-belief label, then lexicographically.
BeliefComparison compare_beliefs(const StackelbergGame& game,
                                 const std::vector<QuadCostModel>& beliefs,
                                 int tau, InfoStructure info,
                                 const Eigen::VectorXd& x0);

}  // namespace stackbelief

#endif  // STACKBELIEF_BELIEF_PROTOCOL_HPP
