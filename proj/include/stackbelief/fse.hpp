#ifndef STACKBELIEF_FSE_HPP
#define STACKBELIEF_FSE_HPP

#include <string>
#include <vector>

#include "stackbelief/lq_game.hpp"

namespace stackbelief {

// Feedback Stackelberg solution over `horizon_len` states (horizon_len - 1
// stages). V_L/V_F are indexed by stage offset, boundary V[horizon_len-1] = Q.
//
// K_F[t] is the follower's stage reaction gain applied to the leader-adjusted
// predicted state z = (A - B_L K_L[t]) x_t, i.e. u_F = -K_F[t] z. The realized
// state feedback is therefore K_F[t] (A - B_L K_L[t]); see
// realized_follower_gain(). The printed gains of the stage formulas use the
// reaction convention.
struct FeedbackSolution {
  std::vector<Eigen::MatrixXd> K_L;  // m_L x n, length horizon_len-1
  std::vector<Eigen::MatrixXd> K_F;  // m_F x n, length horizon_len-1
  std::vector<Eigen::MatrixXd> V_L;  // n x n, length horizon_len
  std::vector<Eigen::MatrixXd> V_F;  // n x n, length horizon_len
  std::string belief_label;

  int steps() const { return static_cast<int>(K_L.size()); }
  Eigen::MatrixXd realized_follower_gain(const LtiGameDynamics& dyn,
                                         int t) const;
  std::vector<Eigen::MatrixXd> realized_follower_gains(
      const LtiGameDynamics& dyn) const;
};

// A quadratic-cost follower's exact stage-wise best response to an announced
// leader gain sequence: backward recursion on the follower's cost-to-go with
// the leader's stage gains folded into the dynamics.
struct FollowerFbResponse {
  std::vector<Eigen::MatrixXd> reaction_gains;  // applied to A x + B_L u_L
  std::vector<Eigen::MatrixXd> realized_gains;  // applied to x_t
};

// Stage-wise backward solve: follower reacts to the predicted state, leader
// anticipates that reaction when choosing its stage gain.
FeedbackSolution solve_fse(const LtiGameDynamics& dyn,
                           const QuadCostModel& leader_cost,
                           const QuadCostModel& follower_belief_cost,
                           int horizon_len);

FollowerFbResponse follower_feedback_response(
    const LtiGameDynamics& dyn, const QuadCostModel& follower_cost,
    const std::vector<Eigen::MatrixXd>& announced_K_L);

// Realized leader cost when the leader announces the gains of `solution`
// (solved under some belief) and the TRUE follower of `game` best-responds
// stage-wise to that announcement.
double fse_cost(const StackelbergGame& game, const FeedbackSolution& solution,
                const Eigen::VectorXd& x0);

struct StageOptimalityReport {
  bool passed = false;
  // Largest cost-to-go decrease found over all perturbations (>= 0 means some
  // perturbation improved on the equilibrium gain).
  double max_improvement = 0.0;
};

// Perturbs K_L[t] only, with the follower's stage reaction recomputed through
// the perturbed predicted state, and checks the leader's cost-to-go at random
// states never drops by more than 1e-7.
StageOptimalityReport check_stage_optimality(const StackelbergGame& game,
                                             const FeedbackSolution& solution,
                                             int t, int n_perturb,
                                             unsigned seed = 2024);

}  // namespace stackbelief

#endif  // STACKBELIEF_FSE_HPP
