#ifndef STACKBELIEF_SCENARIO_HPP
#define STACKBELIEF_SCENARIO_HPP

#include <array>
#include <string>
#include <vector>

#include "stackbelief/lq_game.hpp"
#include "stackbelief/rng.hpp"

namespace stackbelief {

// Collision-avoidance game construction: two double-integrator agents with
// decaying reference states stacked into one 8-state joint system, a leader
// that tracks its reference while avoiding the follower, and three follower
// intention models labeled T (tracking the leader), I (indifferent) and
// A (avoiding the leader).
//
// The 2x2 sub-block weights carry the printed sign/definiteness constraints;
// the numeric defaults below satisfy them and are config-overridable. All
// assembled matrices pass the QuadCostModel PSD check at load time.
struct ScenarioParams {
  // Leader cost blocks over [x_L, x_F, r_L, r_F].
  Eigen::Matrix2d q_l1;  // own-state weight
  Eigen::Matrix2d q_l2;  // leader-follower coupling, > 0 (avoidance)
  Eigen::Matrix2d q_l3;  // leader-reference coupling, < 0 (tracking)
  Eigen::Matrix2d q_l4;  // reference weight
  double epsilon = 0.1;  // follower-state weight, > 0
  double r_l = 1.0;

  // Follower intention T: tracks the leader.
  Eigen::Matrix2d q_f1_t;
  Eigen::Matrix2d q_f2_t;
  Eigen::Matrix2d q_f3_t;  // < 0
  // Follower intention I: indifferent, tracks its own reference.
  Eigen::Matrix2d q_f2_i;
  Eigen::Matrix2d q_f4_i;  // < 0
  Eigen::Matrix2d q_f5_i;
  // Follower intention A: avoids the leader while tracking its reference.
  double alpha = 0.1;      // > 0
  Eigen::Matrix2d q_f3_a;
  Eigen::Matrix2d q_f2_a;
  Eigen::Matrix2d q_f4_a;  // < 0
  Eigen::Matrix2d q_f5_a;
  double r_f = 1.0;

  double x0_bound = 20.0;  // ||x0||_inf <= 20 sampling bound
  int T = 20;
  int n_runs = 1000;
  std::vector<int> tau_values{1, 2, 5, 10, 20};

  static ScenarioParams defaults();

  // Throws with the offending block/eigenvalue if a printed sign constraint
  // or a PSD assembly check fails.
  void validate() const;
};

struct IntentionSet {
  std::array<QuadCostModel, 3> models;  // labels "T", "I", "A"

  const QuadCostModel& by_label(const std::string& label) const;
  std::vector<QuadCostModel> as_vector() const {
    return {models[0], models[1], models[2]};
  }
};

struct InitialDraw {
  Eigen::VectorXd x0;  // 8 components, uniform on [-bound, bound]
  double sigma_L = 1.0;
  double sigma_F = 1.0;
};

// Joint A = blkdiag(A_agent, A_agent, sigma_L I2, sigma_F I2) with the agent
// block [[1,1],[0,1]] and B_agent = [0.5; 1] routed to each player's slot.
LtiGameDynamics build_joint_dynamics(double sigma_L, double sigma_F);

QuadCostModel build_leader_cost(const ScenarioParams& params);
IntentionSet build_intentions(const ScenarioParams& params);

InitialDraw sample_initial(Rng& rng, const ScenarioParams& params);

}  // namespace stackbelief

#endif  // STACKBELIEF_SCENARIO_HPP
