#ifndef STACKBELIEF_LQ_GAME_HPP
#define STACKBELIEF_LQ_GAME_HPP

#include <string>
#include <utility>

#include "stackbelief/lin_dyn.hpp"

namespace stackbelief {

enum class Player { kLeader, kFollower };

// One player's quadratic cost pair. A follower-side instance doubles as a
// best-response belief hypothesis.
//
// Q must be positive semidefinite (min eigenvalue >= -1e-9, absorbing
// floating-point assembly error), R positive definite, both symmetric.
struct QuadCostModel {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
  std::string label;

  static QuadCostModel make(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                            std::string label);
  static QuadCostModel scalar(double q, double r, std::string label);

  int state_dim() const { return static_cast<int>(Q.rows()); }
  int control_dim() const { return static_cast<int>(R.rows()); }
};

inline constexpr double kPsdEigTolerance = -1e-9;

// Ground-truth game: shared dynamics, leader cost, the follower's true cost
// (its BR model b*), and the horizon T.
struct StackelbergGame {
  LtiGameDynamics dyn;
  QuadCostModel leader_cost;
  QuadCostModel follower_true_cost;
  int T = 0;

  static StackelbergGame make(LtiGameDynamics dyn, QuadCostModel leader_cost,
                              QuadCostModel follower_true_cost, int T);
};

// Leader cost split at the belief-update time tau: stage costs on [0, tau-1]
// vs stage costs on [tau, T-1] plus the terminal term (the terminal cost is
// attributed to the post-update segment).
struct CostBreakdown {
  double pre_update = 0.0;
  double post_update = 0.0;
  double total = 0.0;
  int tau = 0;
};

// x_T' Q x_T (if include_terminal) + sum_t x_t' Q x_t + u_t' R u_t over the
// trajectory's span, with u the selected player's controls.
double eval_cost(const Trajectory& traj, Player controls_of,
                 const QuadCostModel& cost, bool include_terminal);

// Splits the leader cost of a full-horizon trajectory at tau, 0 < tau <= T.
CostBreakdown decompose_cost(const Trajectory& traj,
                             const QuadCostModel& leader_cost, int tau);

// Block-diagonal trajectory-level matrices: Q_bar with T+1 blocks of Q,
// R_bar with T blocks of R.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> lift_block_costs(
    const QuadCostModel& cost, int T);

}  // namespace stackbelief

#endif  // STACKBELIEF_LQ_GAME_HPP
