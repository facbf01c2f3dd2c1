#ifndef STACKBELIEF_OLSE_HPP
#define STACKBELIEF_OLSE_HPP

#include <string>

#include "stackbelief/lq_game.hpp"

namespace stackbelief {

// Affine open-loop best-response map of a quadratic-cost follower:
//   u_F_stacked = G_hat * u_L_stacked + H_hat * x0.
struct OlBrMap {
  Eigen::MatrixXd G_hat;  // m_F*(horizon_len-1) x m_L*(horizon_len-1)
  Eigen::MatrixXd H_hat;  // m_F*(horizon_len-1) x n
  std::string belief_label;
  int horizon_len = 0;

  Eigen::VectorXd respond(const Eigen::VectorXd& u_L_stacked,
                          const Eigen::VectorXd& x0) const;
};

// Builds the lifted-QP minimizer map
//   G_hat = -(G_F' Qb G_F + Rb)^-1 G_F' Qb G_L,   H_hat likewise with H,
// solved as an SPD system (R > 0 guarantees invertibility).
OlBrMap build_ol_br(const LtiGameDynamics& dyn,
                    const QuadCostModel& follower_cost, int horizon_len);
OlBrMap build_ol_br(const LtiGameDynamics& dyn,
                    const QuadCostModel& follower_cost,
                    const StackedMatrices& stk);

// Leader's open-loop Stackelberg control over a horizon of `horizon_len`
// states from x0, with the follower eliminated through `belief`'s BR map.
// Returns the stacked control sequence (m_L*(horizon_len-1) entries).
Eigen::VectorXd solve_olse(const LtiGameDynamics& dyn,
                           const QuadCostModel& leader_cost,
                           const QuadCostModel& belief,
                           const Eigen::VectorXd& x0, int horizon_len);
Eigen::VectorXd solve_olse(const LtiGameDynamics& dyn,
                           const QuadCostModel& leader_cost,
                           const QuadCostModel& belief,
                           const Eigen::VectorXd& x0,
                           const StackedMatrices& stk);

// Full-horizon convenience on the ground-truth game container.
Eigen::VectorXd solve_olse(const StackelbergGame& game,
                           const QuadCostModel& belief,
                           const Eigen::VectorXd& x0);

// Mid-game re-solve: leader controls on [tau, T-1] from the realized state
// x_tau. tau = T returns the empty sequence (no re-solve).
Eigen::VectorXd resolve_truncated_ol(const StackelbergGame& game,
                                     const QuadCostModel& belief,
                                     const Eigen::VectorXd& x_tau, int tau);

// Gradient of the follower's lifted cost at u_F (zero at the BR point).
Eigen::VectorXd follower_lifted_gradient(const LtiGameDynamics& dyn,
                                         const QuadCostModel& follower_cost,
                                         const StackedMatrices& stk,
                                         const Eigen::VectorXd& x0,
                                         const Eigen::VectorXd& u_L_stacked,
                                         const Eigen::VectorXd& u_F_stacked);

}  // namespace stackbelief

#endif  // STACKBELIEF_OLSE_HPP
