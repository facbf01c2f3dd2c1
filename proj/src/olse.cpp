#include "stackbelief/olse.hpp"

#include <Eigen/Cholesky>
#include <stdexcept>

namespace stackbelief {

namespace {

// (I_blocks ⊗ Q) * X without materializing the block diagonal.
Eigen::MatrixXd block_diag_apply(const Eigen::MatrixXd& Q,
                                 const Eigen::MatrixXd& X) {
  const int n = static_cast<int>(Q.rows());
  Eigen::MatrixXd out(X.rows(), X.cols());
  for (Eigen::Index r = 0; r < X.rows(); r += n) {
    out.middleRows(r, n).noalias() = Q * X.middleRows(r, n);
  }
  return out;
}

// R-regularized SPD solve M \ B with M = G' (I ⊗ Q) G + I ⊗ R.
Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& M, const Eigen::MatrixXd& B,
                          const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(std::string(what) +
                             ": normal matrix is not positive definite");
  }
  return llt.solve(B);
}

Eigen::MatrixXd lift_R(const Eigen::MatrixXd& R, int steps) {
  Eigen::MatrixXd out =
      Eigen::MatrixXd::Zero(R.rows() * steps, R.rows() * steps);
  for (int k = 0; k < steps; ++k) {
    out.block(k * R.rows(), k * R.rows(), R.rows(), R.rows()) = R;
  }
  return out;
}

}  // namespace

Eigen::VectorXd OlBrMap::respond(const Eigen::VectorXd& u_L_stacked,
                                 const Eigen::VectorXd& x0) const {
  if (u_L_stacked.size() != G_hat.cols() || x0.size() != H_hat.cols()) {
    throw std::invalid_argument("OlBrMap::respond: dimension mismatch");
  }
  return G_hat * u_L_stacked + H_hat * x0;
}

OlBrMap build_ol_br(const LtiGameDynamics& dyn,
                    const QuadCostModel& follower_cost,
                    const StackedMatrices& stk) {
  if (follower_cost.state_dim() != dyn.n ||
      follower_cost.control_dim() != dyn.m_F) {
    throw std::invalid_argument("build_ol_br: cost dimension mismatch");
  }
  const int steps = stk.horizon_len - 1;
  const Eigen::MatrixXd QGf = block_diag_apply(follower_cost.Q, stk.G_F);
  Eigen::MatrixXd N = stk.G_F.transpose() * QGf;
  N += lift_R(follower_cost.R, steps);

  // One factorization for both right-hand sides [G_L | H].
  Eigen::MatrixXd rhs(dyn.m_F * steps, stk.G_L.cols() + dyn.n);
  rhs.leftCols(stk.G_L.cols()).noalias() = QGf.transpose() * stk.G_L;
  rhs.rightCols(dyn.n).noalias() = QGf.transpose() * stk.H;

  OlBrMap br;
  br.belief_label = follower_cost.label;
  br.horizon_len = stk.horizon_len;
  const Eigen::MatrixXd sol = spd_solve(N, rhs, "build_ol_br");
  br.G_hat = -sol.leftCols(stk.G_L.cols());
  br.H_hat = -sol.rightCols(dyn.n);
  return br;
}

OlBrMap build_ol_br(const LtiGameDynamics& dyn,
                    const QuadCostModel& follower_cost, int horizon_len) {
  return build_ol_br(dyn, follower_cost, build_stacked(dyn, horizon_len));
}

Eigen::VectorXd solve_olse(const LtiGameDynamics& dyn,
                           const QuadCostModel& leader_cost,
                           const QuadCostModel& belief,
                           const Eigen::VectorXd& x0,
                           const StackedMatrices& stk) {
  if (x0.size() != dyn.n) {
    throw std::invalid_argument("solve_olse: x0 dimension mismatch");
  }
  const int steps = stk.horizon_len - 1;
  if (steps == 0) return Eigen::VectorXd(0);

  const OlBrMap br = build_ol_br(dyn, belief, stk);
  // With the follower eliminated, states are M u_L + (H + G_F H_hat) x0.
  Eigen::MatrixXd M = stk.G_L;
  M.noalias() += stk.G_F * br.G_hat;
  const Eigen::MatrixXd QM = block_diag_apply(leader_cost.Q, M);
  Eigen::MatrixXd N = M.transpose() * QM;
  N += lift_R(leader_cost.R, steps);
  Eigen::VectorXd drift = stk.H * x0;
  drift.noalias() += stk.G_F * (br.H_hat * x0);
  const Eigen::VectorXd rhs = QM.transpose() * drift;
  return -spd_solve(N, rhs, "solve_olse");
}

Eigen::VectorXd solve_olse(const LtiGameDynamics& dyn,
                           const QuadCostModel& leader_cost,
                           const QuadCostModel& belief,
                           const Eigen::VectorXd& x0, int horizon_len) {
  return solve_olse(dyn, leader_cost, belief, x0,
                    build_stacked(dyn, horizon_len));
}

Eigen::VectorXd solve_olse(const StackelbergGame& game,
                           const QuadCostModel& belief,
                           const Eigen::VectorXd& x0) {
  return solve_olse(game.dyn, game.leader_cost, belief, x0, game.T + 1);
}

Eigen::VectorXd resolve_truncated_ol(const StackelbergGame& game,
                                     const QuadCostModel& belief,
                                     const Eigen::VectorXd& x_tau, int tau) {
  if (tau <= 0 || tau > game.T) {
    throw std::invalid_argument("resolve_truncated_ol: tau outside (0, T]");
  }
  if (tau == game.T) return Eigen::VectorXd(0);
  return solve_olse(game.dyn, game.leader_cost, belief, x_tau,
                    game.T - tau + 1);
}

Eigen::VectorXd follower_lifted_gradient(const LtiGameDynamics& dyn,
                                         const QuadCostModel& follower_cost,
                                         const StackedMatrices& stk,
                                         const Eigen::VectorXd& x0,
                                         const Eigen::VectorXd& u_L_stacked,
                                         const Eigen::VectorXd& u_F_stacked) {
  const int steps = stk.horizon_len - 1;
  Eigen::VectorXd x = stk.H * x0 + stk.G_L * u_L_stacked + stk.G_F * u_F_stacked;
  Eigen::VectorXd grad =
      2.0 * (stk.G_F.transpose() * block_diag_apply(follower_cost.Q, x));
  for (int k = 0; k < steps; ++k) {
    grad.segment(k * dyn.m_F, dyn.m_F) +=
        2.0 * follower_cost.R * u_F_stacked.segment(k * dyn.m_F, dyn.m_F);
  }
  return grad;
}

}  // namespace stackbelief
