#include "stackbelief/lq_game.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>
#include <stdexcept>

namespace stackbelief {

namespace {

void check_symmetric(const Eigen::MatrixXd& M, const std::string& name,
                     const std::string& label) {
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("QuadCostModel '" + label + "': " + name +
                                " is not symmetric");
  }
}

double min_eigenvalue(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

QuadCostModel QuadCostModel::make(const Eigen::MatrixXd& Q,
                                  const Eigen::MatrixXd& R,
                                  std::string label) {
  if (Q.rows() != Q.cols() || R.rows() != R.cols()) {
    throw std::invalid_argument("QuadCostModel '" + label +
                                "': Q and R must be square");
  }
  check_symmetric(Q, "Q", label);
  check_symmetric(R, "R", label);
  const double q_min = min_eigenvalue(Q);
  if (q_min < kPsdEigTolerance) {
    std::ostringstream msg;
    msg << "QuadCostModel '" << label << "': Q not PSD (min eigenvalue "
        << q_min << ")";
    throw std::invalid_argument(msg.str());
  }
  const double r_min = min_eigenvalue(R);
  if (r_min <= 0.0) {
    std::ostringstream msg;
    msg << "QuadCostModel '" << label << "': R not PD (min eigenvalue "
        << r_min << ")";
    throw std::invalid_argument(msg.str());
  }
  QuadCostModel cost;
  cost.Q = Q;
  cost.R = R;
  cost.label = std::move(label);
  return cost;
}

QuadCostModel QuadCostModel::scalar(double q, double r, std::string label) {
  Eigen::MatrixXd Q(1, 1), R(1, 1);
  Q << q;
  R << r;
  return make(Q, R, std::move(label));
}

StackelbergGame StackelbergGame::make(LtiGameDynamics dyn,
                                      QuadCostModel leader_cost,
                                      QuadCostModel follower_true_cost,
                                      int T) {
  if (T < 1) throw std::invalid_argument("StackelbergGame: T must be >= 1");
  if (leader_cost.state_dim() != dyn.n ||
      follower_true_cost.state_dim() != dyn.n ||
      leader_cost.control_dim() != dyn.m_L ||
      follower_true_cost.control_dim() != dyn.m_F) {
    throw std::invalid_argument(
        "StackelbergGame: cost dimensions do not match dynamics");
  }
  StackelbergGame game;
  game.dyn = std::move(dyn);
  game.leader_cost = std::move(leader_cost);
  game.follower_true_cost = std::move(follower_true_cost);
  game.T = T;
  return game;
}

double eval_cost(const Trajectory& traj, Player controls_of,
                 const QuadCostModel& cost, bool include_terminal) {
  const auto& us = controls_of == Player::kLeader ? traj.u_L : traj.u_F;
  if (!traj.states.empty() && traj.states.front().size() != cost.state_dim()) {
    throw std::invalid_argument("eval_cost: state dimension mismatch");
  }
  if (!us.empty() && us.front().size() != cost.control_dim()) {
    throw std::invalid_argument("eval_cost: control dimension mismatch");
  }
  double J = 0.0;
  for (int t = 0; t < traj.steps(); ++t) {
    J += traj.states[t].dot(cost.Q * traj.states[t]) +
         us[t].dot(cost.R * us[t]);
  }
  if (include_terminal) {
    const Eigen::VectorXd& xT = traj.states.back();
    J += xT.dot(cost.Q * xT);
  }
  return J;
}

CostBreakdown decompose_cost(const Trajectory& traj,
                             const QuadCostModel& leader_cost, int tau) {
  const int T = traj.steps();
  if (tau <= 0 || tau > T) {
    std::ostringstream msg;
    msg << "decompose_cost: tau = " << tau << " outside (0, " << T << "]";
    throw std::invalid_argument(msg.str());
  }
  CostBreakdown bd;
  bd.tau = tau;
  for (int t = 0; t < tau; ++t) {
    bd.pre_update += traj.states[t].dot(leader_cost.Q * traj.states[t]) +
                     traj.u_L[t].dot(leader_cost.R * traj.u_L[t]);
  }
  for (int t = tau; t < T; ++t) {
    bd.post_update += traj.states[t].dot(leader_cost.Q * traj.states[t]) +
                      traj.u_L[t].dot(leader_cost.R * traj.u_L[t]);
  }
  bd.post_update += traj.states[T].dot(leader_cost.Q * traj.states[T]);
  bd.total = bd.pre_update + bd.post_update;
  return bd;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> lift_block_costs(
    const QuadCostModel& cost, int T) {
  if (T < 1) throw std::invalid_argument("lift_block_costs: T must be >= 1");
  const int n = cost.state_dim();
  const int m = cost.control_dim();
  if (static_cast<long long>(n) * (T + 1) > kMaxStackedRows) {
    throw std::invalid_argument("lift_block_costs: size exceeds cap");
  }
  Eigen::MatrixXd Q_bar = Eigen::MatrixXd::Zero(n * (T + 1), n * (T + 1));
  Eigen::MatrixXd R_bar = Eigen::MatrixXd::Zero(m * T, m * T);
  for (int k = 0; k <= T; ++k) Q_bar.block(k * n, k * n, n, n) = cost.Q;
  for (int k = 0; k < T; ++k) R_bar.block(k * m, k * m, m, m) = cost.R;
  return {std::move(Q_bar), std::move(R_bar)};
}

}  // namespace stackbelief
