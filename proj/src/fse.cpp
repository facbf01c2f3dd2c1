#include "stackbelief/fse.hpp"

#include <Eigen/Cholesky>
#include <random>
#include <stdexcept>

namespace stackbelief {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M) {
  return 0.5 * (M + M.transpose());
}

Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& M, const Eigen::MatrixXd& B,
                          const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(std::string(what) + ": singular stage matrix");
  }
  return llt.solve(B);
}

// Follower stage reaction to the predicted state z = A x + B_L u_L given its
// one-step-ahead value matrix W:  u_F = -(R + B_F' W B_F)^-1 B_F' W z.
Eigen::MatrixXd stage_reaction(const LtiGameDynamics& dyn,
                               const Eigen::MatrixXd& R_F,
                               const Eigen::MatrixXd& W) {
  return solve_spd(R_F + dyn.B_F.transpose() * W * dyn.B_F,
                   dyn.B_F.transpose() * W, "follower stage reaction");
}

}  // namespace

Eigen::MatrixXd FeedbackSolution::realized_follower_gain(
    const LtiGameDynamics& dyn, int t) const {
  return K_F[t] * (dyn.A - dyn.B_L * K_L[t]);
}

std::vector<Eigen::MatrixXd> FeedbackSolution::realized_follower_gains(
    const LtiGameDynamics& dyn) const {
  std::vector<Eigen::MatrixXd> out(K_F.size());
  for (int t = 0; t < steps(); ++t) out[t] = realized_follower_gain(dyn, t);
  return out;
}

FeedbackSolution solve_fse(const LtiGameDynamics& dyn,
                           const QuadCostModel& leader_cost,
                           const QuadCostModel& follower_belief_cost,
                           int horizon_len) {
  if (horizon_len < 1) {
    throw std::invalid_argument("solve_fse: horizon_len must be >= 1");
  }
  if (leader_cost.state_dim() != dyn.n ||
      follower_belief_cost.state_dim() != dyn.n ||
      leader_cost.control_dim() != dyn.m_L ||
      follower_belief_cost.control_dim() != dyn.m_F) {
    throw std::invalid_argument("solve_fse: cost dimension mismatch");
  }
  const int steps = horizon_len - 1;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dyn.n, dyn.n);

  FeedbackSolution sol;
  sol.belief_label = follower_belief_cost.label;
  sol.K_L.resize(steps);
  sol.K_F.resize(steps);
  sol.V_L.resize(horizon_len);
  sol.V_F.resize(horizon_len);
  sol.V_L[steps] = leader_cost.Q;
  sol.V_F[steps] = follower_belief_cost.Q;

  for (int t = steps - 1; t >= 0; --t) {
    const Eigen::MatrixXd& VL1 = sol.V_L[t + 1];
    const Eigen::MatrixXd& VF1 = sol.V_F[t + 1];

    const Eigen::MatrixXd KF =
        stage_reaction(dyn, follower_belief_cost.R, VF1);
    const Eigen::MatrixXd M = I - dyn.B_F * KF;  // follower-reacted state map
    const Eigen::MatrixXd MVM = M.transpose() * VL1 * M;
    const Eigen::MatrixXd KL = solve_spd(
        leader_cost.R + dyn.B_L.transpose() * MVM * dyn.B_L,
        dyn.B_L.transpose() * MVM * dyn.A, "solve_fse leader stage");

    const Eigen::MatrixXd Acl = dyn.A - dyn.B_L * KL;
    const Eigen::MatrixXd P = M * Acl;   // closed-loop state map
    const Eigen::MatrixXd U = KF * Acl;  // realized follower feedback

    sol.V_L[t] = symmetrized(leader_cost.Q + KL.transpose() * leader_cost.R * KL +
                             P.transpose() * VL1 * P);
    sol.V_F[t] = symmetrized(follower_belief_cost.Q +
                             U.transpose() * follower_belief_cost.R * U +
                             P.transpose() * VF1 * P);
    sol.K_L[t] = KL;
    sol.K_F[t] = KF;
  }
  return sol;
}

FollowerFbResponse follower_feedback_response(
    const LtiGameDynamics& dyn, const QuadCostModel& follower_cost,
    const std::vector<Eigen::MatrixXd>& announced_K_L) {
  const int steps = static_cast<int>(announced_K_L.size());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dyn.n, dyn.n);

  FollowerFbResponse resp;
  resp.reaction_gains.resize(steps);
  resp.realized_gains.resize(steps);
  Eigen::MatrixXd W = follower_cost.Q;
  for (int t = steps - 1; t >= 0; --t) {
    const Eigen::MatrixXd KF = stage_reaction(dyn, follower_cost.R, W);
    const Eigen::MatrixXd Acl = dyn.A - dyn.B_L * announced_K_L[t];
    const Eigen::MatrixXd U = KF * Acl;
    const Eigen::MatrixXd P = (I - dyn.B_F * KF) * Acl;
    W = symmetrized(follower_cost.Q + U.transpose() * follower_cost.R * U +
                    P.transpose() * W * P);
    resp.reaction_gains[t] = KF;
    resp.realized_gains[t] = U;
  }
  return resp;
}

double fse_cost(const StackelbergGame& game, const FeedbackSolution& solution,
                const Eigen::VectorXd& x0) {
  if (solution.steps() != game.T) {
    throw std::invalid_argument("fse_cost: solution horizon mismatch");
  }
  const FollowerFbResponse resp =
      follower_feedback_response(game.dyn, game.follower_true_cost,
                                 solution.K_L);
  const Trajectory traj =
      rollout_feedback(game.dyn, x0, solution.K_L, resp.realized_gains);
  return eval_cost(traj, Player::kLeader, game.leader_cost, true);
}

StageOptimalityReport check_stage_optimality(const StackelbergGame& game,
                                             const FeedbackSolution& solution,
                                             int t, int n_perturb,
                                             unsigned seed) {
  if (t < 0 || t >= solution.steps()) {
    throw std::invalid_argument("check_stage_optimality: t out of range");
  }
  const LtiGameDynamics& dyn = game.dyn;
  const QuadCostModel& leader_cost = game.leader_cost;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dyn.n, dyn.n);
  const Eigen::MatrixXd& VL1 = solution.V_L[t + 1];
  const Eigen::MatrixXd KF = solution.K_F[t];
  const Eigen::MatrixXd M = I - dyn.B_F * KF;

  // Leader cost-to-go quadratic form at stage t for stage gain K, with the
  // follower's reaction recomputed through M and later gains held fixed.
  const auto cost_matrix = [&](const Eigen::MatrixXd& K) {
    const Eigen::MatrixXd P = M * (dyn.A - dyn.B_L * K);
    return symmetrized(leader_cost.Q + K.transpose() * leader_cost.R * K +
                       P.transpose() * VL1 * P);
  };

  const Eigen::MatrixXd base = cost_matrix(solution.K_L[t]);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  StageOptimalityReport report;
  report.max_improvement = 0.0;
  for (int k = 0; k < n_perturb; ++k) {
    Eigen::MatrixXd dK(dyn.m_L, dyn.n);
    for (int i = 0; i < dK.size(); ++i) dK.data()[i] = gauss(gen);
    const double scale = (k % 2 == 0) ? 1e-3 : 1e-1;
    const Eigen::MatrixXd trial = cost_matrix(solution.K_L[t] + scale * dK);
    Eigen::VectorXd x(dyn.n);
    for (int i = 0; i < dyn.n; ++i) x(i) = gauss(gen);
    x.normalize();
    const double improvement = x.dot(base * x) - x.dot(trial * x);
    report.max_improvement = std::max(report.max_improvement, improvement);
  }
  report.passed = report.max_improvement <= 1e-7;
  return report;
}

}  // namespace stackbelief
