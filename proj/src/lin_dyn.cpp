#include "stackbelief/lin_dyn.hpp"

#include <sstream>
#include <stdexcept>

namespace stackbelief {

LtiGameDynamics LtiGameDynamics::make(const Eigen::MatrixXd& A,
                                      const Eigen::MatrixXd& B_L,
                                      const Eigen::MatrixXd& B_F) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("LtiGameDynamics: A must be square");
  }
  if (B_L.rows() != A.rows() || B_F.rows() != A.rows()) {
    std::ostringstream msg;
    msg << "LtiGameDynamics: control matrix rows (" << B_L.rows() << ", "
        << B_F.rows() << ") must match state dimension " << A.rows();
    throw std::invalid_argument(msg.str());
  }
  if (!A.allFinite() || !B_L.allFinite() || !B_F.allFinite()) {
    throw std::invalid_argument("LtiGameDynamics: non-finite entry");
  }
  LtiGameDynamics dyn;
  dyn.A = A;
  dyn.B_L = B_L;
  dyn.B_F = B_F;
  dyn.n = static_cast<int>(A.rows());
  dyn.m_L = static_cast<int>(B_L.cols());
  dyn.m_F = static_cast<int>(B_F.cols());
  return dyn;
}

LtiGameDynamics LtiGameDynamics::scalar(double a, double b_l, double b_f) {
  Eigen::MatrixXd A(1, 1), BL(1, 1), BF(1, 1);
  A << a;
  BL << b_l;
  BF << b_f;
  return make(A, BL, BF);
}

StackedMatrices build_stacked(const LtiGameDynamics& dyn, int horizon_len,
                              int max_rows) {
  if (horizon_len < 1) {
    throw std::invalid_argument("build_stacked: horizon_len must be >= 1");
  }
  const int n = dyn.n;
  if (static_cast<long long>(n) * horizon_len > max_rows) {
    std::ostringstream msg;
    msg << "build_stacked: n*horizon_len = " << n * horizon_len
        << " exceeds cap " << max_rows;
    throw std::invalid_argument(msg.str());
  }
  const int steps = horizon_len - 1;

  StackedMatrices stk;
  stk.horizon_len = horizon_len;
  stk.H.resize(n * horizon_len, n);
  stk.G_L = Eigen::MatrixXd::Zero(n * horizon_len, dyn.m_L * steps);
  stk.G_F = Eigen::MatrixXd::Zero(n * horizon_len, dyn.m_F * steps);

  // Powers of A up to A^(horizon_len-1); H block r is A^r.
  std::vector<Eigen::MatrixXd> pow(horizon_len);
  pow[0] = Eigen::MatrixXd::Identity(n, n);
  for (int r = 1; r < horizon_len; ++r) pow[r] = dyn.A * pow[r - 1];
  for (int r = 0; r < horizon_len; ++r) stk.H.middleRows(r * n, n) = pow[r];

  // Block (r, c) of G^i is A^(r-c-1) B^i for r > c; first block row is zero.
  std::vector<Eigen::MatrixXd> powBL(steps), powBF(steps);
  for (int k = 0; k < steps; ++k) {
    powBL[k] = pow[k] * dyn.B_L;
    powBF[k] = pow[k] * dyn.B_F;
  }
  for (int r = 1; r < horizon_len; ++r) {
    for (int c = 0; c < r; ++c) {
      stk.G_L.block(r * n, c * dyn.m_L, n, dyn.m_L) = powBL[r - c - 1];
      stk.G_F.block(r * n, c * dyn.m_F, n, dyn.m_F) = powBF[r - c - 1];
    }
  }
  return stk;
}

const StackedMatrices& StackedCache::get(int horizon_len) {
  auto it = cache_.find(horizon_len);
  if (it == cache_.end()) {
    it = cache_.emplace(horizon_len, build_stacked(dyn_, horizon_len)).first;
  }
  return it->second;
}

double Trajectory::max_step_residual(const LtiGameDynamics& dyn) const {
  double worst = 0.0;
  for (int t = 0; t < steps(); ++t) {
    Eigen::VectorXd pred = dyn.A * states[t] + dyn.B_L * u_L[t] + dyn.B_F * u_F[t];
    worst = std::max(worst, (states[t + 1] - pred).cwiseAbs().maxCoeff());
  }
  return worst;
}

Trajectory rollout_open_loop(const LtiGameDynamics& dyn,
                             const Eigen::VectorXd& x0,
                             const std::vector<Eigen::VectorXd>& u_L,
                             const std::vector<Eigen::VectorXd>& u_F,
                             int start_time) {
  if (u_L.size() != u_F.size()) {
    std::ostringstream msg;
    msg << "rollout_open_loop: control sequence lengths differ (" << u_L.size()
        << " vs " << u_F.size() << ")";
    throw std::invalid_argument(msg.str());
  }
  if (x0.size() != dyn.n) {
    throw std::invalid_argument("rollout_open_loop: x0 dimension mismatch");
  }
  Trajectory traj;
  traj.start_time = start_time;
  traj.states.reserve(u_L.size() + 1);
  traj.states.push_back(x0);
  for (std::size_t t = 0; t < u_L.size(); ++t) {
    if (u_L[t].size() != dyn.m_L || u_F[t].size() != dyn.m_F) {
      throw std::invalid_argument("rollout_open_loop: control dim mismatch");
    }
    traj.states.push_back(dyn.A * traj.states.back() + dyn.B_L * u_L[t] +
                          dyn.B_F * u_F[t]);
  }
  traj.u_L = u_L;
  traj.u_F = u_F;
  return traj;
}

Trajectory rollout_feedback(const LtiGameDynamics& dyn,
                            const Eigen::VectorXd& x0,
                            const std::vector<Eigen::MatrixXd>& K_L,
                            const std::vector<Eigen::MatrixXd>& K_F,
                            int start_time) {
  if (K_L.size() != K_F.size()) {
    throw std::invalid_argument("rollout_feedback: gain sequence lengths differ");
  }
  if (x0.size() != dyn.n) {
    throw std::invalid_argument("rollout_feedback: x0 dimension mismatch");
  }
  Trajectory traj;
  traj.start_time = start_time;
  traj.states.push_back(x0);
  for (std::size_t t = 0; t < K_L.size(); ++t) {
    if (K_L[t].rows() != dyn.m_L || K_L[t].cols() != dyn.n ||
        K_F[t].rows() != dyn.m_F || K_F[t].cols() != dyn.n) {
      throw std::invalid_argument("rollout_feedback: gain dim mismatch");
    }
    const Eigen::VectorXd& x = traj.states.back();
    traj.u_L.push_back(-K_L[t] * x);
    traj.u_F.push_back(-K_F[t] * x);
    traj.states.push_back(dyn.A * x + dyn.B_L * traj.u_L.back() +
                          dyn.B_F * traj.u_F.back());
  }
  return traj;
}

Eigen::VectorXd stack_controls(const std::vector<Eigen::VectorXd>& seq) {
  Eigen::Index total = 0;
  for (const auto& u : seq) total += u.size();
  Eigen::VectorXd out(total);
  Eigen::Index at = 0;
  for (const auto& u : seq) {
    out.segment(at, u.size()) = u;
    at += u.size();
  }
  return out;
}

std::vector<Eigen::VectorXd> unstack_controls(const Eigen::VectorXd& stacked,
                                              int m) {
  if (m <= 0 || stacked.size() % m != 0) {
    throw std::invalid_argument("unstack_controls: size not a multiple of m");
  }
  std::vector<Eigen::VectorXd> seq(stacked.size() / m);
  for (std::size_t t = 0; t < seq.size(); ++t) {
    seq[t] = stacked.segment(static_cast<Eigen::Index>(t) * m, m);
  }
  return seq;
}

}  // namespace stackbelief
