#include "stackbelief/scenario.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>
#include <stdexcept>

namespace stackbelief {

namespace {

using Eigen::Matrix2d;
using Eigen::MatrixXd;

void require_pd(const Matrix2d& M, const char* name, double sign) {
  // sign +1: block must be > 0; sign -1: block must be < 0.
  Eigen::SelfAdjointEigenSolver<Matrix2d> es(sign * M, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    std::ostringstream msg;
    msg << "ScenarioParams: block " << name << " must be "
        << (sign > 0 ? "positive" : "negative") << " definite";
    throw std::invalid_argument(msg.str());
  }
}

double min_eig(const MatrixXd& Q) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(Q, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// If the assembled matrix dips below PSD, pad the diagonal of the listed
// 2x2 slots until it clears: first the blocks the constraints leave free,
// then (if the deficiency sits in a constrained direction) every slot the
// matrix actually uses. Negative eigenvectors live in the support subspace,
// so the second pass always succeeds.
MatrixXd repair_psd(MatrixXd Q, const std::vector<int>& free_slots,
                    const std::vector<int>& support_slots) {
  double lambda = min_eig(Q);
  if (lambda >= kPsdEigTolerance) return Q;
  for (int slot : free_slots) {
    Q.block<2, 2>(2 * slot, 2 * slot) += (-lambda + 1e-6) * Matrix2d::Identity();
  }
  lambda = min_eig(Q);
  if (lambda >= kPsdEigTolerance) return Q;
  for (int slot : support_slots) {
    Q.block<2, 2>(2 * slot, 2 * slot) += (-lambda + 1e-6) * Matrix2d::Identity();
  }
  lambda = min_eig(Q);
  if (lambda < kPsdEigTolerance) {
    std::ostringstream msg;
    msg << "ScenarioParams: PSD repair failed, min eigenvalue " << lambda;
    throw std::invalid_argument(msg.str());
  }
  return Q;
}

MatrixXd scalar_matrix(double v) {
  MatrixXd M(1, 1);
  M << v;
  return M;
}

}  // namespace

ScenarioParams ScenarioParams::defaults() {
  ScenarioParams p;
  const Matrix2d I = Matrix2d::Identity();
  p.q_l1 = 1.2 * I;
  p.q_l2 = 0.1 * I;
  p.q_l3 = -1.0 * I;
  p.q_l4 = 1.0 * I;
  p.epsilon = 0.1;
  p.r_l = 1.0;

  p.q_f1_t = 1.0 * I;
  p.q_f2_t = 1.1 * I;
  p.q_f3_t = -1.0 * I;

  p.q_f2_i = 1.1 * I;
  p.q_f4_i = -1.0 * I;
  p.q_f5_i = 1.0 * I;

  p.alpha = 0.1;
  p.q_f3_a = 0.1 * I;
  p.q_f2_a = 1.2 * I;
  p.q_f4_a = -1.0 * I;
  p.q_f5_a = 1.0 * I;
  p.r_f = 1.0;
  return p;
}

void ScenarioParams::validate() const {
  require_pd(q_l2, "Q_L2", +1.0);
  require_pd(q_l3, "Q_L3", -1.0);
  require_pd(q_f3_t, "Q_F3(T)", -1.0);
  require_pd(q_f4_i, "Q_F4(I)", -1.0);
  require_pd(q_f4_a, "Q_F4(A)", -1.0);
  if (epsilon <= 0.0) {
    throw std::invalid_argument("ScenarioParams: epsilon must be > 0");
  }
  if (alpha <= 0.0) {
    throw std::invalid_argument("ScenarioParams: alpha must be > 0");
  }
  if (r_l <= 0.0 || r_f <= 0.0) {
    throw std::invalid_argument("ScenarioParams: R weights must be > 0");
  }
  if (T < 1 || n_runs < 1 || x0_bound <= 0.0) {
    throw std::invalid_argument("ScenarioParams: bad T/n_runs/x0_bound");
  }
  for (int tau : tau_values) {
    if (tau <= 0) {
      throw std::invalid_argument("ScenarioParams: tau must be positive");
    }
  }
  // Assembly itself throws on a failed PSD check.
  build_leader_cost(*this);
  build_intentions(*this);
}

const QuadCostModel& IntentionSet::by_label(const std::string& label) const {
  for (const auto& m : models) {
    if (m.label == label) return m;
  }
  throw std::invalid_argument("IntentionSet: unknown label '" + label + "'");
}

LtiGameDynamics build_joint_dynamics(double sigma_L, double sigma_F) {
  if (!(sigma_L > 0.0 && sigma_L <= 1.0 && sigma_F > 0.0 && sigma_F <= 1.0)) {
    throw std::invalid_argument(
        "build_joint_dynamics: sigma must lie in (0, 1]");
  }
  Matrix2d A_agent;
  A_agent << 1.0, 1.0, 0.0, 1.0;
  Eigen::Vector2d B_agent(0.5, 1.0);

  MatrixXd A = MatrixXd::Zero(8, 8);
  A.block<2, 2>(0, 0) = A_agent;
  A.block<2, 2>(2, 2) = A_agent;
  A.block<2, 2>(4, 4) = sigma_L * Matrix2d::Identity();
  A.block<2, 2>(6, 6) = sigma_F * Matrix2d::Identity();

  MatrixXd B_L = MatrixXd::Zero(8, 1);
  B_L.block<2, 1>(0, 0) = B_agent;
  MatrixXd B_F = MatrixXd::Zero(8, 1);
  B_F.block<2, 1>(2, 0) = B_agent;
  return LtiGameDynamics::make(A, B_L, B_F);
}

QuadCostModel build_leader_cost(const ScenarioParams& params) {
  MatrixXd Q = MatrixXd::Zero(8, 8);
  Q.block<2, 2>(0, 0) = params.q_l1;
  Q.block<2, 2>(0, 2) = params.q_l2;
  Q.block<2, 2>(2, 0) = params.q_l2.transpose();
  Q.block<2, 2>(0, 4) = params.q_l3;
  Q.block<2, 2>(4, 0) = params.q_l3.transpose();
  Q.block<2, 2>(2, 2) = params.epsilon * Matrix2d::Identity();
  Q.block<2, 2>(4, 4) = params.q_l4;
  Q = repair_psd(std::move(Q), {0, 2}, {0, 1, 2});
  return QuadCostModel::make(Q, scalar_matrix(params.r_l), "L");
}

IntentionSet build_intentions(const ScenarioParams& params) {
  MatrixXd QT = MatrixXd::Zero(8, 8);
  QT.block<2, 2>(0, 0) = params.q_f1_t;
  QT.block<2, 2>(0, 2) = params.q_f3_t;
  QT.block<2, 2>(2, 0) = params.q_f3_t.transpose();
  QT.block<2, 2>(2, 2) = params.q_f2_t;
  QT = repair_psd(std::move(QT), {0, 1}, {0, 1});

  MatrixXd QI = MatrixXd::Zero(8, 8);
  QI.block<2, 2>(2, 2) = params.q_f2_i;
  QI.block<2, 2>(2, 6) = params.q_f4_i;
  QI.block<2, 2>(6, 2) = params.q_f4_i.transpose();
  QI.block<2, 2>(6, 6) = params.q_f5_i;
  QI = repair_psd(std::move(QI), {1, 3}, {1, 3});

  MatrixXd QA = MatrixXd::Zero(8, 8);
  QA.block<2, 2>(0, 0) = params.alpha * Matrix2d::Identity();
  QA.block<2, 2>(0, 2) = params.q_f3_a;
  QA.block<2, 2>(2, 0) = params.q_f3_a.transpose();
  QA.block<2, 2>(2, 2) = params.q_f2_a;
  QA.block<2, 2>(2, 6) = params.q_f4_a;
  QA.block<2, 2>(6, 2) = params.q_f4_a.transpose();
  QA.block<2, 2>(6, 6) = params.q_f5_a;
  QA = repair_psd(std::move(QA), {1, 3}, {0, 1, 3});

  const MatrixXd R = scalar_matrix(params.r_f);
  return IntentionSet{{QuadCostModel::make(QT, R, "T"),
                       QuadCostModel::make(QI, R, "I"),
                       QuadCostModel::make(QA, R, "A")}};
}

InitialDraw sample_initial(Rng& rng, const ScenarioParams& params) {
  InitialDraw draw;
  draw.x0.resize(8);
  for (int i = 0; i < 8; ++i) {
    draw.x0(i) = rng.uniform(-params.x0_bound, params.x0_bound);
  }
  draw.sigma_L = rng.uniform_pos01();
  draw.sigma_F = rng.uniform_pos01();
  return draw;
}

}  // namespace stackbelief
