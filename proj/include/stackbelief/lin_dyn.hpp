#ifndef STACKBELIEF_LIN_DYN_HPP
#define STACKBELIEF_LIN_DYN_HPP

#include <Eigen/Dense>
#include <map>
#include <vector>

namespace stackbelief {

// Joint LTI dynamics x_{t+1} = A x_t + B_L u^L_t + B_F u^F_t shared by both
// players.
struct LtiGameDynamics {
  Eigen::MatrixXd A;    // n x n
  Eigen::MatrixXd B_L;  // n x m_L
  Eigen::MatrixXd B_F;  // n x m_F
  int n = 0;
  int m_L = 0;
  int m_F = 0;

  // Validates mutual dimension consistency and finiteness.
  static LtiGameDynamics make(const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& B_L,
                              const Eigen::MatrixXd& B_F);

  // Scalar game convenience (n = m_L = m_F = 1).
  static LtiGameDynamics scalar(double a, double b_l, double b_f);
};

// Trajectory-level matrices for a horizon of `horizon_len` states:
//   x_stacked = H x_0 + G_L u_L_stacked + G_F u_F_stacked.
// H's first block row is the identity; the G's are strictly block lower
// triangular with block (r, c) = A^(r-c-1) B for r > c.
struct StackedMatrices {
  Eigen::MatrixXd H;    // n*horizon_len x n
  Eigen::MatrixXd G_L;  // n*horizon_len x m_L*(horizon_len-1)
  Eigen::MatrixXd G_F;  // n*horizon_len x m_F*(horizon_len-1)
  int horizon_len = 0;
};

// Cap on n*horizon_len before build_stacked refuses the allocation.
inline constexpr int kMaxStackedRows = 16384;

StackedMatrices build_stacked(const LtiGameDynamics& dyn, int horizon_len,
                              int max_rows = kMaxStackedRows);

// Horizon-keyed cache of stacked matrices for one dynamics instance. Monte
// Carlo re-solves thousands of identical-shape truncated games; one cache is
// owned per run (not shared across threads).
class StackedCache {
 public:
  explicit StackedCache(const LtiGameDynamics& dyn) : dyn_(dyn) {}
  const StackedMatrices& get(int horizon_len);
  const LtiGameDynamics& dynamics() const { return dyn_; }

 private:
  LtiGameDynamics dyn_;
  std::map<int, StackedMatrices> cache_;
};

// One playthrough segment: states x_{start_time .. start_time+T^-1} plus the
// controls that produced them. States obey the step recursion to 1e-9.
struct Trajectory {
  std::vector<Eigen::VectorXd> states;  // length horizon_len
  std::vector<Eigen::VectorXd> u_L;     // length horizon_len - 1
  std::vector<Eigen::VectorXd> u_F;     // length horizon_len - 1
  int start_time = 0;

  int horizon_len() const { return static_cast<int>(states.size()); }
  int steps() const { return static_cast<int>(u_L.size()); }
  const Eigen::VectorXd& final_state() const { return states.back(); }

  // Largest |x_{t+1} - (A x_t + B_L u_L + B_F u_F)| entry over all steps.
  double max_step_residual(const LtiGameDynamics& dyn) const;
};

Trajectory rollout_open_loop(const LtiGameDynamics& dyn,
                             const Eigen::VectorXd& x0,
                             const std::vector<Eigen::VectorXd>& u_L,
                             const std::vector<Eigen::VectorXd>& u_F,
                             int start_time = 0);

// Feedback rollout with u^i_t = -K^i_t x_t; realized controls are stored.
Trajectory rollout_feedback(const LtiGameDynamics& dyn,
                            const Eigen::VectorXd& x0,
                            const std::vector<Eigen::MatrixXd>& K_L,
                            const std::vector<Eigen::MatrixXd>& K_F,
                            int start_time = 0);

// Stacked control vector <-> per-step sequence.
Eigen::VectorXd stack_controls(const std::vector<Eigen::VectorXd>& seq);
std::vector<Eigen::VectorXd> unstack_controls(const Eigen::VectorXd& stacked,
                                              int m);

}  // namespace stackbelief

#endif  // STACKBELIEF_LIN_DYN_HPP
