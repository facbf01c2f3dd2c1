#ifndef STACKBELIEF_MMAE_HPP
#define STACKBELIEF_MMAE_HPP

#include <vector>

#include "stackbelief/lq_game.hpp"
#include "stackbelief/strategy.hpp"

namespace stackbelief {

// Bank of follower BR hypotheses with a Bayesian posterior over them.
struct EstimatorState {
  std::vector<QuadCostModel> hypotheses;
  Eigen::VectorXd probs;  // entrywise >= 0, sums to 1
  int step = 0;
};

// Residuals e_t(b) = x_t - x_hat_t(b) per hypothesis, with their softmin
// likelihoods (normalized over the bank).
struct ResidualReport {
  std::vector<Eigen::VectorXd> residuals;
  Eigen::VectorXd likelihoods;
};

// Posterior floor applied after each Bayesian update so no hypothesis is
// permanently eliminated by numerical zero.
inline constexpr double kPosteriorFloor = 1e-12;

EstimatorState make_uniform_estimator(std::vector<QuadCostModel> hypotheses);

// The follower strategy hypothesis `b` prescribes as its best response to a
// leader announcement: the lifted-QP response from the announcement state
// under open loop, or the stage-wise feedback response to the announced gains.
StrategyProfile hypothesis_response(const LtiGameDynamics& dyn,
                                    const QuadCostModel& hypothesis,
                                    const StrategyProfile& leader_announcement,
                                    const Eigen::VectorXd& x_at_announcement);
// Same, reusing prebuilt stacked matrices for the announcement horizon
// (open-loop announcements only need them).
StrategyProfile hypothesis_response(const LtiGameDynamics& dyn,
                                    const QuadCostModel& hypothesis,
                                    const StrategyProfile& leader_announcement,
                                    const Eigen::VectorXd& x_at_announcement,
                                    const StackedMatrices& stk);

// One-step propagation from x_prev with the executed leader control and the
// hypothesis's prescribed follower control at absolute time t.
Eigen::VectorXd predict_state(const LtiGameDynamics& dyn,
                              const Eigen::VectorXd& x_prev,
                              const Eigen::VectorXd& u_L_executed,
                              const StrategyProfile& hypothesis_response,
                              int t);

// Softmin over residual norms: exp(-||e||) / sum exp(-||e||), computed with a
// min shift (exactly shift-invariant, immune to underflow).
Eigen::VectorXd likelihoods_from_norms(const Eigen::VectorXd& residual_norms);

ResidualReport compute_residuals(
    const LtiGameDynamics& dyn, const Eigen::VectorXd& x_observed,
    const Eigen::VectorXd& x_prev, const Eigen::VectorXd& u_L_executed,
    const std::vector<StrategyProfile>& hypothesis_responses, int t);

// posterior ∝ likelihood × prior, floored at kPosteriorFloor, renormalized;
// step incremented.
EstimatorState bayes_update(const EstimatorState& state,
                            const Eigen::VectorXd& likelihoods);

// Argmax hypothesis, ties broken by list order.
int map_index(const EstimatorState& state);
const QuadCostModel& map_belief(const EstimatorState& state);

}  // namespace stackbelief

#endif  // STACKBELIEF_MMAE_HPP
