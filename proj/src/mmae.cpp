#include "stackbelief/mmae.hpp"

#include <cmath>
#include <stdexcept>

#include "stackbelief/fse.hpp"
#include "stackbelief/olse.hpp"
#include "stackbelief/strategy.hpp"

namespace stackbelief {

EstimatorState make_uniform_estimator(std::vector<QuadCostModel> hypotheses) {
  if (hypotheses.empty()) {
    throw std::invalid_argument("make_uniform_estimator: empty hypothesis set");
  }
  EstimatorState state;
  state.probs = Eigen::VectorXd::Constant(
      static_cast<Eigen::Index>(hypotheses.size()),
      1.0 / static_cast<double>(hypotheses.size()));
  state.hypotheses = std::move(hypotheses);
  state.step = 0;
  return state;
}

namespace {

StrategyProfile response_impl(const LtiGameDynamics& dyn,
                              const QuadCostModel& hypothesis,
                              const StrategyProfile& leader_announcement,
                              const Eigen::VectorXd& x_at_announcement,
                              const StackedMatrices* stk) {
  StrategyProfile resp;
  resp.info = leader_announcement.info;
  resp.start_time = leader_announcement.start_time;
  if (leader_announcement.info == InfoStructure::kOpenLoop) {
    const int horizon_len = leader_announcement.steps() + 1;
    const OlBrMap br = stk ? build_ol_br(dyn, hypothesis, *stk)
                           : build_ol_br(dyn, hypothesis, horizon_len);
    resp.controls = unstack_controls(
        br.respond(stack_controls(leader_announcement.controls),
                   x_at_announcement),
        dyn.m_F);
  } else {
    resp.gains = follower_feedback_response(dyn, hypothesis,
                                            leader_announcement.gains)
                     .realized_gains;
  }
  return resp;
}

}  // namespace

StrategyProfile hypothesis_response(const LtiGameDynamics& dyn,
                                    const QuadCostModel& hypothesis,
                                    const StrategyProfile& leader_announcement,
                                    const Eigen::VectorXd& x_at_announcement) {
  return response_impl(dyn, hypothesis, leader_announcement, x_at_announcement,
                       nullptr);
}

StrategyProfile hypothesis_response(const LtiGameDynamics& dyn,
                                    const QuadCostModel& hypothesis,
                                    const StrategyProfile& leader_announcement,
                                    const Eigen::VectorXd& x_at_announcement,
                                    const StackedMatrices& stk) {
  return response_impl(dyn, hypothesis, leader_announcement, x_at_announcement,
                       &stk);
}

Eigen::VectorXd predict_state(const LtiGameDynamics& dyn,
                              const Eigen::VectorXd& x_prev,
                              const Eigen::VectorXd& u_L_executed,
                              const StrategyProfile& hypothesis_response,
                              int t) {
  const Eigen::VectorXd u_F = hypothesis_response.control_at(t, x_prev);
  return dyn.A * x_prev + dyn.B_L * u_L_executed + dyn.B_F * u_F;
}

Eigen::VectorXd likelihoods_from_norms(const Eigen::VectorXd& residual_norms) {
  if (residual_norms.size() == 0) {
    throw std::invalid_argument("likelihoods_from_norms: no hypotheses");
  }
  if (!residual_norms.allFinite()) {
    throw std::runtime_error("likelihoods_from_norms: non-finite residual");
  }
  const double shift = residual_norms.minCoeff();
  Eigen::VectorXd lik =
      (-(residual_norms.array() - shift)).exp().matrix();
  return lik / lik.sum();
}

ResidualReport compute_residuals(
    const LtiGameDynamics& dyn, const Eigen::VectorXd& x_observed,
    const Eigen::VectorXd& x_prev, const Eigen::VectorXd& u_L_executed,
    const std::vector<StrategyProfile>& hypothesis_responses, int t) {
  ResidualReport report;
  const auto count = static_cast<Eigen::Index>(hypothesis_responses.size());
  Eigen::VectorXd norms(count);
  report.residuals.reserve(hypothesis_responses.size());
  for (Eigen::Index i = 0; i < count; ++i) {
    Eigen::VectorXd e =
        x_observed -
        predict_state(dyn, x_prev, u_L_executed, hypothesis_responses[i], t);
    norms(i) = e.norm();
    report.residuals.push_back(std::move(e));
  }
  report.likelihoods = likelihoods_from_norms(norms);
  return report;
}

EstimatorState bayes_update(const EstimatorState& state,
                            const Eigen::VectorXd& likelihoods) {
  if (likelihoods.size() != state.probs.size()) {
    throw std::invalid_argument("bayes_update: likelihood size mismatch");
  }
  Eigen::VectorXd posterior = likelihoods.cwiseProduct(state.probs);
  const double normalizer = posterior.sum();
  if (!(normalizer > 0.0) || !std::isfinite(normalizer)) {
    throw std::runtime_error("bayes_update: posterior underflow");
  }
  posterior /= normalizer;
  posterior = posterior.cwiseMax(kPosteriorFloor);
  posterior /= posterior.sum();

  EstimatorState next = state;
  next.probs = std::move(posterior);
  next.step = state.step + 1;
  return next;
}

int map_index(const EstimatorState& state) {
  int best = 0;
  for (int i = 1; i < state.probs.size(); ++i) {
    if (state.probs(i) > state.probs(best)) best = i;
  }
  return best;
}

const QuadCostModel& map_belief(const EstimatorState& state) {
  return state.hypotheses[static_cast<std::size_t>(map_index(state))];
}

}  // namespace stackbelief
