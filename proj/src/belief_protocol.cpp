#include "stackbelief/belief_protocol.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "stackbelief/fse.hpp"
#include "stackbelief/olse.hpp"

namespace stackbelief {

namespace {

using BeliefPicker =
    std::function<const QuadCostModel&(int update_index, int t)>;

// Shared engine: at each update instant the leader re-solves the truncated
// game from the realized state under the picked belief; the true follower
// best-responds to each announcement; the composite trajectory accumulates
// step by step (so the estimator can observe every transition).
RunRecord run_engine(const StackelbergGame& game, InfoStructure info,
                     const Eigen::VectorXd& x0,
                     const std::vector<int>& update_times,
                     int breakdown_tau, const BeliefPicker& pick_belief,
                     EstimatorState* estimator, std::string scheme_label,
                     std::uint64_t seed) {
  const LtiGameDynamics& dyn = game.dyn;
  if (x0.size() != dyn.n) {
    throw std::invalid_argument("belief protocol: x0 dimension mismatch");
  }
  StackedCache cache(dyn);

  RunRecord rec;
  rec.info = info;
  rec.seed = seed;
  rec.schedule.scheme_label = std::move(scheme_label);

  Trajectory& traj = rec.trajectory;
  traj.start_time = 0;
  traj.states.reserve(game.T + 1);
  traj.states.push_back(x0);

  StrategyProfile announcement;
  StrategyProfile true_response;
  std::vector<StrategyProfile> hyp_responses;
  if (estimator) {
    rec.posterior_trace.push_back(estimator->probs);
  }

  std::size_t next_update = 0;
  int update_index = 0;
  for (int t = 0; t < game.T; ++t) {
    const Eigen::VectorXd& x = traj.states.back();
    if (next_update < update_times.size() && update_times[next_update] == t) {
      const QuadCostModel& belief = pick_belief(update_index, t);
      const int horizon_len = game.T - t + 1;
      announcement = StrategyProfile{};
      announcement.info = info;
      announcement.start_time = t;
      if (info == InfoStructure::kOpenLoop) {
        const StackedMatrices& stk = cache.get(horizon_len);
        announcement.controls = unstack_controls(
            solve_olse(dyn, game.leader_cost, belief, x, stk), dyn.m_L);
        true_response =
            hypothesis_response(dyn, game.follower_true_cost, announcement, x,
                                stk);
        if (estimator) {
          hyp_responses.clear();
          for (const auto& hyp : estimator->hypotheses) {
            hyp_responses.push_back(
                hypothesis_response(dyn, hyp, announcement, x, stk));
          }
        }
      } else {
        announcement.gains =
            solve_fse(dyn, game.leader_cost, belief, horizon_len).K_L;
        true_response =
            hypothesis_response(dyn, game.follower_true_cost, announcement, x);
        if (estimator) {
          hyp_responses.clear();
          for (const auto& hyp : estimator->hypotheses) {
            hyp_responses.push_back(
                hypothesis_response(dyn, hyp, announcement, x));
          }
        }
      }
      rec.schedule.segments.push_back({t, belief});
      rec.leader_announcements.push_back(announcement);
      ++next_update;
      ++update_index;
    }

    Eigen::VectorXd u_L = announcement.control_at(t, x);
    Eigen::VectorXd u_F = true_response.control_at(t, x);
    Eigen::VectorXd x_next = dyn.A * x + dyn.B_L * u_L + dyn.B_F * u_F;
    if (estimator) {
      const ResidualReport report =
          compute_residuals(dyn, x_next, x, u_L, hyp_responses, t);
      *estimator = bayes_update(*estimator, report.likelihoods);
      rec.posterior_trace.push_back(estimator->probs);
    }
    traj.u_L.push_back(std::move(u_L));
    traj.u_F.push_back(std::move(u_F));
    traj.states.push_back(std::move(x_next));
  }

  rec.breakdown = decompose_cost(traj, game.leader_cost, breakdown_tau);
  return rec;
}

std::vector<int> periodic_updates(int tau, int T) {
  std::vector<int> times{0};
  for (int t = tau; t < T; t += tau) times.push_back(t);
  return times;
}

void check_tau(int tau, int T) {
  if (tau <= 0 || tau > T) {
    throw std::invalid_argument("belief protocol: tau outside (0, T]");
  }
}

}  // namespace

RunRecord run_with_update(const StackelbergGame& game, const QuadCostModel& b1,
                          const QuadCostModel& b2, int tau, InfoStructure info,
                          const Eigen::VectorXd& x0, std::uint64_t seed) {
  check_tau(tau, game.T);
  std::vector<int> updates{0};
  if (tau < game.T) updates.push_back(tau);
  return run_engine(
      game, info, x0, updates, tau,
      [&](int update_index, int) -> const QuadCostModel& {
        return update_index == 0 ? b1 : b2;
      },
      nullptr, "fixed-belief", seed);
}

RunRecord run_fixed_periodic(const StackelbergGame& game,
                             const QuadCostModel& belief, int tau,
                             InfoStructure info, const Eigen::VectorXd& x0,
                             std::uint64_t seed) {
  check_tau(tau, game.T);
  return run_engine(
      game, info, x0, periodic_updates(tau, game.T), tau,
      [&](int, int) -> const QuadCostModel& { return belief; }, nullptr,
      "fixed-belief", seed);
}

RunRecord run_adaptive(const StackelbergGame& game,
                       const std::vector<QuadCostModel>& hypotheses, int tau,
                       InfoStructure info, const Eigen::VectorXd& x0,
                       std::uint64_t seed) {
  check_tau(tau, game.T);
  EstimatorState estimator = make_uniform_estimator(hypotheses);
  return run_engine(
      game, info, x0, periodic_updates(tau, game.T), tau,
      [&](int, int) -> const QuadCostModel& { return map_belief(estimator); },
      &estimator, "adaptive", seed);
}

BeliefComparison compare_beliefs(const StackelbergGame& game,
                                 const std::vector<QuadCostModel>& beliefs,
                                 int tau, InfoStructure info,
                                 const Eigen::VectorXd& x0) {
  if (beliefs.empty()) {
    throw std::invalid_argument("compare_beliefs: empty belief set");
  }
  BeliefComparison cmp;
  for (const auto& b : beliefs) {
    cmp.records.push_back(run_with_update(game, b, b, tau, info, x0));
    cmp.labels.push_back(b.label);
    cmp.totals.push_back(cmp.records.back().total_leader_cost());
  }
  const std::string& true_label = game.follower_true_cost.label;
  const double min_total = *std::min_element(cmp.totals.begin(),
                                             cmp.totals.end());
  std::string winner;
  for (std::size_t i = 0; i < cmp.labels.size(); ++i) {
    if (cmp.totals[i] > min_total) continue;
    if (cmp.labels[i] == true_label) {
      winner = cmp.labels[i];
      break;
    }
    if (winner.empty() || cmp.labels[i] < winner) winner = cmp.labels[i];
  }
  cmp.winner = winner;
  return cmp;
}

}  // namespace stackbelief
