#include "stackbelief/belief_protocol.hpp"

#include <doctest.h>

#include "fixtures.hpp"
#include "stackbelief/fse.hpp"
#include "stackbelief/olse.hpp"
#include "stackbelief/scenario.hpp"

using namespace stackbelief;
using namespace stackbelief::testing;

TEST_CASE("example 1 totals under both constant beliefs") {
  const auto game = example1_game();
  const RunRecord rs = run_with_update(game, example1_bstar(), example1_bstar(),
                                       3, InfoStructure::kOpenLoop,
                                       example1_x0());
  CHECK(std::abs(rs.total_leader_cost() - 1493.9) <= 0.5);
  CHECK(std::abs(rs.breakdown.pre_update - 1443.18) <= 0.1);
  CHECK(std::abs(rs.breakdown.post_update - 50.72) <= 0.1);

  const RunRecord rp = run_with_update(game, example1_bprime(),
                                       example1_bprime(), 3,
                                       InfoStructure::kOpenLoop, example1_x0());
  CHECK(std::abs(rp.total_leader_cost() - 1390.6) <= 0.5);
  CHECK(std::abs(rp.breakdown.pre_update - 1227.72) <= 0.1);
  CHECK(std::abs(rp.breakdown.post_update - 162.88) <= 0.1);

  CHECK(rp.total_leader_cost() < rs.total_leader_cost());
  CHECK(rs.trajectory.max_step_residual(game.dyn) < 1e-9);
}

TEST_CASE("example 2 totals under feedback information") {
  const auto game = example2_game();
  const RunRecord rs = run_with_update(game, example2_bstar(), example2_bstar(),
                                       3, InfoStructure::kFeedback,
                                       example2_x0());
  const RunRecord rp = run_with_update(game, example2_bprime(),
                                       example2_bprime(), 3,
                                       InfoStructure::kFeedback, example2_x0());
  CHECK(std::abs(rs.total_leader_cost() - 347.2) <= 0.5);
  CHECK(std::abs(rp.total_leader_cost() - 299.4) <= 0.5);
  CHECK(rp.total_leader_cost() < rs.total_leader_cost());
}

TEST_CASE("compare_beliefs reproduces the worked-example winners") {
  SUBCASE("example 1") {
    const auto game = example1_game();
    const auto cmp =
        compare_beliefs(game, {example1_bstar(), example1_bprime()}, 3,
                        InfoStructure::kOpenLoop, example1_x0());
    CHECK(cmp.winner == "b'");
    CHECK(cmp.totals[1] < cmp.totals[0]);
  }
  SUBCASE("example 2") {
    const auto game = example2_game();
    const auto cmp =
        compare_beliefs(game, {example2_bstar(), example2_bprime()}, 3,
                        InfoStructure::kFeedback, example2_x0());
    CHECK(cmp.winner == "b'");
  }
  SUBCASE("singleton set wins trivially") {
    const auto game = example1_game();
    const auto cmp = compare_beliefs(game, {example1_bstar()}, 3,
                                     InfoStructure::kOpenLoop, example1_x0());
    CHECK(cmp.winner == "b*");
  }
}

TEST_CASE("composite trajectory stitches bit-for-bit at tau") {
  const auto game = example1_game();
  const RunRecord rec = run_with_update(game, example1_bstar(),
                                        example1_bprime(), 3,
                                        InfoStructure::kOpenLoop, example1_x0());
  // Pre-update segment replayed standalone must hit the same x_tau.
  const Eigen::VectorXd uL =
      solve_olse(game, example1_bstar(), example1_x0());
  const OlBrMap br = build_ol_br(game.dyn, game.follower_true_cost, 6);
  const Trajectory pre = rollout_open_loop(
      game.dyn, example1_x0(), unstack_controls(uL, 1),
      unstack_controls(br.respond(uL, example1_x0()), 1));
  CHECK(rec.trajectory.states[3](0) == pre.states[3](0));
  CHECK(rec.schedule.segments.size() == 2);
  CHECK(rec.schedule.segments[1].start_time == 3);
  CHECK(rec.leader_announcements[1].start_time == 3);
}

TEST_CASE("feedback constant-belief runs reproduce the full-horizon FSE") {
  const auto game = example2_game();
  const auto full = solve_fse(game.dyn, game.leader_cost, example2_bstar(),
                              game.T + 1);
  for (int tau = 1; tau <= game.T; ++tau) {
    const RunRecord rec = run_with_update(game, example2_bstar(),
                                          example2_bstar(), tau,
                                          InfoStructure::kFeedback,
                                          example2_x0());
    // Every announcement segment must carry exactly the full solve's tail.
    for (std::size_t seg = 0; seg < rec.leader_announcements.size(); ++seg) {
      const StrategyProfile& ann = rec.leader_announcements[seg];
      for (int s = 0; s < ann.steps(); ++s) {
        const auto t = static_cast<std::size_t>(ann.start_time + s);
        CHECK((ann.gains[static_cast<std::size_t>(s)] - full.K_L[t])
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
      }
    }
  }
}

TEST_CASE("open-loop tau = T degenerates to the pure OLSE announcement") {
  const auto game = example1_game();
  const RunRecord rec = run_with_update(game, example1_bprime(),
                                        example1_bstar(), game.T,
                                        InfoStructure::kOpenLoop, example1_x0());
  CHECK(rec.schedule.segments.size() == 1);
  const Eigen::VectorXd uL = solve_olse(game, example1_bprime(), example1_x0());
  for (int t = 0; t < game.T; ++t) {
    CHECK(rec.trajectory.u_L[static_cast<std::size_t>(t)](0) ==
          uL(t));
  }
  // Post segment is the terminal cost only.
  const Eigen::VectorXd xT = rec.trajectory.states.back();
  CHECK(rec.breakdown.post_update ==
        doctest::Approx(xT.dot(game.leader_cost.Q * xT)));
}

TEST_CASE("executed follower controls are the true BR to each announcement") {
  const auto game = example1_game();
  const RunRecord rec = run_with_update(game, example1_bprime(),
                                        example1_bstar(), 3,
                                        InfoStructure::kOpenLoop, example1_x0());
  REQUIRE(rec.leader_announcements.size() == 2);
  for (std::size_t seg = 0; seg < rec.leader_announcements.size(); ++seg) {
    const StrategyProfile& ann = rec.leader_announcements[seg];
    const int start = ann.start_time;
    const int seg_end = seg + 1 < rec.leader_announcements.size()
                            ? rec.leader_announcements[seg + 1].start_time
                            : game.T;
    const StackedMatrices stk = build_stacked(game.dyn, ann.steps() + 1);
    const Eigen::VectorXd x_start =
        rec.trajectory.states[static_cast<std::size_t>(start)];
    // The full-horizon response to this announcement is first-order optimal...
    const Eigen::VectorXd response =
        build_ol_br(game.dyn, game.follower_true_cost, stk)
            .respond(stack_controls(ann.controls), x_start);
    const Eigen::VectorXd grad = follower_lifted_gradient(
        game.dyn, game.follower_true_cost, stk, x_start,
        stack_controls(ann.controls), response);
    CHECK(grad.norm() <= 1e-7);
    // ...and the executed controls on the segment are exactly its prefix.
    for (int t = start; t < seg_end; ++t) {
      CHECK(rec.trajectory.u_F[static_cast<std::size_t>(t)](0) ==
            response(t - start));
    }
  }
}

TEST_CASE("single-hypothesis adaptive equals the fixed scheme bit-for-bit") {
  const auto game = example1_game();
  for (auto info : {InfoStructure::kOpenLoop, InfoStructure::kFeedback}) {
    for (int tau : {1, 2, 5}) {
      const RunRecord fixed = run_fixed_periodic(game, example1_bstar(), tau,
                                                 info, example1_x0());
      const RunRecord adaptive = run_adaptive(game, {example1_bstar()}, tau,
                                              info, example1_x0());
      REQUIRE(fixed.trajectory.horizon_len() ==
              adaptive.trajectory.horizon_len());
      for (int t = 0; t <= game.T; ++t) {
        CHECK(fixed.trajectory.states[static_cast<std::size_t>(t)](0) ==
              adaptive.trajectory.states[static_cast<std::size_t>(t)](0));
      }
      CHECK(fixed.total_leader_cost() == adaptive.total_leader_cost());
    }
  }
}

TEST_CASE("two-segment adaptive run matches run_with_update at matching tau") {
  // With tau chosen so only one mid-run update happens, the adaptive engine
  // with the single true hypothesis is the two-belief protocol.
  const auto game = example1_game();
  const RunRecord two = run_with_update(game, example1_bstar(),
                                        example1_bstar(), 3,
                                        InfoStructure::kOpenLoop, example1_x0());
  const RunRecord adaptive = run_adaptive(game, {example1_bstar()}, 3,
                                          InfoStructure::kOpenLoop,
                                          example1_x0());
  CHECK(two.total_leader_cost() == adaptive.total_leader_cost());
  for (int t = 0; t <= game.T; ++t) {
    CHECK(two.trajectory.states[static_cast<std::size_t>(t)](0) ==
          adaptive.trajectory.states[static_cast<std::size_t>(t)](0));
  }
}

TEST_CASE("adaptive posterior favors the avoiding model when it is true") {
  const ScenarioParams params = ScenarioParams::defaults();
  const IntentionSet intentions = build_intentions(params);
  const auto dyn = build_joint_dynamics(0.8, 0.9);
  const auto game = StackelbergGame::make(dyn, build_leader_cost(params),
                                          intentions.by_label("A"), 10);
  Eigen::VectorXd x0(8);
  x0 << 5.0, -1.0, -4.0, 2.0, 3.0, 0.5, -2.0, 1.0;
  const RunRecord rec = run_adaptive(game, intentions.as_vector(), 2,
                                     InfoStructure::kOpenLoop, x0);
  const Eigen::VectorXd last = rec.posterior_trace.back();
  CHECK(last(2) > last(0));
  CHECK(last(2) > last(1));
  CHECK(rec.posterior_trace.size() == static_cast<std::size_t>(game.T + 1));
  for (const auto& p : rec.posterior_trace) {
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(rec.schedule.scheme_label == "adaptive");
}

TEST_CASE("adaptive tau = T solves once under the uniform-prior MAP") {
  const auto game = example1_game();
  const std::vector<QuadCostModel> hyps{example1_bstar(), example1_bprime()};
  const RunRecord rec = run_adaptive(game, hyps, game.T,
                                     InfoStructure::kOpenLoop, example1_x0());
  CHECK(rec.schedule.segments.size() == 1);
  // Tie on the uniform prior resolves to the first hypothesis.
  CHECK(rec.schedule.segments[0].belief.label == "b*");
}

TEST_CASE("tau validation") {
  const auto game = example1_game();
  CHECK_THROWS_AS(run_with_update(game, example1_bstar(), example1_bstar(), 0,
                                  InfoStructure::kOpenLoop, example1_x0()),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with_update(game, example1_bstar(), example1_bstar(), 6,
                                  InfoStructure::kOpenLoop, example1_x0()),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_adaptive(game, {}, 1, InfoStructure::kOpenLoop,
                               example1_x0()),
                  std::invalid_argument);
}
