#include "stackbelief/olse.hpp"

#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace stackbelief;
using namespace stackbelief::testing;

namespace {

void check_close(const Eigen::VectorXd& got, std::vector<double> expect,
                 double tol) {
  REQUIRE(got.size() == static_cast<Eigen::Index>(expect.size()));
  for (Eigen::Index i = 0; i < got.size(); ++i) {
    INFO("entry ", i, ": got ", got(i), " expected ",
         expect[static_cast<std::size_t>(i)]);
    CHECK(std::abs(got(i) - expect[static_cast<std::size_t>(i)]) <= tol);
  }
}

}  // namespace

TEST_CASE("example 1 leader controls under both beliefs") {
  const auto game = example1_game();
  const Eigen::VectorXd uLs = solve_olse(game, example1_bstar(), example1_x0());
  check_close(uLs, {-4.6, -0.86, 0.06, 0.19, 0.12}, 0.01);
  const Eigen::VectorXd uLp = solve_olse(game, example1_bprime(), example1_x0());
  check_close(uLp, {-2.28, 0.4, 0.73, 0.52, 0.25}, 0.01);
}

TEST_CASE("example 1 follower responses to both announcements") {
  const auto game = example1_game();
  const OlBrMap br = build_ol_br(game.dyn, game.follower_true_cost, 6);
  const Eigen::VectorXd uLs = solve_olse(game, example1_bstar(), example1_x0());
  const Eigen::VectorXd uLp = solve_olse(game, example1_bprime(), example1_x0());
  check_close(br.respond(uLs, example1_x0()),
              {-7.53, -4.14, -2.29, -1.21, -0.53}, 0.01);
  check_close(br.respond(uLp, example1_x0()),
              {-13.43, -7.57, -4.25, -2.27, -0.98}, 0.01);
}

TEST_CASE("example 1 truncated re-solve from the realized states") {
  const auto game = example1_game();
  const OlBrMap br = build_ol_br(game.dyn, game.follower_true_cost, 6);

  const Eigen::VectorXd uLs = solve_olse(game, example1_bstar(), example1_x0());
  const Trajectory ts = rollout_open_loop(
      game.dyn, example1_x0(), unstack_controls(uLs, 1),
      unstack_controls(br.respond(uLs, example1_x0()), 1));
  CHECK(std::abs(ts.states[3](0) - 1.22) <= 0.01);

  const Eigen::VectorXd uLp = solve_olse(game, example1_bprime(), example1_x0());
  const Trajectory tp = rollout_open_loop(
      game.dyn, example1_x0(), unstack_controls(uLp, 1),
      unstack_controls(br.respond(uLp, example1_x0()), 1));
  CHECK(std::abs(tp.states[3](0) - 2.13) <= 0.01);

  const Eigen::VectorXd us2 =
      resolve_truncated_ol(game, example1_bstar(), ts.states[3], 3);
  check_close(us2, {-1.06, -0.3}, 0.01);
  const Eigen::VectorXd up2 =
      resolve_truncated_ol(game, example1_bprime(), tp.states[3], 3);
  check_close(up2, {-1.56, -0.41}, 0.01);

  const OlBrMap br3 = build_ol_br(game.dyn, game.follower_true_cost, 3);
  check_close(br3.respond(us2, ts.states[3]), {-0.21, -0.07}, 0.01);
  check_close(br3.respond(up2, tp.states[3]), {-0.6, -0.23}, 0.01);

  SUBCASE("time-inconsistency witness: tails differ by more than 0.1") {
    const Eigen::VectorXd tail = uLs.segment(3, 2);
    CHECK((tail - us2).cwiseAbs().maxCoeff() > 0.1);
  }
  SUBCASE("tau = T returns the empty sequence") {
    CHECK(resolve_truncated_ol(game, example1_bstar(), ts.states[3], 5).size() ==
          0);
  }
}

TEST_CASE("zero state, zero announcement: BR and OLSE vanish") {
  const auto game = example1_game();
  const OlBrMap br = build_ol_br(game.dyn, game.follower_true_cost, 6);
  const Eigen::VectorXd zero_u = Eigen::VectorXd::Zero(5);
  CHECK(br.respond(zero_u, Eigen::VectorXd::Zero(1)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(solve_olse(game, example1_bstar(), Eigen::VectorXd::Zero(1))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("BR first-order optimality: analytic and finite-difference") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto game = random_scalar_game(rng, 5);
    const StackedMatrices stk = build_stacked(game.dyn, 6);
    const OlBrMap br = build_ol_br(game.dyn, game.follower_true_cost, stk);
    Eigen::VectorXd x0(1);
    x0 << rng.uniform(-5.0, 5.0);
    const Eigen::VectorXd uL = stack_controls(random_controls(rng, 5, 1, 2.0));
    const Eigen::VectorXd uF = br.respond(uL, x0);

    const Eigen::VectorXd grad = follower_lifted_gradient(
        game.dyn, game.follower_true_cost, stk, x0, uL, uF);
    CHECK(grad.norm() <= 1e-7);

    const auto f = follower_cost_fn(game, x0, unstack_controls(uL, 1));
    const Eigen::VectorXd fd = fd_gradient(f, uF, 1e-6);
    CHECK((fd - grad).norm() / std::max(1.0, fd.norm()) < 1e-4);

    // At a non-stationary point the analytic gradient must match FD too.
    const Eigen::VectorXd off = uF + Eigen::VectorXd::Constant(uF.size(), 0.7);
    const Eigen::VectorXd grad_off = follower_lifted_gradient(
        game.dyn, game.follower_true_cost, stk, x0, uL, off);
    const Eigen::VectorXd fd_off = fd_gradient(f, off, 1e-6);
    CHECK((fd_off - grad_off).norm() / std::max(1.0, fd_off.norm()) < 1e-4);
  }
}

TEST_CASE("BR perturbations never decrease the follower cost") {
  Rng rng(29);
  const auto game = random_scalar_game(rng, 5);
  const OlBrMap br = build_ol_br(game.dyn, game.follower_true_cost, 6);
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::VectorXd x0(1);
    x0 << rng.uniform(-5.0, 5.0);
    const auto uL_seq = random_controls(rng, 5, 1, 2.0);
    const Eigen::VectorXd uF = br.respond(stack_controls(uL_seq), x0);
    const auto f = follower_cost_fn(game, x0, uL_seq);
    const double at_br = f(uF);
    Eigen::VectorXd delta(uF.size());
    for (int i = 0; i < delta.size(); ++i) delta(i) = rng.uniform(-1.0, 1.0);
    delta *= 1e-3 / delta.norm();
    CHECK(f(uF + delta) >= at_br - 1e-12);
  }
}

TEST_CASE("OLSE perturbation optimality with re-best-responding follower") {
  const auto game = example1_game();
  const QuadCostModel belief = example1_bstar();
  const Eigen::VectorXd x0 = example1_x0();
  const Eigen::VectorXd uL = solve_olse(game, belief, x0);
  const OlBrMap br = build_ol_br(game.dyn, belief, 6);

  const auto leader_cost_under_belief = [&](const Eigen::VectorXd& u) {
    const Trajectory traj =
        rollout_open_loop(game.dyn, x0, unstack_controls(u, 1),
                          unstack_controls(br.respond(u, x0), 1));
    return eval_cost(traj, Player::kLeader, game.leader_cost, true);
  };
  const double at_opt = leader_cost_under_belief(uL);
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd delta(uL.size());
    for (int i = 0; i < delta.size(); ++i) delta(i) = rng.uniform(-1.0, 1.0);
    delta *= rng.uniform(1e-4, 0.5) / delta.norm();
    CHECK(leader_cost_under_belief(uL + delta) >= at_opt - 1e-10);
  }
}

TEST_CASE("proposition 1: with b1 = b*, the true belief minimizes the tail") {
  Rng rng(55);
  int checked = 0;
  for (int g = 0; g < 50; ++g) {
    const auto game = random_scalar_game(rng, 4 + static_cast<int>(rng.next() % 4));
    const int tau = 1 + static_cast<int>(rng.next() %
                                         static_cast<unsigned>(game.T - 1));
    Eigen::VectorXd x0(1);
    x0 << rng.uniform(-8.0, 8.0);

    // Pre-update play under b1 = b*.
    const Eigen::VectorXd uL = solve_olse(game, game.follower_true_cost, x0);
    const OlBrMap br_full =
        build_ol_br(game.dyn, game.follower_true_cost, game.T + 1);
    const Trajectory pre = rollout_open_loop(
        game.dyn, x0, unstack_controls(uL, 1),
        unstack_controls(br_full.respond(uL, x0), 1));
    const Eigen::VectorXd x_tau = pre.states[static_cast<std::size_t>(tau)];

    const OlBrMap br_tail =
        build_ol_br(game.dyn, game.follower_true_cost, game.T - tau + 1);
    const auto tail_cost = [&](const QuadCostModel& belief) {
      const Eigen::VectorXd u2 = resolve_truncated_ol(game, belief, x_tau, tau);
      const Trajectory post = rollout_open_loop(
          game.dyn, x_tau, unstack_controls(u2, 1),
          unstack_controls(br_tail.respond(u2, x_tau), 1), tau);
      return eval_cost(post, Player::kLeader, game.leader_cost, true);
    };

    const double true_tail = tail_cost(game.follower_true_cost);
    for (int b = 0; b < 50; ++b) {
      const auto b2 = QuadCostModel::scalar(rng.uniform(0.1, 25.0),
                                            rng.uniform(0.1, 25.0), "b2");
      CHECK(true_tail <= tail_cost(b2) + 1e-7);
      ++checked;
    }
  }
  CHECK(checked >= 2500);
}

TEST_CASE("brute-force equivalence on random scalar games, T <= 3") {
  Rng rng(77);
  for (int g = 0; g < 100; ++g) {
    const int T = 1 + static_cast<int>(rng.next() % 3);
    const auto game = random_scalar_game(rng, T);
    Eigen::VectorXd x0(1);
    x0 << rng.uniform(-5.0, 5.0);
    const Eigen::VectorXd solved =
        solve_olse(game, game.follower_true_cost, x0);
    const Eigen::VectorXd oracle =
        minimize_quadratic(leader_cost_fn(game, x0), T);
    CHECK((solved - oracle).cwiseAbs().maxCoeff() < 1e-4);
  }
}

TEST_CASE("one-step truncated re-solve matches hand algebra") {
  // tau = T-1: minimize x'Qx + u'Ru + xT'QxT with xT = a x + bl u + bf uf,
  // uf = brutally solved follower one-step response.
  Rng rng(314);
  for (int g = 0; g < 20; ++g) {
    const auto game = random_scalar_game(rng, 4);
    Eigen::VectorXd x(1);
    x << rng.uniform(-4.0, 4.0);
    const Eigen::VectorXd u =
        resolve_truncated_ol(game, game.follower_true_cost, x, game.T - 1);
    REQUIRE(u.size() == 1);

    const double a = game.dyn.A(0, 0), bl = game.dyn.B_L(0, 0),
                 bf = game.dyn.B_F(0, 0);
    const double ql = game.leader_cost.Q(0, 0), rl = game.leader_cost.R(0, 0);
    const double qf = game.follower_true_cost.Q(0, 0),
                 rf = game.follower_true_cost.R(0, 0);
    // Follower: min qf x^2 + rf uf^2 + qf (a x + bl ul + bf uf)^2
    //   => uf = -qf bf (a x + bl ul) / (rf + qf bf^2) = gc ul + hc x.
    const double gc = -qf * bf * bl / (rf + qf * bf * bf);
    const double hc = -qf * bf * a / (rf + qf * bf * bf);
    // Leader: min ql x^2 + rl ul^2 + ql ((a + bf hc) x + (bl + bf gc) ul)^2.
    const double m = bl + bf * gc, d = a + bf * hc;
    const double expected = -ql * m * d * x(0) / (rl + ql * m * m);
    CHECK(u(0) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("singular follower normal matrix reported") {
  // R = 0 is rejected at model construction, so use the map builder directly
  // with a crafted degenerate system via zero Q and tiny R: stays PD, fine;
  // the library rejects the truly singular case at the QuadCostModel gate.
  CHECK_THROWS_AS(QuadCostModel::scalar(1.0, 0.0, "singular"),
                  std::invalid_argument);
}
