#ifndef STACKBELIEF_TESTS_FIXTURES_HPP
#define STACKBELIEF_TESTS_FIXTURES_HPP

#include "stackbelief/lq_game.hpp"
#include "stackbelief/rng.hpp"

namespace stackbelief::testing {

// Worked example 1: scalar open-loop game, T = 5, tau = 3, x0 = 7.6.
inline StackelbergGame example1_game() {
  return StackelbergGame::make(LtiGameDynamics::scalar(1.7, 1.4, 0.5),
                               QuadCostModel::scalar(16.0, 17.0, "L"),
                               QuadCostModel::scalar(7.0, 19.0, "b*"), 5);
}
inline QuadCostModel example1_bstar() {
  return QuadCostModel::scalar(7.0, 19.0, "b*");
}
inline QuadCostModel example1_bprime() {
  return QuadCostModel::scalar(8.0, 9.0, "b'");
}
inline Eigen::VectorXd example1_x0() {
  return Eigen::VectorXd::Constant(1, 7.6);
}

// Worked example 2: scalar feedback game, T = 8, tau = 3, x0 = -5.6.
inline StackelbergGame example2_game() {
  return StackelbergGame::make(LtiGameDynamics::scalar(1.4, 1.7, 1.7),
                               QuadCostModel::scalar(7.0, 16.0, "L"),
                               QuadCostModel::scalar(4.0, 24.0, "b*"), 8);
}
inline QuadCostModel example2_bstar() {
  return QuadCostModel::scalar(4.0, 24.0, "b*");
}
inline QuadCostModel example2_bprime() {
  return QuadCostModel::scalar(29.0, 12.0, "b'");
}
inline Eigen::VectorXd example2_x0() {
  return Eigen::VectorXd::Constant(1, -5.6);
}

// Random stable-ish scalar game with PD costs.
inline StackelbergGame random_scalar_game(Rng& rng, int T) {
  const double a = rng.uniform(-1.8, 1.8);
  const double bl = rng.uniform(0.3, 2.0) * (rng.uniform01() < 0.5 ? -1 : 1);
  const double bf = rng.uniform(0.3, 2.0) * (rng.uniform01() < 0.5 ? -1 : 1);
  return StackelbergGame::make(
      LtiGameDynamics::scalar(a, bl, bf),
      QuadCostModel::scalar(rng.uniform(0.5, 20.0), rng.uniform(0.5, 20.0),
                            "L"),
      QuadCostModel::scalar(rng.uniform(0.5, 20.0), rng.uniform(0.5, 20.0),
                            "b*"),
      T);
}

inline std::vector<Eigen::VectorXd> random_controls(Rng& rng, int steps, int m,
                                                    double scale = 1.0) {
  std::vector<Eigen::VectorXd> seq(static_cast<std::size_t>(steps));
  for (auto& u : seq) {
    u.resize(m);
    for (int i = 0; i < m; ++i) u(i) = scale * rng.uniform(-1.0, 1.0);
  }
  return seq;
}

}  // namespace stackbelief::testing

#endif  // STACKBELIEF_TESTS_FIXTURES_HPP
