#ifndef STACKBELIEF_STRATEGY_HPP
#define STACKBELIEF_STRATEGY_HPP

#include <string>
#include <vector>

#include "stackbelief/lin_dyn.hpp"

namespace stackbelief {

enum class InfoStructure { kOpenLoop, kFeedback };

std::string to_string(InfoStructure info);
InfoStructure info_structure_from_string(const std::string& s);

// One player's announced strategy over [start_time, start_time + steps):
// a control sequence under open-loop information, or state-feedback gains
// (u_t = -K_t x_t) under feedback information.
struct StrategyProfile {
  InfoStructure info = InfoStructure::kOpenLoop;
  int start_time = 0;
  std::vector<Eigen::VectorXd> controls;  // open loop
  std::vector<Eigen::MatrixXd> gains;     // feedback

  int steps() const {
    return static_cast<int>(info == InfoStructure::kOpenLoop ? controls.size()
                                                             : gains.size());
  }

  // Control executed at absolute time t in state x.
  Eigen::VectorXd control_at(int t, const Eigen::VectorXd& x) const;
};

}  // namespace stackbelief

#endif  // STACKBELIEF_STRATEGY_HPP
