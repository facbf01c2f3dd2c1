#include "stackbelief/strategy.hpp"

#include <stdexcept>

namespace stackbelief {

std::string to_string(InfoStructure info) {
  return info == InfoStructure::kOpenLoop ? "open-loop" : "feedback";
}

InfoStructure info_structure_from_string(const std::string& s) {
  if (s == "open-loop" || s == "ol" || s == "OL") return InfoStructure::kOpenLoop;
  if (s == "feedback" || s == "fb" || s == "FB") return InfoStructure::kFeedback;
  throw std::invalid_argument("unknown info structure '" + s +
                              "' (expected open-loop or feedback)");
}

Eigen::VectorXd StrategyProfile::control_at(int t,
                                            const Eigen::VectorXd& x) const {
  const int k = t - start_time;
  if (k < 0 || k >= steps()) {
    throw std::invalid_argument("StrategyProfile::control_at: t outside span");
  }
  if (info == InfoStructure::kOpenLoop) return controls[k];
  return -gains[k] * x;
}

}  // namespace stackbelief
