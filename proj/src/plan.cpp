#include "slei/plan.hpp"

namespace slei {

const char* to_string(ActionKind a) {
  switch (a) {
    case ActionKind::Move: return "move";
    case ActionKind::Explore: return "explore";
    case ActionKind::Inspect: return "inspect";
    case ActionKind::Meet: return "meet";
    case ActionKind::Charge: return "charge";
  }
  return "?";
}

bool LocalPlan::arrivals_increasing() const {
  for (std::size_t i = 1; i < steps.size(); ++i)
    if (steps[i].arrival <= steps[i - 1].arrival) return false;
  return true;
}

}  // namespace slei
