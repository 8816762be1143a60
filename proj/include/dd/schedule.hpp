#pragma once

#include <cmath>
#include <string>

#include "dd/errors.hpp"

namespace dd {

enum class ScheduleKind { Constant, InverseK, InverseSqrtK, Adaptive };

// Step-size rule delta_k. The adaptive kind divides the base constant by
// (t+1), where t counts the iterations before k whose dual value went up
// instead of down; the step shrinks only when the dual moves the wrong way.
struct StepSizeSchedule {
  ScheduleKind kind = ScheduleKind::Adaptive;
  double c = 1.0;

  void validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("step-size constant must be positive and finite");
  }
};

// dualIncreaseCount is the t above; it is ignored by the non-adaptive kinds.
inline double stepSize(const StepSizeSchedule& schedule, int k, int dualIncreaseCount) {
  schedule.validate();
  if (k < 1) throw ConfigError("iteration index must be >= 1");
  if (dualIncreaseCount < 0 || dualIncreaseCount > k - 1)
    throw ConfigError("dual increase count must lie in [0, k-1]");
  switch (schedule.kind) {
    case ScheduleKind::Constant:
      return schedule.c;
    case ScheduleKind::InverseK:
      return schedule.c / static_cast<double>(k);
    case ScheduleKind::InverseSqrtK:
      return schedule.c / std::sqrt(static_cast<double>(k));
    case ScheduleKind::Adaptive:
      return schedule.c / static_cast<double>(dualIncreaseCount + 1);
  }
  throw ConfigError("unknown schedule kind");
}

inline std::string scheduleKindName(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::Constant: return "const";
    case ScheduleKind::InverseK: return "inv-k";
    case ScheduleKind::InverseSqrtK: return "inv-sqrt";
    case ScheduleKind::Adaptive: return "adaptive";
  }
  return "?";
}

}  // namespace dd
