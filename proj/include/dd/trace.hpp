#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dd/multipliers.hpp"

namespace dd {

enum class RunStatus { EConverged, MaxIterations, Stalled };

inline std::string runStatusName(RunStatus s) {
  switch (s) {
    case RunStatus::EConverged: return "e_converged";
    case RunStatus::MaxIterations: return "max_iterations";
    case RunStatus::Stalled: return "stalled";
  }
  return "?";
}

inline std::optional<RunStatus> runStatusFromName(const std::string& s) {
  if (s == "e_converged") return RunStatus::EConverged;
  if (s == "max_iterations") return RunStatus::MaxIterations;
  if (s == "stalled") return RunStatus::Stalled;
  return std::nullopt;
}

// One iteration of the subgradient loop: dual value L(u^(k-1)) seen at
// iteration k, the primal value recovered from the argmax structure (when the
// backend can map it to a feasible solution), and the step applied afterwards.
struct IterationRecord {
  int k = 0;
  double dual = 0.0;
  std::optional<double> primal;
  double stepSize = 0.0;
  int violationCount = 0;
  double subgradNormSq = 0.0;
};

// Full run diagnostics. structures[i] is the argmax structure of records[i];
// finalMultipliers is u after the last applied update (u at the certified
// point for e-converged runs, where no further update is made).
template <class S>
struct RunTrace {
  std::vector<IterationRecord> records;
  std::vector<S> structures;
  DualVariables finalMultipliers;
  RunStatus status = RunStatus::MaxIterations;
  double bestDual = std::numeric_limits<double>::infinity();
  std::optional<double> bestPrimal;
  std::optional<S> bestPrimalSolution;
  std::optional<int> certifiedIteration;
  std::optional<double> certifiedValue;

  const S* certifiedSolution() const {
    if (!certifiedIteration) return nullptr;
    return &structures[static_cast<std::size_t>(*certifiedIteration) - 1];
  }
};

// Best-dual minus best-primal; absent until a primal has been seen. Weak
// duality keeps the true gap nonnegative, so float noise is clamped at zero.
template <class S>
std::optional<double> dualityGap(const RunTrace<S>& trace) {
  if (!trace.bestPrimal) return std::nullopt;
  return std::max(0.0, trace.bestDual - *trace.bestPrimal);
}

}  // namespace dd
