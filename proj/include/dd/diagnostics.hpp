#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "dd/engine.hpp"
#include "dd/multipliers.hpp"
#include "dd/trace.hpp"

namespace dd {

inline constexpr double kDiagnosticTolerance = 1e-9;

// Checks  L(v) >= L(u) + gamma(u) . (v - u)  via two oracle calls.
template <RelaxationBackend B>
bool checkSubgradientInequality(const B& backend, const DualVariables& u, const DualVariables& v) {
  OracleResult<typename B::Structure> atU = backend.oracle(u);
  OracleResult<typename B::Structure> atV = backend.oracle(v);
  double dot = 0.0;
  for (const auto& [id, g] : atU.subgradient.entries()) dot += g * (v.get(id) - u.get(id));
  return atV.dualValue >= atU.dualValue + dot - kDiagnosticTolerance;
}

// Checks  L(lambda u + (1-lambda) v) <= lambda L(u) + (1-lambda) L(v).
template <RelaxationBackend B>
bool checkConvexityInequality(const B& backend, const DualVariables& u, const DualVariables& v,
                              double lambda) {
  DualVariables mid = DualVariables::blend(lambda, u, v);
  double lhs = backend.oracle(mid).dualValue;
  double rhs = lambda * backend.oracle(u).dualValue + (1.0 - lambda) * backend.oracle(v).dualValue;
  return lhs <= rhs + kDiagnosticTolerance;
}

// Checks the subgradient-method bound
//   min_{i<=k} L(u^(i)) <= L(ref) + (|u^(0)-ref|^2 + G^2 sum delta_i^2) / (2 sum delta_i)
// for every prefix of the trace. The derivation only needs the subgradient
// inequality at each iterate, so any reference point works, not just the
// minimizer. L(ref) is recomputed through the backend oracle. G must bound
// every observed subgradient norm, else the precondition is violated.
template <RelaxationBackend B>
bool verifyConvergenceBound(const B& backend, const RunTrace<typename B::Structure>& trace,
                            const DualVariables& reference, double G) {
  double maxNormSq = 0.0;
  for (const IterationRecord& rec : trace.records) maxNormSq = std::max(maxNormSq, rec.subgradNormSq);
  if (G * G < maxNormSq - kDiagnosticTolerance)
    throw ConfigError("G does not bound the observed subgradient norms");

  double refValue = backend.oracle(reference).dualValue;
  double distSq = reference.normSq();  // u(0) is the zero vector

  double runningMin = std::numeric_limits<double>::infinity();
  double sumDelta = 0.0;
  double sumDeltaSq = 0.0;
  for (const IterationRecord& rec : trace.records) {
    runningMin = std::min(runningMin, rec.dual);
    sumDelta += rec.stepSize;
    sumDeltaSq += rec.stepSize * rec.stepSize;
    double bound = refValue + (distSq + G * G * sumDeltaSq) / (2.0 * sumDelta);
    if (runningMin > bound + kDiagnosticTolerance) return false;
  }
  return true;
}

}  // namespace dd
