#pragma once

#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <vector>

#include "dd/errors.hpp"
#include "dd/multipliers.hpp"
#include "dd/schedule.hpp"
#include "dd/trace.hpp"

namespace dd {

// What a backend's per-iteration maximization returns: the argmax structure,
// the Lagrangian value at that structure, and the residual vector.
template <class S>
struct OracleResult {
  S structure;
  double dualValue = 0.0;
  SubgradientVector subgradient;
};

template <class S>
struct Primal {
  S solution;
  double value = 0.0;
};

// Contract every problem module implements. oracle(u) must be deterministic
// (ties broken by a fixed total order on structures) and must report the
// Lagrangian evaluated at its own argmax. primalize maps an argmax structure
// to a feasible solution of the original problem when one can be read off.
template <class B>
concept RelaxationBackend = requires(const B& b, const DualVariables& u, const typename B::Structure& s) {
  typename B::Structure;
  { b.oracle(u) } -> std::same_as<OracleResult<typename B::Structure>>;
  { b.primalize(s) } -> std::same_as<std::optional<Primal<typename B::Structure>>>;
  { b.describe() } -> std::convertible_to<std::string>;
};

// Projected subgradient descent on the dual, from u(0) = 0:
//   y(k) = argmax L(u(k-1), y),  u(k) = u(k-1) - delta_k * gamma(k).
// Stops at the first zero subgradient (e-converged, certificate), at
// maxIters, or when bestDual improved by less than stallEps over the last
// stallWindow iterations.
template <RelaxationBackend B>
RunTrace<typename B::Structure> runSubgradient(const B& backend, const StepSizeSchedule& schedule,
                                               int maxIters, int stallWindow = 20,
                                               double stallEps = 1e-6) {
  schedule.validate();
  if (maxIters < 1) throw ConfigError("maxIters must be >= 1");
  if (stallWindow < 1) throw ConfigError("stallWindow must be >= 1");

  RunTrace<typename B::Structure> trace;
  DualVariables u;
  int increaseCount = 0;  // iterations before k whose dual went up
  double prevDual = 0.0;
  std::vector<double> bestDualAfter;
  bestDualAfter.reserve(static_cast<std::size_t>(maxIters));

  for (int k = 1; k <= maxIters; ++k) {
    OracleResult<typename B::Structure> res = backend.oracle(u);
    if (!std::isfinite(res.dualValue))
      throw OracleError(backend.describe() + ": non-finite dual value at iteration " + std::to_string(k));

    double delta = stepSize(schedule, k, increaseCount);
    if (!(delta > 0.0)) throw ConfigError("step size must be positive");
    if (k >= 2 && res.dualValue > prevDual) ++increaseCount;
    prevDual = res.dualValue;

    IterationRecord rec;
    rec.k = k;
    rec.dual = res.dualValue;
    rec.stepSize = delta;
    rec.violationCount = res.subgradient.violationCount();
    rec.subgradNormSq = res.subgradient.normSq();

    std::optional<Primal<typename B::Structure>> primal = backend.primalize(res.structure);
    if (primal) rec.primal = primal->value;

    trace.bestDual = std::min(trace.bestDual, rec.dual);
    if (primal && (!trace.bestPrimal || primal->value > *trace.bestPrimal)) {
      trace.bestPrimal = primal->value;
      trace.bestPrimalSolution = primal->solution;
    }

    trace.records.push_back(rec);
    trace.structures.push_back(std::move(res.structure));

    if (res.subgradient.isZero()) {
      if (!primal)
        throw OracleError(backend.describe() + ": zero residual without a feasible primal");
      if (std::abs(primal->value - rec.dual) > 1e-9)
        throw OracleError(backend.describe() + ": certified dual and primal values disagree");
      trace.status = RunStatus::EConverged;
      trace.certifiedIteration = k;
      trace.certifiedValue = primal->value;
      trace.finalMultipliers = u;
      return trace;
    }

    u.applyStep(delta, res.subgradient);
    bestDualAfter.push_back(trace.bestDual);

    if (k > stallWindow &&
        bestDualAfter[static_cast<std::size_t>(k - 1 - stallWindow)] - trace.bestDual < stallEps) {
      trace.status = RunStatus::Stalled;
      trace.finalMultipliers = u;
      return trace;
    }
  }

  trace.status = RunStatus::MaxIterations;
  trace.finalMultipliers = u;
  return trace;
}

}  // namespace dd
