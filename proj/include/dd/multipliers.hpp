#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <string>

#include "dd/errors.hpp"

namespace dd {

// Identity of one relaxed constraint. Backends use up to three small integer
// coordinates: (i) for per-vertex / per-position constraints, (i,t) for
// per-position tag constraints, (i,t1,t2) for tag-bigram constraints. Unused
// slots stay at -1, so the three families never collide. Ordering is
// lexicographic on (a,b,c).
struct ConstraintId {
  std::int32_t a = -1;
  std::int32_t b = -1;
  std::int32_t c = -1;

  auto operator<=>(const ConstraintId&) const = default;

  static ConstraintId vertex(int i) { return {i, -1, -1}; }
  static ConstraintId tag(int i, int t) { return {i, t, -1}; }
  static ConstraintId bigram(int i, int t1, int t2) { return {i, t1, t2}; }
};

// Residual vector gamma(u): one entry per constraint whose residual may be
// nonzero at the current argmax. Residuals are integer-valued differences of
// indicator counts, so exact zero tests are safe. An all-zero (or empty)
// vector means every relaxed constraint is satisfied.
class SubgradientVector {
 public:
  void add(ConstraintId id, double residual) {
    if (residual != 0.0) residuals_[id] += residual;
    auto it = residuals_.find(id);
    if (it != residuals_.end() && it->second == 0.0) residuals_.erase(it);
  }

  double get(ConstraintId id) const {
    auto it = residuals_.find(id);
    return it == residuals_.end() ? 0.0 : it->second;
  }

  bool isZero() const {
    for (const auto& [id, r] : residuals_)
      if (r != 0.0) return false;
    return true;
  }

  int violationCount() const {
    int count = 0;
    for (const auto& [id, r] : residuals_)
      if (r != 0.0) ++count;
    return count;
  }

  double normSq() const {
    double s = 0.0;
    for (const auto& [id, r] : residuals_) s += r * r;
    return s;
  }

  const std::map<ConstraintId, double>& entries() const { return residuals_; }

 private:
  std::map<ConstraintId, double> residuals_;
};

// Lagrange multipliers u. Absent keys read as 0.0, so the all-zero start
// point u(0) is the empty mapping. Stored values are finite and nonzero;
// updates that land exactly on 0.0 drop the key.
class DualVariables {
 public:
  double get(ConstraintId id) const {
    auto it = values_.find(id);
    return it == values_.end() ? 0.0 : it->second;
  }

  void set(ConstraintId id, double value) {
    if (!std::isfinite(value)) throw ConfigError("multiplier value must be finite");
    if (value == 0.0)
      values_.erase(id);
    else
      values_[id] = value;
  }

  // u <- u - delta * g
  void applyStep(double delta, const SubgradientVector& g) {
    for (const auto& [id, r] : g.entries()) set(id, get(id) - delta * r);
  }

  double dot(const SubgradientVector& g) const {
    double s = 0.0;
    for (const auto& [id, r] : g.entries()) s += get(id) * r;
    return s;
  }

  double normSq() const {
    double s = 0.0;
    for (const auto& [id, v] : values_) s += v * v;
    return s;
  }

  static double squaredDistance(const DualVariables& u, const DualVariables& v);

  static DualVariables blend(double lambda, const DualVariables& u, const DualVariables& v);

  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }
  const std::map<ConstraintId, double>& entries() const { return values_; }

  bool operator==(const DualVariables& other) const { return values_ == other.values_; }

 private:
  std::map<ConstraintId, double> values_;
};

}  // namespace dd
