#include "dd/multipliers.hpp"

namespace dd {

double DualVariables::squaredDistance(const DualVariables& u, const DualVariables& v) {
  double s = 0.0;
  auto iu = u.values_.begin();
  auto iv = v.values_.begin();
  while (iu != u.values_.end() || iv != v.values_.end()) {
    if (iv == v.values_.end() || (iu != u.values_.end() && iu->first < iv->first)) {
      s += iu->second * iu->second;
      ++iu;
    } else if (iu == u.values_.end() || iv->first < iu->first) {
      s += iv->second * iv->second;
      ++iv;
    } else {
      double d = iu->second - iv->second;
      s += d * d;
      ++iu;
      ++iv;
    }
  }
  return s;
}

DualVariables DualVariables::blend(double lambda, const DualVariables& u, const DualVariables& v) {
  DualVariables out;
  for (const auto& [id, value] : u.values_) out.set(id, lambda * value);
  for (const auto& [id, value] : v.values_) out.set(id, out.get(id) + (1.0 - lambda) * value);
  return out;
}

}  // namespace dd
