#pragma once

#include "fpsi/types.hpp"

#include <vector>

namespace fpsi {

/// BDF1/BDF2 derivative and extrapolation coefficients.
///
/// [df/dt]^k = (c0 f^k + sum_j history[j] f^{k-1-j}) / dt and
/// f~^k = sum_j extrapolation[j] f^{k-1-j}.
struct SchemeOrder {
  int order = 1;
  double c0 = 1.0;
  std::vector<double> history{-1.0};
  std::vector<double> extrapolation{1.0};

  static SchemeOrder make(int order) {
    if (order == 1) return {};
    if (order == 2) return {2, 1.5, {-2.0, 0.5}, {2.0, -1.0}};
    throw ConfigError("scheme order must be 1 or 2");
  }
  int levels() const { return order; }
};

/// Result of applying the BDF formula: unknown coefficient c0/dt and the
/// history part of the derivative.
template <class T>
struct BdfTerms {
  double coefficient;
  T rhs;
};

/// history[0] = f^{k-1}, history[1] = f^{k-2}.
template <class T>
BdfTerms<T> bdf_apply(const std::vector<T>& history, const SchemeOrder& s, double dt) {
  if (static_cast<int>(history.size()) < s.levels())
    throw Error("insufficient history for BDF order " + std::to_string(s.order));
  if (!(dt > 0.0)) throw Error("time step must be positive");
  T rhs = (s.history[0] / dt) * history[0];
  for (int j = 1; j < s.levels(); ++j) rhs = rhs + (s.history[j] / dt) * history[j];
  return {s.c0 / dt, rhs};
}

template <class T>
T extrapolate(const std::vector<T>& history, const SchemeOrder& s) {
  if (static_cast<int>(history.size()) < s.levels())
    throw Error("insufficient history for extrapolation order " + std::to_string(s.order));
  T out = s.extrapolation[0] * history[0];
  for (int j = 1; j < s.levels(); ++j) out = out + s.extrapolation[j] * history[j];
  return out;
}

/// Displacement implied by the kinematic relation [du/dt]^k = v:
/// u^k = (dt v - sum_j history[j] u^{k-1-j}) / c0.
template <class T>
T kinematic_update(const T& v, const std::vector<T>& u_history, const SchemeOrder& s, double dt) {
  if (static_cast<int>(u_history.size()) < s.levels())
    throw Error("insufficient displacement history");
  T out = (dt / s.c0) * v;
  for (int j = 0; j < s.levels(); ++j) out = out - (s.history[j] / s.c0) * u_history[j];
  return out;
}

}  // namespace fpsi
