#pragma once

#include <array>
#include <cmath>

namespace qoeslice::qoe {

// Weights over (latency, reliability, economics).
struct PreferenceVector {
  double latency = 0.0;
  double reliability = 0.0;
  double econ = 0.0;

  static constexpr PreferenceVector equal() { return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}; }
  static constexpr PreferenceVector zero() { return {0.0, 0.0, 0.0}; }

  double sum() const { return latency + reliability + econ; }
  bool is_zero() const { return latency == 0.0 && reliability == 0.0 && econ == 0.0; }
  bool on_simplex(double tol = 1e-6) const {
    return std::isfinite(sum()) && latency >= 0.0 && reliability >= 0.0 && econ >= 0.0 &&
           std::abs(sum() - 1.0) <= tol;
  }
  std::array<double, 3> as_array() const { return {latency, reliability, econ}; }

  bool operator==(const PreferenceVector&) const = default;
};

inline double cosine(const PreferenceVector& a, const PreferenceVector& b) {
  const double dot = a.latency * b.latency + a.reliability * b.reliability + a.econ * b.econ;
  const double na = std::sqrt(a.latency * a.latency + a.reliability * a.reliability + a.econ * a.econ);
  const double nb = std::sqrt(b.latency * b.latency + b.reliability * b.reliability + b.econ * b.econ);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (na * nb);
}

}  // namespace qoeslice::qoe
