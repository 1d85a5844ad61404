#pragma once

#include <cmath>

#include "pdkernel/errors.hpp"

namespace pdkernel {

/// u_bc(t) = u0 * a0 * t^6 (t - T)^6 for 0 <= t < T, and 0 afterwards.
struct BoundaryPulse {
  double u0 = 0.0;
  double duration = 1.0;  // T, s
  double a0 = 1.0;        // 1/s^12

  bool operator==(const BoundaryPulse&) const = default;
};

/// a0 = (T/2)^-12, which makes the peak (reached at T/2) exactly u0.
inline BoundaryPulse make_peak_normalized_pulse(double u0, double duration) {
  if (!(duration > 0.0)) throw DomainError("pulse duration must be positive");
  return BoundaryPulse{u0, duration, std::pow(0.5 * duration, -12)};
}

inline double bc_displacement(const BoundaryPulse& p, double t) {
  if (t <= 0.0 || t >= p.duration) return 0.0;
  const double s = t * (t - p.duration);
  return p.u0 * p.a0 * std::pow(s, 6);
}

inline double bc_velocity(const BoundaryPulse& p, double t) {
  if (t <= 0.0 || t >= p.duration) return 0.0;
  const double s = t * (t - p.duration);
  return p.u0 * p.a0 * 6.0 * std::pow(s, 5) * (2.0 * t - p.duration);
}

inline double bc_acceleration(const BoundaryPulse& p, double t) {
  if (t <= 0.0 || t >= p.duration) return 0.0;
  const double s = t * (t - p.duration);
  const double ds = 2.0 * t - p.duration;
  return p.u0 * p.a0 * (30.0 * std::pow(s, 4) * ds * ds + 12.0 * std::pow(s, 5));
}

}  // namespace pdkernel
