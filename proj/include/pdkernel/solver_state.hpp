#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdkernel/errors.hpp"
#include "pdkernel/pulse.hpp"

namespace pdkernel {

enum class Method { derived_kernel, standard_pd, resolved_fem };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::derived_kernel: return "derived";
    case Method::standard_pd: return "standard-pd";
    case Method::resolved_fem: return "fem";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "derived") return Method::derived_kernel;
  if (s == "standard-pd") return Method::standard_pd;
  if (s == "fem") return Method::resolved_fem;
  throw ConfigError("unknown method '" + std::string(s) + "'");
}

/// Which end carries the displacement pulse; the other end is held at zero.
enum class DrivenEnd { right, left };

/// Values assigned to nonlocal ghost nodes outside [0, L].
enum class GhostRule {
  odd_reflection,    // mirror image: u(b - s) = 2 u_b - u(b + s)
  clamped_follower,  // ghosts take the boundary value itself
  periodic,          // wrap around (no physical boundary; symbol checks)
};

inline std::string_view to_string(GhostRule g) {
  switch (g) {
    case GhostRule::odd_reflection: return "odd_reflection";
    case GhostRule::clamped_follower: return "clamped_follower";
    case GhostRule::periodic: return "periodic";
  }
  return "?";
}

inline GhostRule parse_ghost_rule(std::string_view s) {
  if (s == "odd_reflection") return GhostRule::odd_reflection;
  if (s == "clamped_follower") return GhostRule::clamped_follower;
  if (s == "periodic") return GhostRule::periodic;
  throw ConfigError("unknown ghost_rule '" + std::string(s) + "'");
}

struct BoundaryValues {
  double left = 0.0;
  double right = 0.0;
};

inline BoundaryValues boundary_values(const BoundaryPulse& pulse, double t, DrivenEnd end) {
  const double u = bc_displacement(pulse, t);
  return end == DrivenEnd::right ? BoundaryValues{0.0, u} : BoundaryValues{u, 0.0};
}

struct SolverState {
  std::vector<double> positions;
  std::vector<double> displacement;
  std::vector<double> velocity;
  std::vector<double> acceleration;
  double time = 0.0;
  double dt = 0.0;
  std::size_t step = 0;
  Method method = Method::derived_kernel;

  std::size_t size() const { return positions.size(); }
};

inline SolverState make_rest_state(std::vector<double> positions, double dt, Method method) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const std::size_t n = positions.size();
  return SolverState{std::move(positions), std::vector<double>(n, 0.0),
                     std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                     0.0, dt, 0, method};
}

/// Linear interpolation of a nodal profile; clamps outside the node range.
inline double interpolate_profile(std::span<const double> x, std::span<const double> u,
                                  double at) {
  if (x.empty()) throw DomainError("interpolate_profile: empty profile");
  if (at <= x.front()) return u.front();
  if (at >= x.back()) return u.back();
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double w = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - w) * u[i - 1] + w * u[i];
}

}  // namespace pdkernel
