#pragma once

// Explicit central-difference dynamics for the two nonlocal models: the
// derived discrete kernel (one node per unit cell) and standard bond-based
// peridynamics with the 2 / (eps^2 |xi|) influence function.
//
// Both share the same structure, a_i = P sum_k w_k ((u_{i+k} - u_i) +
// (u_{i-k} - u_i)), and differ only in weights, node layout and prefactor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pdkernel/discrete_kernel.hpp"
#include "pdkernel/errors.hpp"
#include "pdkernel/microstructure.hpp"
#include "pdkernel/pulse.hpp"
#include "pdkernel/solver_state.hpp"

namespace pdkernel {

/// cell_centred: node i at (i + 1/2) h, no node on the boundary.
/// boundary_nodes: node i at i h, i = 0..N, with both end nodes prescribed.
enum class NodeLayout { cell_centred, boundary_nodes };

namespace detail {

inline double ghost_value(std::span<const double> u, long index, NodeLayout layout,
                          GhostRule rule, BoundaryValues bc) {
  const long n = static_cast<long>(u.size());
  if (rule == GhostRule::periodic) {
    return u[static_cast<std::size_t>(((index % n) + n) % n)];
  }
  const bool left = index < 0;
  const double b = left ? bc.left : bc.right;
  if (rule == GhostRule::clamped_follower) return b;
  long mirror = 0;
  if (layout == NodeLayout::cell_centred) {
    mirror = left ? -index - 1 : 2 * n - 1 - index;
  } else {
    mirror = left ? -index : 2 * (n - 1) - index;
  }
  return 2.0 * b - u[static_cast<std::size_t>(mirror)];
}

}  // namespace detail

/// Writes a_i for every node. weights[0] is unused; weights[k] couples nodes
/// k apart. Ghost values outside the node range follow `rule`.
inline void nonlocal_acceleration(std::span<const double> u, std::span<const double> weights,
                                  double prefactor, NodeLayout layout, GhostRule rule,
                                  BoundaryValues bc, std::span<double> out) {
  const long n = static_cast<long>(u.size());
  const long m = static_cast<long>(weights.size()) - 1;
  if (m >= n) throw DomainError("nonlocal stencil is wider than the node set");
  std::vector<double> ext(static_cast<std::size_t>(n + 2 * m));
  for (long i = -m; i < n + m; ++i) {
    ext[static_cast<std::size_t>(i + m)] =
        (i >= 0 && i < n) ? u[static_cast<std::size_t>(i)]
                          : detail::ghost_value(u, i, layout, rule, bc);
  }
  for (long i = 0; i < n; ++i) {
    const double ui = u[static_cast<std::size_t>(i)];
    double acc = 0.0;
    for (long k = 1; k <= m; ++k) {
      const double right = ext[static_cast<std::size_t>(i + m + k)] - ui;
      const double left = ext[static_cast<std::size_t>(i + m - k)] - ui;
      acc += weights[static_cast<std::size_t>(k)] * (right + left);
    }
    out[static_cast<std::size_t>(i)] = prefactor * acc;
  }
}

/// max over theta of |sum_k 2 w_k (cos(k theta) - 1)| on a dense grid.
inline double max_symbol_magnitude(std::span<const double> weights) {
  constexpr int kSamples = 8192;
  double best = 0.0;
  for (int j = 0; j <= kSamples; ++j) {
    const double theta = std::numbers::pi * j / kSamples;
    double s = 0.0;
    for (std::size_t k = 1; k < weights.size(); ++k) {
      s += 2.0 * weights[k] * (std::cos(static_cast<double>(k) * theta) - 1.0);
    }
    best = std::max(best, std::abs(s));
  }
  return best;
}

namespace detail {

/// Velocity-Verlet central difference step. `accel(u, t, a)` evaluates the
/// acceleration; `constrain(state)` overwrites prescribed nodes at state.time.
template <class Accel, class Constrain>
void central_difference_step(SolverState& s, Accel&& accel, Constrain&& constrain) {
  const double dt = s.dt;
  const std::size_t n = s.size();
  accel(std::span<const double>(s.displacement), s.time, std::span<double>(s.acceleration));
  for (std::size_t i = 0; i < n; ++i) {
    s.velocity[i] += 0.5 * dt * s.acceleration[i];
    s.displacement[i] += dt * s.velocity[i];
  }
  s.time += dt;
  ++s.step;
  constrain(s);
  accel(std::span<const double>(s.displacement), s.time, std::span<double>(s.acceleration));
  for (std::size_t i = 0; i < n; ++i) s.velocity[i] += 0.5 * dt * s.acceleration[i];
  constrain(s);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Derived discrete kernel
// ---------------------------------------------------------------------------

inline std::vector<double> derived_kernel_weights(const DiscreteKernel& kernel) {
  std::vector<double> w(kernel.half.begin(), kernel.half.end());
  if (!w.empty()) w[0] = 0.0;
  return w;
}

/// 2 / omega_max with omega_max^2 = prefactor * max |discrete symbol|.
inline double stable_dt(const DiscreteKernel& kernel) {
  const double peak = max_symbol_magnitude(derived_kernel_weights(kernel));
  return 2.0 / std::sqrt(kernel.prefactor * peak);
}

/// One node per cell, at the cell centre.
inline std::vector<double> cell_centres(const Bar& bar) {
  std::vector<double> x(bar.num_cells);
  for (std::size_t i = 0; i < bar.num_cells; ++i) {
    x[i] = (static_cast<double>(i) + 0.5) * bar.cell.cell_length;
  }
  return x;
}

inline void derived_kernel_acceleration(const SolverState& state, const DiscreteKernel& kernel,
                                        const BoundaryPulse& pulse, GhostRule rule,
                                        DrivenEnd end, std::span<double> out) {
  const auto w = derived_kernel_weights(kernel);
  nonlocal_acceleration(state.displacement, w, kernel.prefactor, NodeLayout::cell_centred,
                        rule, boundary_values(pulse, state.time, end), out);
}

inline void advance_derived_kernel(SolverState& state, const DiscreteKernel& kernel,
                                   const BoundaryPulse& pulse,
                                   GhostRule rule = GhostRule::odd_reflection,
                                   DrivenEnd end = DrivenEnd::right) {
  const auto w = derived_kernel_weights(kernel);
  detail::central_difference_step(
      state,
      [&](std::span<const double> u, double t, std::span<double> a) {
        nonlocal_acceleration(u, w, kernel.prefactor, NodeLayout::cell_centred, rule,
                              boundary_values(pulse, t, end), a);
      },
      [](SolverState&) {});
}

inline SolverState step_derived_kernel(SolverState state, const DiscreteKernel& kernel,
                                       const BoundaryPulse& pulse,
                                       GhostRule rule = GhostRule::odd_reflection,
                                       DrivenEnd end = DrivenEnd::right) {
  advance_derived_kernel(state, kernel, pulse, rule, end);
  return state;
}

class DerivedKernelModel {
 public:
  DerivedKernelModel(Bar bar, DiscreteKernel kernel, GhostRule rule = GhostRule::odd_reflection,
                     DrivenEnd end = DrivenEnd::right)
      : bar_(std::move(bar)), kernel_(std::move(kernel)), rule_(rule), end_(end) {
    if (std::abs(kernel_.cell_length - bar_.cell.cell_length) >
        1e-12 * bar_.cell.cell_length) {
      throw ConfigError("kernel cell_length does not match the bar's unit cell");
    }
    stable_dt_ = pdkernel::stable_dt(kernel_);
  }

  Method method() const { return Method::derived_kernel; }
  double stable_dt() const { return stable_dt_; }
  const DiscreteKernel& kernel() const { return kernel_; }

  SolverState initial_state(double dt) const {
    if (dt > stable_dt_) {
      throw ConfigError("derived-kernel dt " + std::to_string(dt) +
                        " exceeds stability bound " + std::to_string(stable_dt_));
    }
    return make_rest_state(cell_centres(bar_), dt, Method::derived_kernel);
  }

  void advance(SolverState& s, const BoundaryPulse& pulse) const {
    advance_derived_kernel(s, kernel_, pulse, rule_, end_);
  }

  double probe(const SolverState& s, double x) const {
    return interpolate_profile(s.positions, s.displacement, x);
  }

 private:
  Bar bar_;
  DiscreteKernel kernel_;
  GhostRule rule_;
  DrivenEnd end_;
  double stable_dt_ = 0.0;
};

// ---------------------------------------------------------------------------
// Standard peridynamics
// ---------------------------------------------------------------------------

struct StandardPdConfig {
  double node_spacing = 0.005;  // l_p
  double horizon = 0.02;        // eps
  double e_ave = 0.0;
  double rho_ave = 0.0;

  int horizon_nodes() const { return static_cast<int>(std::lround(horizon / node_spacing)); }
};

inline void validate(const StandardPdConfig& c) {
  if (!(c.node_spacing > 0.0) || !(c.horizon > 0.0) || !(c.e_ave > 0.0) || !(c.rho_ave > 0.0)) {
    throw ConfigError("standard PD: spacing, horizon and homogenized properties must be positive");
  }
  const int m = c.horizon_nodes();
  if (m < 1 || std::abs(m * c.node_spacing - c.horizon) > 1e-9 * c.horizon) {
    throw ConfigError("standard PD: horizon must be an integer multiple of node_spacing");
  }
}

inline StandardPdConfig make_standard_pd_config(const UnitCell& cell, double node_spacing,
                                                double horizon) {
  StandardPdConfig c{node_spacing, horizon, homogenized_modulus(cell), homogenized_density(cell)};
  validate(c);
  return c;
}

/// Meshfree quadrature of int omega_p(|xi|) (u(x+xi) - u(x)) dxi with
/// omega_p = 2 / (eps^2 |xi|): neighbour k sits at k l_p and owns the bond
/// cell [(k - 1/2) l_p, (k + 1/2) l_p] clipped to the horizon, so the last
/// neighbour carries half a cell. With this volume the weights reproduce the
/// local second moment exactly: sum_k w_k (k l_p)^2 = 1.
inline std::vector<double> standard_pd_weights(const StandardPdConfig& c) {
  validate(c);
  const int m = c.horizon_nodes();
  std::vector<double> w(static_cast<std::size_t>(m) + 1, 0.0);
  for (int k = 1; k <= m; ++k) {
    const double bond = k * c.node_spacing;
    const double volume = (k == m) ? 0.5 * c.node_spacing : c.node_spacing;
    w[static_cast<std::size_t>(k)] = 2.0 / (c.horizon * c.horizon * bond) * volume;
  }
  return w;
}

/// Plane-wave multiplier sum_k 2 w_k (cos(2 pi k l_p xi) - 1), without the
/// E_ave / rho_ave prefactor; nonpositive for every xi.
inline double standard_pd_symbol(const StandardPdConfig& c, double xi) {
  const auto w = standard_pd_weights(c);
  const double theta = 2.0 * std::numbers::pi * c.node_spacing * xi;
  double s = 0.0;
  for (std::size_t k = 1; k < w.size(); ++k) {
    s += 2.0 * w[k] * (std::cos(static_cast<double>(k) * theta) - 1.0);
  }
  return s;
}

inline double stable_dt(const StandardPdConfig& c) {
  const double peak = max_symbol_magnitude(standard_pd_weights(c));
  return 2.0 / std::sqrt(c.e_ave / c.rho_ave * peak);
}

inline std::vector<double> standard_pd_nodes(double bar_length, const StandardPdConfig& c) {
  const double ratio = bar_length / c.node_spacing;
  const long count = std::lround(ratio);
  if (count < 2 || std::abs(count * c.node_spacing - bar_length) > 1e-9 * bar_length) {
    throw ConfigError("standard PD: bar length must be a multiple of node_spacing");
  }
  std::vector<double> x(static_cast<std::size_t>(count) + 1);
  for (long i = 0; i <= count; ++i) x[static_cast<std::size_t>(i)] = i * c.node_spacing;
  return x;
}

inline void advance_standard_pd(SolverState& state, const StandardPdConfig& config,
                                const BoundaryPulse& pulse,
                                GhostRule rule = GhostRule::odd_reflection,
                                DrivenEnd end = DrivenEnd::right) {
  const auto w = standard_pd_weights(config);
  const double prefactor = config.e_ave / config.rho_ave;
  const bool constrained = rule != GhostRule::periodic;
  detail::central_difference_step(
      state,
      [&](std::span<const double> u, double t, std::span<double> a) {
        nonlocal_acceleration(u, w, prefactor, NodeLayout::boundary_nodes, rule,
                              boundary_values(pulse, t, end), a);
      },
      [&](SolverState& s) {
        if (!constrained) return;
        const std::size_t last = s.size() - 1;
        const double u = bc_displacement(pulse, s.time);
        const double v = bc_velocity(pulse, s.time);
        const double acc = bc_acceleration(pulse, s.time);
        const std::size_t driven = end == DrivenEnd::right ? last : 0;
        const std::size_t fixed = end == DrivenEnd::right ? 0 : last;
        s.displacement[fixed] = s.velocity[fixed] = s.acceleration[fixed] = 0.0;
        s.displacement[driven] = u;
        s.velocity[driven] = v;
        s.acceleration[driven] = acc;
      });
}

inline SolverState step_standard_pd(SolverState state, const StandardPdConfig& config,
                                    const BoundaryPulse& pulse,
                                    GhostRule rule = GhostRule::odd_reflection,
                                    DrivenEnd end = DrivenEnd::right) {
  advance_standard_pd(state, config, pulse, rule, end);
  return state;
}

class StandardPdModel {
 public:
  StandardPdModel(double bar_length, StandardPdConfig config,
                  GhostRule rule = GhostRule::odd_reflection, DrivenEnd end = DrivenEnd::right)
      : bar_length_(bar_length), config_(config), rule_(rule), end_(end) {
    validate(config_);
    standard_pd_nodes(bar_length_, config_);
    stable_dt_ = pdkernel::stable_dt(config_);
  }

  Method method() const { return Method::standard_pd; }
  double stable_dt() const { return stable_dt_; }
  const StandardPdConfig& config() const { return config_; }

  SolverState initial_state(double dt) const {
    if (dt > stable_dt_) {
      throw ConfigError("standard-PD dt " + std::to_string(dt) + " exceeds stability bound " +
                        std::to_string(stable_dt_));
    }
    return make_rest_state(standard_pd_nodes(bar_length_, config_), dt, Method::standard_pd);
  }

  void advance(SolverState& s, const BoundaryPulse& pulse) const {
    advance_standard_pd(s, config_, pulse, rule_, end_);
  }

  double probe(const SolverState& s, double x) const {
    return interpolate_profile(s.positions, s.displacement, x);
  }

 private:
  double bar_length_;
  StandardPdConfig config_;
  GhostRule rule_;
  DrivenEnd end_;
  double stable_dt_ = 0.0;
};

}  // namespace pdkernel
