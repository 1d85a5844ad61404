#pragma once

// Fully resolved microstructural reference: linear two-node bar elements
// whose boundaries coincide with every material interface, explicit central
// differences, u(0) = 0 and u(L) = u_bc(t).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pdkernel/errors.hpp"
#include "pdkernel/microstructure.hpp"
#include "pdkernel/nonlocal_solvers.hpp"
#include "pdkernel/pulse.hpp"
#include "pdkernel/solver_state.hpp"

namespace pdkernel {

struct FemConfig {
  int elements_per_stiff_segment = 8;
  int elements_per_compliant_segment = 16;
  bool mass_lumping = true;

  bool operator==(const FemConfig&) const = default;
};

inline void validate(const FemConfig& c) {
  if (c.elements_per_stiff_segment < 1 || c.elements_per_compliant_segment < 1) {
    throw ConfigError("FEM: element counts per segment must be >= 1");
  }
}

/// Symmetric tridiagonal matrix; off[i] couples rows i and i+1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }

  void multiply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
      double s = diag[i] * x[i];
      if (i > 0) s += off[i - 1] * x[i - 1];
      if (i + 1 < n) s += off[i] * x[i + 1];
      y[i] = s;
    }
  }

  double operator()(std::size_t i, std::size_t j) const {
    if (i == j) return diag[i];
    if (i + 1 == j) return off[i];
    if (j + 1 == i) return off[j];
    return 0.0;
  }
};

/// Thomas algorithm on rows [first, last] of a symmetric tridiagonal matrix.
inline void solve_tridiagonal_block(const SymTridiagonal& a, std::size_t first, std::size_t last,
                                    std::span<double> rhs_to_solution) {
  const std::size_t n = last - first + 1;
  std::vector<double> c(n, 0.0);
  auto& d = rhs_to_solution;
  double denom = a.diag[first];
  if (denom == 0.0) throw NumericalError("tridiagonal solve: zero pivot");
  c[0] = (n > 1) ? a.off[first] / denom : 0.0;
  d[first] /= denom;
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t i = first + k;
    const double sub = a.off[i - 1];
    denom = a.diag[i] - sub * c[k - 1];
    if (denom == 0.0) throw NumericalError("tridiagonal solve: zero pivot");
    c[k] = (k + 1 < n) ? a.off[i] / denom : 0.0;
    d[i] = (d[i] - sub * d[i - 1]) / denom;
  }
  for (std::size_t k = n - 1; k-- > 0;) d[first + k] -= c[k] * d[first + k + 1];
}

struct FemSystem {
  std::vector<double> node_coords;
  std::vector<double> element_modulus;
  std::vector<double> element_density;
  SymTridiagonal stiffness;
  SymTridiagonal mass;  // diagonal only when lumped
  double area = 1e-4;
  bool lumped = true;
  Bar bar;

  std::size_t num_nodes() const { return node_coords.size(); }
  std::size_t num_elements() const { return element_modulus.size(); }
};

/// Assembles K (E A / h per element) and M (rho A h, lumped or consistent).
inline FemSystem fem_assemble(const Bar& bar, const FemConfig& config, double area = 1e-4) {
  validate(bar.cell);
  validate(config);
  if (!(area > 0.0)) throw ConfigError("FEM: area must be positive");
  const UnitCell& cell = bar.cell;
  const double l = cell.cell_length;
  const struct {
    double start, end, modulus, density;
    int count;
  } segments[3] = {
      {0.0, cell.alpha, cell.e_stiff, cell.rho_stiff, config.elements_per_stiff_segment},
      {cell.alpha, cell.alpha + cell.beta, cell.e_compliant, cell.rho_compliant,
       config.elements_per_compliant_segment},
      {cell.alpha + cell.beta, 1.0, cell.e_stiff, cell.rho_stiff,
       config.elements_per_stiff_segment},
  };

  FemSystem sys;
  sys.area = area;
  sys.lumped = config.mass_lumping;
  sys.bar = bar;
  sys.node_coords.push_back(0.0);
  for (std::size_t c = 0; c < bar.num_cells; ++c) {
    const double origin = static_cast<double>(c) * l;
    for (const auto& seg : segments) {
      for (int k = 1; k <= seg.count; ++k) {
        const double local = seg.start + (seg.end - seg.start) * k / seg.count;
        sys.node_coords.push_back(origin + local * l);
        sys.element_modulus.push_back(seg.modulus);
        sys.element_density.push_back(seg.density);
      }
    }
  }
  sys.node_coords.back() = bar.length;

  const std::size_t n = sys.node_coords.size();
  sys.stiffness.diag.assign(n, 0.0);
  sys.stiffness.off.assign(n - 1, 0.0);
  sys.mass.diag.assign(n, 0.0);
  sys.mass.off.assign(n - 1, 0.0);
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double h = sys.node_coords[e + 1] - sys.node_coords[e];
    const double k = sys.element_modulus[e] * area / h;
    sys.stiffness.diag[e] += k;
    sys.stiffness.diag[e + 1] += k;
    sys.stiffness.off[e] -= k;
    const double m = sys.element_density[e] * area * h;
    if (sys.lumped) {
      sys.mass.diag[e] += 0.5 * m;
      sys.mass.diag[e + 1] += 0.5 * m;
    } else {
      sys.mass.diag[e] += m / 3.0;
      sys.mass.diag[e + 1] += m / 3.0;
      sys.mass.off[e] += m / 6.0;
    }
  }
  return sys;
}

/// Element CFL bound min h / c, reduced by sqrt(3) for consistent mass.
inline double stable_dt(const FemSystem& sys) {
  double best = INFINITY;
  for (std::size_t e = 0; e < sys.num_elements(); ++e) {
    const double h = sys.node_coords[e + 1] - sys.node_coords[e];
    const double c = std::sqrt(sys.element_modulus[e] / sys.element_density[e]);
    best = std::min(best, h / c);
  }
  return sys.lumped ? best : best / std::sqrt(3.0);
}

/// Static solution with prescribed end displacements and optional nodal loads.
inline std::vector<double> fem_static_solve(const FemSystem& sys, double u_left, double u_right,
                                            std::span<const double> nodal_force = {}) {
  const std::size_t n = sys.num_nodes();
  std::vector<double> u(n, 0.0);
  u.front() = u_left;
  u.back() = u_right;
  if (n == 2) return u;
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    rhs[i] = nodal_force.empty() ? 0.0 : nodal_force[i];
  }
  rhs[1] -= sys.stiffness.off[0] * u_left;
  rhs[n - 2] -= sys.stiffness.off[n - 2] * u_right;
  solve_tridiagonal_block(sys.stiffness, 1, n - 2, rhs);
  for (std::size_t i = 1; i + 1 < n; ++i) u[i] = rhs[i];
  return u;
}

/// Kinetic plus strain energy, 1/2 v'Mv + 1/2 u'Ku.
inline double fem_energy(const FemSystem& sys, const SolverState& s) {
  std::vector<double> tmp(sys.num_nodes());
  sys.mass.multiply(s.velocity, tmp);
  double kinetic = 0.0;
  for (std::size_t i = 0; i < tmp.size(); ++i) kinetic += s.velocity[i] * tmp[i];
  sys.stiffness.multiply(s.displacement, tmp);
  double strain = 0.0;
  for (std::size_t i = 0; i < tmp.size(); ++i) strain += s.displacement[i] * tmp[i];
  return 0.5 * (kinetic + strain);
}

/// Cell averages (1/l) int u dx, exact for the piecewise-linear field.
inline std::vector<double> fem_cell_averages(const FemSystem& sys, std::span<const double> u) {
  const Bar& bar = sys.bar;
  const double l = bar.cell.cell_length;
  std::vector<double> avg(bar.num_cells, 0.0);
  for (std::size_t e = 0; e + 1 < sys.num_nodes(); ++e) {
    const double x0 = sys.node_coords[e];
    const double x1 = sys.node_coords[e + 1];
    const auto c = std::min(bar.num_cells - 1,
                            static_cast<std::size_t>(std::floor(0.5 * (x0 + x1) / l)));
    avg[c] += 0.5 * (u[e] + u[e + 1]) * (x1 - x0);
  }
  for (auto& a : avg) a /= l;
  return avg;
}

namespace detail {

inline void fem_acceleration(const FemSystem& sys, std::span<const double> u, double t,
                             const BoundaryPulse& pulse, DrivenEnd end, std::span<double> a) {
  const std::size_t n = sys.num_nodes();
  sys.stiffness.multiply(u, a);
  for (std::size_t i = 0; i < n; ++i) a[i] = -a[i];
  const double driven_acc = bc_acceleration(pulse, t);
  const double acc_left = end == DrivenEnd::left ? driven_acc : 0.0;
  const double acc_right = end == DrivenEnd::right ? driven_acc : 0.0;
  if (sys.lumped) {
    for (std::size_t i = 0; i < n; ++i) a[i] /= sys.mass.diag[i];
  } else if (n > 2) {
    a[1] -= sys.mass.off[0] * acc_left;
    a[n - 2] -= sys.mass.off[n - 2] * acc_right;
    solve_tridiagonal_block(sys.mass, 1, n - 2, a);
  }
  a[0] = acc_left;
  a[n - 1] = acc_right;
}

}  // namespace detail

inline void advance_fem(SolverState& state, const FemSystem& sys, const BoundaryPulse& pulse,
                        DrivenEnd end = DrivenEnd::right) {
  detail::central_difference_step(
      state,
      [&](std::span<const double> u, double t, std::span<double> a) {
        detail::fem_acceleration(sys, u, t, pulse, end, a);
      },
      [&](SolverState& s) {
        const std::size_t last = s.size() - 1;
        const std::size_t driven = end == DrivenEnd::right ? last : 0;
        const std::size_t fixed = end == DrivenEnd::right ? 0 : last;
        s.displacement[fixed] = s.velocity[fixed] = s.acceleration[fixed] = 0.0;
        s.displacement[driven] = bc_displacement(pulse, s.time);
        s.velocity[driven] = bc_velocity(pulse, s.time);
        s.acceleration[driven] = bc_acceleration(pulse, s.time);
      });
}

inline SolverState fem_step(SolverState state, const FemSystem& sys, const BoundaryPulse& pulse,
                            DrivenEnd end = DrivenEnd::right) {
  advance_fem(state, sys, pulse, end);
  return state;
}

class FemModel {
 public:
  FemModel(const Bar& bar, const FemConfig& config, double area = 1e-4,
           DrivenEnd end = DrivenEnd::right)
      : sys_(fem_assemble(bar, config, area)), end_(end), centres_(cell_centres(bar)) {
    stable_dt_ = pdkernel::stable_dt(sys_);
  }

  Method method() const { return Method::resolved_fem; }
  double stable_dt() const { return stable_dt_; }
  const FemSystem& system() const { return sys_; }

  SolverState initial_state(double dt) const {
    if (dt > stable_dt_) {
      throw ConfigError("FEM dt " + std::to_string(dt) + " exceeds stability bound " +
                        std::to_string(stable_dt_));
    }
    return make_rest_state(sys_.node_coords, dt, Method::resolved_fem);
  }

  void advance(SolverState& s, const BoundaryPulse& pulse) const {
    advance_fem(s, sys_, pulse, end_);
  }

  /// Interpolates cell averages, so probes compare like with like against the
  /// one-node-per-cell derived kernel.
  double probe(const SolverState& s, double x) const {
    const auto avg = fem_cell_averages(sys_, s.displacement);
    return interpolate_profile(centres_, avg, x);
  }

 private:
  FemSystem sys_;
  DrivenEnd end_;
  std::vector<double> centres_;
  double stable_dt_ = 0.0;
};

}  // namespace pdkernel
