#pragma once

// Exact Floquet-Bloch dispersion of the layered cell from per-layer harmonic
// transfer matrices acting on the state (u, sigma). Independent of the
// polynomial-ansatz route, so it serves as the oracle for kernel dispersion.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "pdkernel/errors.hpp"
#include "pdkernel/microstructure.hpp"

namespace pdkernel {

/// Maps (u, sigma) at the left of a homogeneous layer to its right end at
/// angular frequency omega.
inline Eigen::Matrix2d layer_transfer_matrix(double modulus, double density, double length,
                                             double omega) {
  const double k = omega * std::sqrt(density / modulus);
  const double kh = k * length;
  Eigen::Matrix2d m;
  const double c = std::cos(kh);
  // sin(kh) / (E k) -> h / E as omega -> 0
  const double sinc = (std::abs(kh) < 1e-8) ? length : std::sin(kh) / k;
  m << c, sinc / modulus, -modulus * k * std::sin(kh), c;
  return m;
}

inline Eigen::Matrix2d cell_transfer_matrix(const UnitCell& cell, double omega) {
  const double l = cell.cell_length;
  const Eigen::Matrix2d stiff =
      layer_transfer_matrix(cell.e_stiff, cell.rho_stiff, cell.alpha * l, omega);
  const Eigen::Matrix2d compliant =
      layer_transfer_matrix(cell.e_compliant, cell.rho_compliant, cell.beta * l, omega);
  return stiff * compliant * stiff;
}

struct BlochResult {
  double half_trace;                 // cos(2 pi xi l) on a pass band
  std::complex<double> bloch_factor; // e^{i 2 pi xi l}, or the decaying root
  bool evanescent;
};

inline BlochResult bloch_dispersion_oracle(const UnitCell& cell, double omega) {
  if (!(omega >= 0.0)) throw DomainError("bloch oracle: omega must be non-negative");
  const double h = 0.5 * cell_transfer_matrix(cell, omega).trace();
  if (std::abs(h) <= 1.0) {
    return {h, {h, std::sqrt(1.0 - h * h)}, false};
  }
  const double root = std::sqrt(h * h - 1.0);
  return {h, {h > 0 ? h - root : h + root, 0.0}, true};
}

/// omega(xi) on the acoustic branch for 0 <= xi l <= 1/2, by bracketing the
/// first crossing of cos(2 pi xi l) and bisecting.
inline double bloch_acoustic_omega(const UnitCell& cell, double xi) {
  const double l = cell.cell_length;
  const double reduced = xi * l;
  if (!(reduced >= 0.0 && reduced <= 0.5)) {
    throw DomainError("bloch_acoustic_omega: xi*l must lie in [0, 0.5]");
  }
  if (reduced == 0.0) return 0.0;
  const double target = std::cos(2.0 * std::numbers::pi * reduced);
  auto f = [&](double w) { return 0.5 * cell_transfer_matrix(cell, w).trace() - target; };

  const double slow = std::min(std::sqrt(cell.e_compliant / cell.rho_compliant),
                               std::sqrt(cell.e_stiff / cell.rho_stiff));
  const double step = std::numbers::pi * slow / (400.0 * l);
  double lo = 0.0;
  double hi = step;
  int guard = 0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi += step;
    if (++guard > 1000000) throw NumericalError("bloch_acoustic_omega: no crossing found");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace pdkernel
