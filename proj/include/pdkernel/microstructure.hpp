#pragma once

// Periodic stiff/compliant/stiff unit cell and the bar built from it.

#include <cmath>
#include <cstddef>
#include <string>

#include "pdkernel/errors.hpp"

namespace pdkernel {

/// One period of the composite: stiff layer of length alpha*l, compliant
/// layer of length beta*l, stiff layer of length alpha*l.
struct UnitCell {
  double alpha = 0.25;
  double beta = 0.5;
  double cell_length = 0.02;
  double e_stiff = 200e9;
  double e_compliant = 5e9;
  double rho_stiff = 8000.0;
  double rho_compliant = 8000.0;

  bool operator==(const UnitCell&) const = default;
};

struct MaterialPoint {
  double modulus;
  double density;
};

inline void validate(const UnitCell& cell) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(cell.alpha) || !positive(cell.beta)) {
    throw DomainError("unit cell: alpha and beta must be positive");
  }
  if (std::abs(2.0 * cell.alpha + cell.beta - 1.0) > 1e-12) {
    throw DomainError("unit cell: volume fractions violate 2*alpha + beta = 1");
  }
  if (!positive(cell.cell_length)) {
    throw DomainError("unit cell: cell_length must be positive");
  }
  if (!positive(cell.e_stiff) || !positive(cell.e_compliant) ||
      !positive(cell.rho_stiff) || !positive(cell.rho_compliant)) {
    throw DomainError("unit cell: moduli and densities must be positive");
  }
  if (cell.e_stiff < cell.e_compliant) {
    throw DomainError("unit cell: e_stiff must be >= e_compliant");
  }
}

/// Builds and validates a cell; beta is implied by 2*alpha + beta = 1.
inline UnitCell make_unit_cell(double alpha, double cell_length, double e_stiff,
                               double e_compliant, double rho_stiff,
                               double rho_compliant) {
  UnitCell cell{alpha,   1.0 - 2.0 * alpha, cell_length, e_stiff,
                e_compliant, rho_stiff,     rho_compliant};
  validate(cell);
  return cell;
}

/// Pointwise properties at local coordinate y in [0, l]. The interface points
/// alpha*l and (alpha+beta)*l belong to the compliant phase.
inline MaterialPoint material_at(const UnitCell& cell, double y) {
  const double l = cell.cell_length;
  if (!(y >= 0.0 && y <= l)) {
    throw DomainError("material_at: y = " + std::to_string(y) +
                      " outside [0, cell_length]");
  }
  const double first = cell.alpha * l;
  const double second = (cell.alpha + cell.beta) * l;
  if (y >= first && y <= second) {
    return {cell.e_compliant, cell.rho_compliant};
  }
  return {cell.e_stiff, cell.rho_stiff};
}

/// Harmonic volume-fraction average 1 / (2a/E_stiff + b/E_compliant).
inline double homogenized_modulus(const UnitCell& cell) {
  return 1.0 / (2.0 * cell.alpha / cell.e_stiff + cell.beta / cell.e_compliant);
}

/// Arithmetic volume-fraction average 2a*rho_stiff + b*rho_compliant.
inline double homogenized_density(const UnitCell& cell) {
  return 2.0 * cell.alpha * cell.rho_stiff + cell.beta * cell.rho_compliant;
}

inline double homogenized_wave_speed(const UnitCell& cell) {
  return std::sqrt(homogenized_modulus(cell) / homogenized_density(cell));
}

struct Bar {
  double length = 1.0;
  UnitCell cell{};
  std::size_t num_cells = 50;

  bool operator==(const Bar&) const = default;
};

/// Rejects bars that do not hold a whole number of cells.
inline Bar make_bar(double length, const UnitCell& cell) {
  validate(cell);
  if (!(std::isfinite(length) && length > 0.0)) {
    throw DomainError("bar: length must be positive");
  }
  const double ratio = length / cell.cell_length;
  const double count = std::round(ratio);
  if (count < 1.0 || std::abs(count * cell.cell_length - length) > 1e-9 * length) {
    throw DomainError("bar: length " + std::to_string(length) +
                      " is not an integer number of cells");
  }
  return Bar{length, cell, static_cast<std::size_t>(count)};
}

}  // namespace pdkernel
