#pragma once

// Recovers the stiff-segment fraction alpha from a set of target order-2
// coefficients c_1..c_k by relative least squares: a coarse grid over
// (0, 0.5) followed by Brent refinement around the best grid point.

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pdkernel/discrete_kernel.hpp"
#include "pdkernel/errors.hpp"
#include "pdkernel/microstructure.hpp"

namespace pdkernel {

struct AlphaSweepOptions {
  int grid_points = 49;
  int order = 2;
  /// Cheap quadrature for the sweep itself; the reported coefficients are
  /// re-derived with the default options.
  FourierOptions quadrature{8, 256, false};
};

struct AlphaSweepResult {
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 0.0;               // sqrt(sum ((c_n - t_n) / t_n)^2)
  double max_relative_error = 0.0;     // max_n |c_n - t_n| / |t_n|
  std::vector<double> coefficients;    // c_1..c_k at the recovered alpha
  std::size_t evaluations = 0;
};

/// Relative least-squares residual of c_1..c_k against `targets`.
inline double alpha_residual(const UnitCell& base, double alpha, const std::vector<double>& targets,
                             int order, const FourierOptions& quadrature) {
  const int n_max = std::max(quadrature.n_max, static_cast<int>(targets.size()));
  FourierOptions options = quadrature;
  options.n_max = n_max;
  options.num_quad = std::max(options.num_quad, 8 * n_max);
  const UnitCell cell = make_unit_cell(alpha, base.cell_length, base.e_stiff, base.e_compliant,
                                       base.rho_stiff, base.rho_compliant);
  const DiscreteKernel k = fourier_coefficients(cell, order, options);
  double sum = 0.0;
  for (std::size_t n = 0; n < targets.size(); ++n) {
    const double r = (k.c(static_cast<int>(n) + 1) - targets[n]) / targets[n];
    sum += r * r;
  }
  return std::sqrt(sum);
}

/// Only the material values and cell length of `base` are used.
inline AlphaSweepResult sweep_alpha(const UnitCell& base, const std::vector<double>& targets,
                                    const AlphaSweepOptions& options = {}) {
  if (targets.empty()) throw DomainError("sweep_alpha: at least one target coefficient required");
  for (double t : targets) {
    if (!std::isfinite(t) || t == 0.0) {
      throw DomainError("sweep_alpha: targets must be finite and non-zero");
    }
  }
  if (options.grid_points < 3) throw DomainError("sweep_alpha: grid_points must be >= 3");

  AlphaSweepResult result;
  auto objective = [&](double alpha) {
    ++result.evaluations;
    try {
      return alpha_residual(base, alpha, targets, options.order, options.quadrature);
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const double h = 0.5 / (options.grid_points + 1);
  int best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= options.grid_points; ++i) {
    const double value = objective(i * h);
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  if (best < 0) throw NumericalError("sweep_alpha: no admissible alpha produced a kernel");

  const auto [alpha, value] = boost::math::tools::brent_find_minima(
      objective, (best - 1) * h + 1e-12, (best + 1) * h - 1e-12,
      std::numeric_limits<double>::digits / 2);

  result.alpha = value < best_value ? alpha : best * h;
  result.beta = 1.0 - 2.0 * result.alpha;
  const UnitCell cell = make_unit_cell(result.alpha, base.cell_length, base.e_stiff,
                                       base.e_compliant, base.rho_stiff, base.rho_compliant);
  const DiscreteKernel k = fourier_coefficients(cell, options.order);
  double sum = 0.0;
  for (std::size_t n = 0; n < targets.size(); ++n) {
    const double c = k.c(static_cast<int>(n) + 1);
    const double r = std::abs(c - targets[n]) / std::abs(targets[n]);
    result.coefficients.push_back(c);
    result.max_relative_error = std::max(result.max_relative_error, r);
    sum += r * r;
  }
  result.residual = std::sqrt(sum);
  return result;
}

}  // namespace pdkernel
