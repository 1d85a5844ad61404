#pragma once

// Discrete influence function c_n: Fourier coefficients of Omega over one
// period, stored for n >= 0 and mirrored to negative n.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "pdkernel/errors.hpp"
#include "pdkernel/microstructure.hpp"
#include "pdkernel/spectral.hpp"

namespace pdkernel {

struct DiscreteKernel {
  double cell_length = 0.0;
  int order = 2;
  double prefactor = 0.0;       // e_stiff / rho_compliant, m^2/s^2
  double truncation_tol = 0.0;  // 1/m^2; 0 means nothing discarded
  std::vector<double> half;     // c_0 .. c_m
  std::vector<std::string> warnings;

  int max_offset() const { return static_cast<int>(half.size()) - 1; }
  double c(int n) const { return half.at(static_cast<std::size_t>(n < 0 ? -n : n)); }

  /// (n, c_n) for n = -m .. m.
  std::vector<std::pair<int, double>> coefficients() const {
    std::vector<std::pair<int, double>> out;
    const int m = max_offset();
    out.reserve(static_cast<std::size_t>(2 * m + 1));
    for (int n = -m; n <= m; ++n) out.emplace_back(n, c(n));
    return out;
  }

  double sum() const {
    double s = half.empty() ? 0.0 : half[0];
    for (std::size_t n = 1; n < half.size(); ++n) s += 2.0 * half[n];
    return s;
  }
};

/// c_0 := -2 sum_{n>=1} c_n so the kernel annihilates constants.
inline void enforce_zero_sum(DiscreteKernel& kernel) {
  if (kernel.half.empty()) return;
  double tail = 0.0;
  for (std::size_t n = 1; n < kernel.half.size(); ++n) tail += kernel.half[n];
  kernel.half[0] = -2.0 * tail;
}

/// Truncated Fourier series sum_n c_n (cos(2 pi n l xi) - 1), i.e. the
/// multiplier a plane wave sees in the discrete equation of motion.
inline double discrete_symbol(const DiscreteKernel& kernel, double xi) {
  const double theta = 2.0 * std::numbers::pi * kernel.cell_length * xi;
  double s = 0.0;
  for (int n = 1; n <= kernel.max_offset(); ++n) {
    s += 2.0 * kernel.c(n) * (std::cos(n * theta) - 1.0);
  }
  return s;
}

/// exp(slope) of a least-squares fit of log|c_n| against n over n >= 1,
/// ignoring coefficients below 1e-13 |c_1| (rounding floor).
inline double fitted_decay_ratio(const DiscreteKernel& kernel) {
  const int m = kernel.max_offset();
  if (m < 2) throw DomainError("decay ratio needs at least c_1 and c_2");
  const double floor = 1e-13 * std::abs(kernel.c(1));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int n = 1; n <= m; ++n) {
    const double a = std::abs(kernel.c(n));
    if (a <= floor) break;
    const double y = std::log(a);
    sx += n;
    sy += y;
    sxx += double(n) * n;
    sxy += n * y;
    ++count;
  }
  if (count < 2) throw DomainError("decay ratio: fewer than two resolvable coefficients");
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return std::exp(slope);
}

struct FourierOptions {
  int n_max = 32;
  int num_quad = 1024;
  /// Re-derive on a doubled grid and require agreement to 1e-8 relative.
  bool check_convergence = true;
};

namespace detail {

// Period average (1/N) sum_k Omega_k e^{-i 2 pi n k / N} over every
// `stride`-th sample of a uniform grid.
inline std::vector<Complex> periodic_trapezoid(const std::vector<SpectralSample>& samples,
                                               std::size_t stride, int n_max) {
  const std::size_t count = samples.size() / stride;
  std::vector<Complex> out(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      // Reduce n*k mod count first so the phase stays exact for large n.
      const std::size_t phase_index = (static_cast<std::size_t>(n) * k) % count;
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(phase_index) /
                           static_cast<double>(count);
      acc += samples[k * stride].omega_hat * std::polar(1.0, phase);
    }
    out[static_cast<std::size_t>(n)] = acc / static_cast<double>(count);
  }
  return out;
}

inline double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

/// c_n = l * int_0^{1/l} Omega(xi) e^{-i 2 n pi l xi} dxi for n = 0..n_max by
/// the periodic trapezoid rule, then symmetrized, made real and zero-sum.
inline DiscreteKernel fourier_coefficients(const UnitCell& cell, int order,
                                           const FourierOptions& options = {}) {
  validate(cell);
  if (options.n_max < 2) throw DomainError("fourier_coefficients: n_max must be >= 2");
  if (options.num_quad < 8 * options.n_max) {
    throw DomainError("fourier_coefficients: num_quad must be >= 8 * n_max");
  }
  const std::size_t base = static_cast<std::size_t>(options.num_quad);
  const std::size_t stride = options.check_convergence ? 2 : 1;
  const SpectralTransfer transfer = sample_spectral_transfer(cell, order, base * stride);

  const std::vector<Complex> coarse =
      detail::periodic_trapezoid(transfer.samples, stride, options.n_max);
  const double scale = detail::max_abs(coarse);

  if (options.check_convergence) {
    const std::vector<Complex> fine =
        detail::periodic_trapezoid(transfer.samples, 1, options.n_max);
    for (std::size_t n = 0; n < coarse.size(); ++n) {
      if (std::abs(fine[n].real() - coarse[n].real()) > 1e-8 * scale) {
        throw ResolutionError("fourier_coefficients: c_" + std::to_string(n) +
                              " not converged with num_quad = " +
                              std::to_string(options.num_quad));
      }
    }
  }
  for (std::size_t n = 0; n < coarse.size(); ++n) {
    if (std::abs(coarse[n].imag()) > 1e-8 * scale) {
      throw DerivationInconsistencyError("fourier_coefficients: imaginary residual " +
                                         std::to_string(coarse[n].imag()) + " in c_" +
                                         std::to_string(n));
    }
  }

  DiscreteKernel kernel;
  kernel.cell_length = cell.cell_length;
  kernel.order = order;
  kernel.prefactor = cell.e_stiff / cell.rho_compliant;
  kernel.truncation_tol = 0.0;
  kernel.half.reserve(coarse.size());
  for (const auto& c : coarse) kernel.half.push_back(c.real());
  kernel.warnings = transfer.warnings;
  enforce_zero_sum(kernel);
  return kernel;
}

/// Keeps the smallest range |n| <= m such that every discarded |c_n| < tol,
/// then re-enforces the zero sum. tol = 0 keeps everything.
inline DiscreteKernel truncate(const DiscreteKernel& kernel, double tol) {
  if (!(tol >= 0.0)) throw DomainError("truncate: tol must be non-negative");
  if (kernel.max_offset() < 1) throw DomainError("truncate: kernel has no c_1");
  if (tol > std::abs(kernel.c(1))) {
    throw DegenerateKernelError("truncate: tol exceeds |c_1|; nothing but c_0 would remain");
  }
  int keep = kernel.max_offset();
  if (tol > 0.0) {
    while (keep > 1 && std::abs(kernel.c(keep)) < tol) --keep;
  }
  DiscreteKernel out = kernel;
  out.half.resize(static_cast<std::size_t>(keep) + 1);
  out.truncation_tol = tol;
  enforce_zero_sum(out);
  return out;
}

}  // namespace pdkernel
