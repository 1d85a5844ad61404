#pragma once

// Error metrics between a reference and a test time series.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "pdkernel/errors.hpp"
#include "pdkernel/solver_state.hpp"

namespace pdkernel {

/// Linear interpolation of (t_src, v_src) onto t_dst; t_src ascending and
/// t_dst inside its range.
inline std::vector<double> resample_linear(std::span<const double> t_src,
                                           std::span<const double> v_src,
                                           std::span<const double> t_dst) {
  std::vector<double> out;
  out.reserve(t_dst.size());
  for (double t : t_dst) out.push_back(interpolate_profile(t_src, v_src, t));
  return out;
}

/// First time |v| reaches `fraction` of its peak, linearly interpolated
/// between samples. Empty when the series is identically zero.
inline std::optional<double> arrival_time(std::span<const double> t, std::span<const double> v,
                                          double fraction = 0.05) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  if (peak == 0.0) return std::nullopt;
  const double threshold = fraction * peak;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) >= threshold) {
      if (k == 0) return t[0];
      const double a = std::abs(v[k - 1]);
      const double b = std::abs(v[k]);
      const double w = (threshold - a) / (b - a);
      return t[k - 1] + w * (t[k] - t[k - 1]);
    }
  }
  return std::nullopt;
}

struct ComparisonMetrics {
  double relative_l2 = 0.0;
  double peak_amplitude_error = 0.0;  // | max|test| - max|ref| | / max|ref|
  double arrival_time_error = 0.0;    // seconds
  std::optional<double> reference_arrival;
  std::optional<double> test_arrival;
  std::size_t samples = 0;
};

/// Compares on the reference time grid restricted to the overlap of both
/// windows; the test series is linearly resampled.
inline ComparisonMetrics compare(std::span<const double> t_ref, std::span<const double> ref,
                                 std::span<const double> t_test, std::span<const double> test) {
  if (t_ref.empty() || t_test.empty() || t_ref.size() != ref.size() ||
      t_test.size() != test.size()) {
    throw DomainError("compare: empty or mismatched series");
  }
  const double lo = std::max(t_ref.front(), t_test.front());
  const double hi = std::min(t_ref.back(), t_test.back());
  const double slack = 1e-12 * std::max(std::abs(t_ref.back()), std::abs(t_test.back()));
  if (hi < lo - slack) throw DomainError("compare: time windows are disjoint");

  std::vector<double> t_common, r_common;
  for (std::size_t k = 0; k < t_ref.size(); ++k) {
    if (t_ref[k] >= lo - slack && t_ref[k] <= hi + slack) {
      t_common.push_back(t_ref[k]);
      r_common.push_back(ref[k]);
    }
  }
  if (t_common.empty()) throw DomainError("compare: no reference samples in common window");
  const std::vector<double> x_common = resample_linear(t_test, test, t_common);

  ComparisonMetrics m;
  m.samples = t_common.size();
  double diff2 = 0.0, ref2 = 0.0, peak_ref = 0.0, peak_test = 0.0;
  for (std::size_t k = 0; k < t_common.size(); ++k) {
    const double d = x_common[k] - r_common[k];
    diff2 += d * d;
    ref2 += r_common[k] * r_common[k];
    peak_ref = std::max(peak_ref, std::abs(r_common[k]));
    peak_test = std::max(peak_test, std::abs(x_common[k]));
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  m.relative_l2 = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : (diff2 > 0.0 ? inf : 0.0);
  m.peak_amplitude_error = peak_ref > 0.0 ? std::abs(peak_test - peak_ref) / peak_ref
                                          : (peak_test > 0.0 ? inf : 0.0);
  m.reference_arrival = arrival_time(t_common, r_common);
  m.test_arrival = arrival_time(t_common, x_common);
  if (m.reference_arrival && m.test_arrival) {
    m.arrival_time_error = std::abs(*m.test_arrival - *m.reference_arrival);
  } else if (m.reference_arrival.has_value() != m.test_arrival.has_value()) {
    m.arrival_time_error = inf;
  }
  return m;
}

}  // namespace pdkernel
