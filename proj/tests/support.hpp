#pragma once

// Seeded generators for property tests.

#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "pdkernel/microstructure.hpp"

namespace pdkernel::gen {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

/// Admissible cell: alpha in [0.05, 0.45], stiffness contrast 1..100,
/// density ratio 0.25..4 in either direction.
inline UnitCell random_cell(std::mt19937_64& rng) {
  const double alpha = uniform(rng, 0.05, 0.45);
  const double l = log_uniform(rng, 0.005, 0.05);
  const double ec = log_uniform(rng, 1e9, 50e9);
  const double es = ec * log_uniform(rng, 1.0, 100.0);
  const double rc = uniform(rng, 1000.0, 10000.0);
  const double rs = rc * log_uniform(rng, 0.25, 4.0);
  return make_unit_cell(alpha, l, es, ec, rs, rc);
}

inline UnitCell reference_cell() { return make_unit_cell(0.25, 0.02, 200e9, 5e9, 8000.0, 8000.0); }

/// Fresh per-test scratch directory under the system temp path.
inline std::filesystem::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const auto dir = std::filesystem::temp_directory_path() / "pdkernel_tests" /
                   (std::string(info->test_suite_name()) + "." + info->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace pdkernel::gen
