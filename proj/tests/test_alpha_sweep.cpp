#include <gtest/gtest.h>

#include "pdkernel/alpha_sweep.hpp"
#include "support.hpp"

using namespace pdkernel;

TEST(AlphaSweep, RecoversAlphaFromItsOwnCoefficients) {
  for (double alpha : {0.1, 0.25, 0.4}) {
    const UnitCell cell = make_unit_cell(alpha, 0.02, 200e9, 5e9, 8000, 8000);
    const DiscreteKernel k = fourier_coefficients(cell, 2);
    const auto r = sweep_alpha(cell, {k.c(1), k.c(2), k.c(3), k.c(4)});
    EXPECT_NEAR(r.alpha, alpha, 1e-6);
    EXPECT_NEAR(r.beta, 1.0 - 2.0 * alpha, 2e-6);
    EXPECT_LT(r.residual, 1e-6);
    EXPECT_EQ(r.coefficients.size(), 4u);
  }
}

TEST(AlphaSweep, PublishedTableGivesQuarterCell) {
  const auto r = sweep_alpha(UnitCell{}, {161.3418, -11.4752, 0.8162, -0.058});
  EXPECT_NEAR(r.alpha, 0.25, 1e-3);
  EXPECT_LT(r.max_relative_error, 0.01);
}

TEST(AlphaSweep, ResidualIsRelativeLeastSquares) {
  const UnitCell cell;
  const DiscreteKernel k = fourier_coefficients(cell, 2, {8, 256, false});
  const double r = alpha_residual(cell, 0.25, {2.0 * k.c(1), k.c(2)}, 2, {8, 256, false});
  EXPECT_NEAR(r, 0.5, 1e-12);
}

TEST(AlphaSweep, ErrorPaths) {
  EXPECT_THROW(sweep_alpha(UnitCell{}, {}), DomainError);
  EXPECT_THROW(sweep_alpha(UnitCell{}, {1.0, 0.0}), DomainError);
  AlphaSweepOptions o;
  o.grid_points = 2;
  EXPECT_THROW(sweep_alpha(UnitCell{}, {1.0}, o), DomainError);
}
