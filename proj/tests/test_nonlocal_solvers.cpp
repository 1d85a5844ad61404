#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pdkernel/compare.hpp"
#include "pdkernel/nonlocal_solvers.hpp"
#include "pdkernel/run.hpp"
#include "support.hpp"

using namespace pdkernel;
using std::numbers::pi;

namespace {

DiscreteKernel reference_kernel(int order = 2) {
  return truncate(fourier_coefficients(UnitCell{}, order), 1e-4);
}

const BoundaryPulse kPulse = make_peak_normalized_pulse(-5e-5, 1.57e-4);

}  // namespace

TEST(NonlocalAcceleration, ConstantFieldIsExactlyStill) {
  const auto w = derived_kernel_weights(reference_kernel());
  std::vector<double> u(50, 0.37), a(50, 1.0);
  for (auto rule : {GhostRule::odd_reflection, GhostRule::clamped_follower, GhostRule::periodic}) {
    nonlocal_acceleration(u, w, 2.5e7, NodeLayout::cell_centred, rule, {0.37, 0.37}, a);
    for (double x : a) EXPECT_EQ(x, 0.0);
  }
}

TEST(NonlocalAcceleration, IntegerLinearFieldIsExactlyStillInTheInterior) {
  const auto w = derived_kernel_weights(reference_kernel());
  const int m = static_cast<int>(w.size()) - 1;
  std::vector<double> u(50), a(50);
  for (int i = 0; i < 50; ++i) u[i] = 3.0 * i - 7.0;
  nonlocal_acceleration(u, w, 2.5e7, NodeLayout::cell_centred, GhostRule::clamped_follower,
                        {0.0, 0.0}, a);
  for (int i = m; i < 50 - m; ++i) EXPECT_EQ(a[i], 0.0) << i;
}

TEST(NonlocalAcceleration, LinearFieldWithMatchingBoundaryValuesIsStillEverywhere) {
  // Odd reflection about the end values continues a linear field linearly.
  const Bar bar = make_bar(1.0, UnitCell{});
  const auto x = cell_centres(bar);
  const auto w = derived_kernel_weights(reference_kernel(4));
  std::vector<double> u(x.size()), a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = 1e-3 + 2e-3 * x[i];
  nonlocal_acceleration(u, w, 2.5e7, NodeLayout::cell_centred, GhostRule::odd_reflection,
                        {1e-3, 3e-3}, a);
  // Roundoff scale: prefactor * sum|w| * max|u| * eps.
  double total = 0.0;
  for (double v : w) total += std::abs(v);
  const double roundoff = 2.5e7 * total * 3e-3 * 1e-14;
  for (double v : a) EXPECT_NEAR(v, 0.0, roundoff);
}

TEST(NonlocalAcceleration, PlaneWaveSeesTheDiscreteSymbol) {
  const DiscreteKernel k = reference_kernel(4);
  const auto w = derived_kernel_weights(k);
  const int n = 50;
  for (int mode : {1, 3, 10, 25}) {
    std::vector<double> u(n), a(n);
    const double xi = mode / (n * k.cell_length);
    for (int i = 0; i < n; ++i) u[i] = std::cos(2 * pi * mode * (i + 0.5) / n);
    nonlocal_acceleration(u, w, k.prefactor, NodeLayout::cell_centred, GhostRule::periodic, {},
                          a);
    const double symbol = k.prefactor * discrete_symbol(k, xi);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(a[i], symbol * u[i], 1e-9 * std::abs(symbol));
  }
}

TEST(NonlocalAcceleration, StencilWiderThanNodeSetIsRejected) {
  std::vector<double> u(3), a(3), w{0.0, 1.0, 1.0, 1.0};
  EXPECT_THROW(nonlocal_acceleration(u, w, 1.0, NodeLayout::cell_centred,
                                     GhostRule::odd_reflection, {}, a),
               DomainError);
}

TEST(GhostValue, MirrorIndices) {
  const std::vector<double> u{1.0, 2.0, 4.0, 8.0};
  const BoundaryValues bc{0.5, 10.0};
  using detail::ghost_value;
  EXPECT_EQ(ghost_value(u, -1, NodeLayout::cell_centred, GhostRule::odd_reflection, bc), 0.0);
  EXPECT_EQ(ghost_value(u, -2, NodeLayout::cell_centred, GhostRule::odd_reflection, bc), -1.0);
  EXPECT_EQ(ghost_value(u, 4, NodeLayout::cell_centred, GhostRule::odd_reflection, bc), 12.0);
  EXPECT_EQ(ghost_value(u, -1, NodeLayout::boundary_nodes, GhostRule::odd_reflection, bc), -1.0);
  EXPECT_EQ(ghost_value(u, 4, NodeLayout::boundary_nodes, GhostRule::odd_reflection, bc), 16.0);
  EXPECT_EQ(ghost_value(u, 5, NodeLayout::cell_centred, GhostRule::clamped_follower, bc), 10.0);
  EXPECT_EQ(ghost_value(u, -1, NodeLayout::cell_centred, GhostRule::periodic, bc), 8.0);
  EXPECT_EQ(ghost_value(u, 5, NodeLayout::cell_centred, GhostRule::periodic, bc), 2.0);
}

TEST(DerivedKernel, StableStepBound) {
  const DiscreteKernel k = reference_kernel();
  const auto w = derived_kernel_weights(k);
  // Alternating mode gives the largest symbol for this sign pattern.
  double alt = 0.0;
  for (std::size_t n = 1; n < w.size(); ++n) alt += 2 * w[n] * ((n % 2 ? -1.0 : 1.0) - 1.0);
  EXPECT_NEAR(stable_dt(k), 2.0 / std::sqrt(k.prefactor * std::abs(alt)), 1e-12);
  const DerivedKernelModel model(make_bar(1.0, UnitCell{}), k);
  EXPECT_THROW(model.initial_state(1.01 * model.stable_dt()), ConfigError);
  EXPECT_NO_THROW(model.initial_state(model.stable_dt()));
}

TEST(DerivedKernel, RejectsKernelForAnotherCell) {
  DiscreteKernel k = reference_kernel();
  k.cell_length = 0.01;
  EXPECT_THROW(DerivedKernelModel(make_bar(1.0, UnitCell{}), k), ConfigError);
}

TEST(DerivedKernel, StaysAtRestWithoutPulse) {
  const DerivedKernelModel model(make_bar(1.0, UnitCell{}), reference_kernel());
  SolverState s = model.initial_state(1e-6);
  const BoundaryPulse silent = make_peak_normalized_pulse(0.0, 1.57e-4);
  for (int n = 0; n < 100; ++n) model.advance(s, silent);
  for (double u : s.displacement) EXPECT_EQ(u, 0.0);
  EXPECT_EQ(s.step, 100u);
  EXPECT_NEAR(s.time, 1e-4, 1e-15);
}

TEST(DerivedKernel, MirrorSymmetryIsBitwise) {
  const Bar bar = make_bar(1.0, UnitCell{});
  const DiscreteKernel k = reference_kernel(4);
  const DerivedKernelModel right(bar, k, GhostRule::odd_reflection, DrivenEnd::right);
  const DerivedKernelModel left(bar, k, GhostRule::odd_reflection, DrivenEnd::left);
  SolverState a = right.initial_state(7e-7);
  SolverState b = left.initial_state(7e-7);
  for (int n = 0; n < 400; ++n) {
    right.advance(a, kPulse);
    left.advance(b, kPulse);
  }
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(a.displacement[i], b.displacement[n - 1 - i]);
}

TEST(StandardPd, WeightsReproduceSecondMoment) {
  auto rng = gen::make_rng(51);
  for (int t = 0; t < 20; ++t) {
    const double lp = gen::log_uniform(rng, 1e-3, 1e-2);
    const int m = 1 + static_cast<int>(rng() % 8);
    StandardPdConfig c{lp, m * lp, 1e9, 1000.0};
    const auto w = standard_pd_weights(c);
    double moment = 0.0;
    for (int k = 1; k <= m; ++k) moment += w[k] * (k * lp) * (k * lp);
    EXPECT_NEAR(moment, 1.0, 1e-12);
    const double xi = 1e-4 / lp;
    EXPECT_NEAR(standard_pd_symbol(c, xi), -4 * pi * pi * xi * xi, 1e-5 * 4 * pi * pi * xi * xi);
  }
}

TEST(StandardPd, ConfigValidation) {
  EXPECT_THROW(make_standard_pd_config(UnitCell{}, 0.005, 0.0175), ConfigError);
  EXPECT_THROW(make_standard_pd_config(UnitCell{}, 0.0, 0.02), ConfigError);
  const auto c = make_standard_pd_config(UnitCell{}, 0.005, 0.02);
  EXPECT_EQ(c.horizon_nodes(), 4);
  EXPECT_DOUBLE_EQ(c.e_ave, homogenized_modulus(UnitCell{}));
  EXPECT_EQ(standard_pd_nodes(1.0, c).size(), 201u);
  EXPECT_THROW(standard_pd_nodes(1.0012, c), ConfigError);
}

TEST(StandardPd, HomogeneousBarArrivalMatchesWaveSpeed) {
  // Homogeneous bar: the 5 % crossing at the midpoint trails the driven
  // end's own 5 % crossing by (L/2)/c.
  const UnitCell cell = make_unit_cell(0.25, 0.02, 200e9, 200e9, 8000, 8000);
  const StandardPdModel model(1.0, make_standard_pd_config(cell, 0.005, 0.02));
  const double dt = 0.5 * model.stable_dt();
  const auto series = run(model, kPulse, dt, 3.2e-4, RecordSpec{{0.5, 1.0}, 1});
  const double c = std::sqrt(200e9 / 8000.0);
  const double t_mid = *arrival_time(series.time, series.values[0]);
  const double t_end = *arrival_time(series.time, series.values[1]);
  const double expected = 0.5 / c;
  EXPECT_LT(std::abs((t_mid - t_end) - expected) / expected, 0.02);
}

TEST(StandardPd, MirrorSymmetryIsBitwise) {
  const auto cfg = make_standard_pd_config(UnitCell{}, 0.005, 0.02);
  const StandardPdModel right(1.0, cfg, GhostRule::odd_reflection, DrivenEnd::right);
  const StandardPdModel left(1.0, cfg, GhostRule::odd_reflection, DrivenEnd::left);
  SolverState a = right.initial_state(7e-7);
  SolverState b = left.initial_state(7e-7);
  for (int n = 0; n < 400; ++n) {
    right.advance(a, kPulse);
    left.advance(b, kPulse);
  }
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(a.displacement[i], b.displacement[n - 1 - i]);
}

TEST(StandardPd, DrivenEndFollowsPulseAndFixedEndStaysPut) {
  const StandardPdModel model(1.0, make_standard_pd_config(UnitCell{}, 0.005, 0.02));
  SolverState s = model.initial_state(5e-7);
  for (int n = 0; n < 157; ++n) model.advance(s, kPulse);
  EXPECT_EQ(s.displacement.front(), 0.0);
  EXPECT_DOUBLE_EQ(s.displacement.back(), bc_displacement(kPulse, s.time));
}
