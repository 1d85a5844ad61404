#pragma once

// Config-driven pipeline: kernel derivation, single-method runs, the
// three-way midpoint comparison against the resolved reference, and the
// dispersion table.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <future>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pdkernel/bloch.hpp"
#include "pdkernel/compare.hpp"
#include "pdkernel/config.hpp"
#include "pdkernel/discrete_kernel.hpp"
#include "pdkernel/fem.hpp"
#include "pdkernel/kernel_io.hpp"
#include "pdkernel/nonlocal_solvers.hpp"
#include "pdkernel/run.hpp"

namespace pdkernel {

/// Fourier coefficients with the config's quadrature, then truncation.
inline DiscreteKernel derive_kernel(const ExperimentConfig& config, int order) {
  FourierOptions options;
  options.n_max = config.kernel.n_max;
  options.num_quad = config.kernel.num_quad;
  return truncate(fourier_coefficients(config.cell(), order, options),
                  config.kernel.truncation_tol);
}

inline DiscreteKernel derive_kernel(const ExperimentConfig& config) {
  return derive_kernel(config, config.kernel.order);
}

/// min(safety * stability bound, dt_max).
inline double choose_dt(const ExperimentConfig& config, double stable) {
  return std::min(config.solver.dt_safety * stable, config.dt_max());
}

struct SimulationResult {
  TimeSeries series;
  double dt = 0.0;
  double wall_seconds = 0.0;
};

namespace detail {

template <TimeStepper Model>
SimulationResult run_timed(const Model& model, const ExperimentConfig& config,
                           const RecordSpec& record) {
  const auto start = std::chrono::steady_clock::now();
  SimulationResult out;
  out.dt = choose_dt(config, model.stable_dt());
  out.series = run(model, config.boundary_pulse(), out.dt, config.t_end(), record);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace detail

inline SimulationResult simulate_derived(const ExperimentConfig& config,
                                         const DiscreteKernel& kernel, const RecordSpec& record) {
  const DerivedKernelModel model(config.bar(), kernel, config.solver.ghost_rule);
  return detail::run_timed(model, config, record);
}

inline SimulationResult simulate_standard_pd(const ExperimentConfig& config,
                                             const RecordSpec& record) {
  const StandardPdModel model(
      config.geometry.bar_length,
      make_standard_pd_config(config.cell(), config.standard_pd.node_spacing,
                              config.standard_pd.horizon),
      config.solver.ghost_rule);
  return detail::run_timed(model, config, record);
}

inline SimulationResult simulate_fem(const ExperimentConfig& config, const RecordSpec& record) {
  const FemModel model(config.bar(), config.fem, config.materials.area);
  return detail::run_timed(model, config, record);
}

inline RecordSpec record_spec(const ExperimentConfig& config) {
  return RecordSpec{config.solver.probes, config.solver.record_stride};
}

/// Runs one method at the config's probes. The derived kernel is derived
/// from the config unless one is supplied.
inline SimulationResult simulate(const ExperimentConfig& config, Method method,
                                 const std::optional<DiscreteKernel>& kernel = std::nullopt) {
  const RecordSpec record = record_spec(config);
  switch (method) {
    case Method::derived_kernel:
      return simulate_derived(config, kernel ? *kernel : derive_kernel(config), record);
    case Method::standard_pd:
      return simulate_standard_pd(config, record);
    case Method::resolved_fem:
      return simulate_fem(config, record);
  }
  throw DomainError("simulate: unknown method");
}

struct ComparisonEntry {
  std::string label;  // fem, standard_pd, derived_o<order>
  Method method = Method::resolved_fem;
  int order = 0;      // kernel order for derived entries
  SimulationResult result;
  ComparisonMetrics metrics;  // against the reference; zero for the reference itself
};

struct ComparisonReport {
  double probe = 0.0;
  double t_end = 0.0;
  std::vector<ComparisonEntry> entries;  // entries[0] is the reference

  const ComparisonEntry& reference() const { return entries.front(); }
  const ComparisonEntry& entry(const std::string& label) const {
    for (const auto& e : entries) {
      if (e.label == label) return e;
    }
    throw DomainError("comparison report has no entry '" + label + "'");
  }
};

inline std::string derived_label(int order) { return "derived_o" + std::to_string(order); }

/// Midpoint displacement for the resolved reference, standard PD and each
/// configured kernel order, run concurrently; errors are measured against
/// the resolved reference.
inline ComparisonReport run_comparison(const ExperimentConfig& config) {
  ComparisonReport report;
  report.probe = 0.5 * config.geometry.bar_length;
  report.t_end = config.t_end();
  const RecordSpec record{{report.probe}, config.solver.record_stride};

  auto fem = std::async(std::launch::async, [&] { return simulate_fem(config, record); });
  auto pd = std::async(std::launch::async, [&] { return simulate_standard_pd(config, record); });
  std::vector<std::future<SimulationResult>> derived;
  for (int order : config.compare.kernel_orders) {
    derived.push_back(std::async(std::launch::async, [&config, &record, order] {
      return simulate_derived(config, derive_kernel(config, order), record);
    }));
  }

  report.entries.push_back({"fem", Method::resolved_fem, 0, fem.get(), {}});
  report.entries.push_back({"standard_pd", Method::standard_pd, 0, pd.get(), {}});
  for (std::size_t i = 0; i < derived.size(); ++i) {
    const int order = config.compare.kernel_orders[i];
    report.entries.push_back(
        {derived_label(order), Method::derived_kernel, order, derived[i].get(), {}});
  }

  const TimeSeries& ref = report.entries.front().result.series;
  for (auto& e : report.entries) {
    const TimeSeries& s = e.result.series;
    e.metrics = compare(ref.time, ref.values[0], s.time, s.values[0]);
  }
  return report;
}

/// All series resampled onto the reference time grid, one column per entry.
inline void write_comparison_csv(std::ostream& os, const ComparisonReport& report) {
  const TimeSeries& ref = report.reference().result.series;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (const auto& e : report.entries) {
    names.push_back(e.label);
    const TimeSeries& s = e.result.series;
    columns.push_back(resample_linear(s.time, s.values[0], ref.time));
  }
  write_csv(os, ref.time, names, columns);
}

inline void write_comparison_report(std::ostream& os, const ComparisonReport& report) {
  os << std::setprecision(17);
  os << "reference = " << report.reference().label << '\n';
  os << "probe = " << report.probe << '\n';
  os << "t_end = " << report.t_end << '\n';
  for (const auto& e : report.entries) {
    const auto& m = e.metrics;
    os << e.label << ".dt = " << e.result.dt << '\n';
    os << e.label << ".samples = " << e.result.series.size() << '\n';
    os << e.label << ".wall_seconds = " << e.result.wall_seconds << '\n';
    os << e.label << ".relative_l2 = " << m.relative_l2 << '\n';
    os << e.label << ".peak_amplitude_error = " << m.peak_amplitude_error << '\n';
    os << e.label << ".arrival_time_error = " << m.arrival_time_error << '\n';
    if (m.test_arrival) os << e.label << ".arrival_time = " << *m.test_arrival << '\n';
  }
}

struct DispersionRow {
  double xi = 0.0;        // cycles per metre
  double xi_l = 0.0;      // xi * cell_length
  double derived_o2 = 0.0;
  double derived_o4 = 0.0;
  double standard_pd = 0.0;
  double bloch = 0.0;     // rad/s, all columns
};

/// omega(xi) = sqrt(-prefactor * symbol(xi)) for the truncated kernels and
/// standard PD, against the exact acoustic branch; xi l = 0.5 k / samples.
inline std::vector<DispersionRow> dispersion_table(const ExperimentConfig& config) {
  const UnitCell cell = config.cell();
  const DiscreteKernel o2 = derive_kernel(config, 2);
  const DiscreteKernel o4 = derive_kernel(config, 4);
  const StandardPdConfig pd = make_standard_pd_config(cell, config.standard_pd.node_spacing,
                                                      config.standard_pd.horizon);
  const double pd_prefactor = pd.e_ave / pd.rho_ave;
  auto frequency = [](double prefactor, double symbol) {
    return std::sqrt(std::max(0.0, -prefactor * symbol));
  };

  std::vector<DispersionRow> rows;
  const int n = config.dispersion.samples;
  for (int k = 1; k <= n; ++k) {
    DispersionRow r;
    r.xi_l = 0.5 * k / n;
    r.xi = r.xi_l / cell.cell_length;
    r.derived_o2 = frequency(o2.prefactor, discrete_symbol(o2, r.xi));
    r.derived_o4 = frequency(o4.prefactor, discrete_symbol(o4, r.xi));
    r.standard_pd = frequency(pd_prefactor, standard_pd_symbol(pd, r.xi));
    r.bloch = bloch_acoustic_omega(cell, r.xi);
    rows.push_back(r);
  }
  return rows;
}

inline void write_dispersion_csv(std::ostream& os, const std::vector<DispersionRow>& rows) {
  std::vector<double> xi;
  std::vector<std::vector<double>> columns(5);
  for (const auto& r : rows) {
    xi.push_back(r.xi);
    columns[0].push_back(r.xi_l);
    columns[1].push_back(r.derived_o2);
    columns[2].push_back(r.derived_o4);
    columns[3].push_back(r.standard_pd);
    columns[4].push_back(r.bloch);
  }
  os << "xi";
  for (const char* name : {"xi_l", "derived_o2", "derived_o4", "standard_pd", "bloch"}) {
    os << ',' << name;
  }
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < xi.size(); ++k) {
    os << xi[k];
    for (const auto& c : columns) os << ',' << c[k];
    os << '\n';
  }
}

/// gnuplot script plotting data columns 2..count+1 of `csv` against the
/// first, titled from the CSV header.
inline void write_gnuplot_script(std::ostream& os, const std::filesystem::path& csv,
                                 std::size_t count,
                                 const std::string& xlabel, const std::string& ylabel) {
  os << "set datafile separator ','\n";
  os << "set key autotitle columnhead\n";
  os << "set xlabel '" << xlabel << "'\n";
  os << "set ylabel '" << ylabel << "'\n";
  os << "plot ";
  for (std::size_t i = 0; i < count; ++i) {
    if (i) os << ", \\\n     ";
    os << "'" << csv.string() << "' using 1:" << i + 2 << " with lines";
  }
  os << '\n';
}

}  // namespace pdkernel
