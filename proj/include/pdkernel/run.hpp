#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pdkernel/errors.hpp"
#include "pdkernel/kernel_io.hpp"
#include "pdkernel/pulse.hpp"
#include "pdkernel/solver_state.hpp"

namespace pdkernel {

template <class M>
concept TimeStepper = requires(const M& model, SolverState& state, const BoundaryPulse& pulse,
                               double x) {
  { model.method() } -> std::same_as<Method>;
  { model.stable_dt() } -> std::convertible_to<double>;
  { model.initial_state(x) } -> std::same_as<SolverState>;
  model.advance(state, pulse);
  { model.probe(state, x) } -> std::convertible_to<double>;
};

struct RecordSpec {
  std::vector<double> probes{0.5};
  std::size_t stride = 1;
};

/// Probe displacements over time; values[p][k] is probe p at time[k].
struct TimeSeries {
  Method method = Method::derived_kernel;
  std::vector<double> probes;
  std::vector<double> time;
  std::vector<std::vector<double>> values;

  std::size_t size() const { return time.size(); }
};

/// Steps `model` from rest to t_end (inclusive, rounded up to a whole step)
/// recording the initial state and every `stride`-th step.
template <TimeStepper Model>
TimeSeries run(const Model& model, const BoundaryPulse& pulse, double dt, double t_end,
               const RecordSpec& record) {
  if (!(t_end >= 0.0)) throw ConfigError("run: t_end must be non-negative");
  if (record.stride == 0) throw ConfigError("run: record stride must be >= 1");
  SolverState state = model.initial_state(dt);

  TimeSeries series;
  series.method = model.method();
  series.probes = record.probes;
  series.values.resize(record.probes.size());
  auto sample = [&] {
    series.time.push_back(state.time);
    for (std::size_t p = 0; p < record.probes.size(); ++p) {
      series.values[p].push_back(model.probe(state, record.probes[p]));
    }
  };
  sample();

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  for (std::size_t n = 1; n <= steps; ++n) {
    model.advance(state, pulse);
    for (double u : state.displacement) {
      if (!std::isfinite(u)) {
        throw NonFiniteStateError(n, std::string("non-finite displacement in ") +
                                         std::string(to_string(model.method())) +
                                         " run at step " + std::to_string(n));
      }
    }
    if (n % record.stride == 0 || n == steps) sample();
  }
  return series;
}

inline std::string probe_column_name(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << "u@" << x;
  return os.str();
}

/// CSV with header `t,<probe columns>` and 17 significant digits.
inline void write_csv(std::ostream& os, const std::vector<double>& time,
                      const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& columns) {
  os << "t";
  for (const auto& n : names) os << ',' << n;
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < time.size(); ++k) {
    os << time[k];
    for (const auto& c : columns) os << ',' << c[k];
    os << '\n';
  }
}

inline void write_csv(std::ostream& os, const TimeSeries& series) {
  std::vector<std::string> names;
  for (double x : series.probes) names.push_back(probe_column_name(x));
  write_csv(os, series.time, names, series.values);
}

inline void save_csv(const std::filesystem::path& path, const TimeSeries& series) {
  write_file_atomically(path, [&](std::ostream& os) { write_csv(os, series); });
}

}  // namespace pdkernel
