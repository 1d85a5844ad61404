// pdkernel: derive microstructural peridynamic kernels and run the two-phase
// bar comparison from an INI config.
//
// Exit codes: 0 success, 1 configuration or validation error, 2 numerical
// failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pdkernel.hpp"

namespace fs = std::filesystem;
using namespace pdkernel;

namespace {

void print_kernel_table(std::ostream& os, const DiscreteKernel& k) {
  os << "order " << k.order << ", cell_length " << k.cell_length << " m, prefactor "
     << std::setprecision(6) << k.prefactor << " m^2/s^2\n";
  os << std::fixed << std::setprecision(4);
  os << std::setw(6) << "n";
  for (int n = 0; n <= k.max_offset(); ++n) os << std::setw(12) << n;
  os << '\n' << std::setw(6) << "c_n";
  for (int n = 0; n <= k.max_offset(); ++n) os << std::setw(12) << k.c(n);
  os << '\n';
  os << std::defaultfloat;
  if (k.truncation_tol > 0.0) {
    os << "|c_n| < " << k.truncation_tol << " for |n| > " << k.max_offset() << '\n';
  }
}

void write_plot(const std::string& plot, const fs::path& csv, std::size_t columns,
                const std::string& xlabel, const std::string& ylabel) {
  if (plot.empty()) return;
  write_file_atomically(plot, [&](std::ostream& os) {
    write_gnuplot_script(os, csv, columns, xlabel, ylabel);
  });
}

std::vector<double> parse_targets(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : detail::split_list(text)) {
    out.push_back(detail::parse_double("--target", item));
  }
  return out;
}

void warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Microstructure-derived peridynamic kernels for a periodic two-phase bar"};
  app.require_subcommand(1);

  std::string config_path, out_path, kernel_path, report_path, plot_path, method_name, targets;
  std::optional<int> order;

  auto* derive = app.add_subcommand("derive", "Derive and truncate the discrete kernel c_n");
  derive->add_option("--config", config_path, "INI config file")->required();
  derive->add_option("--order", order, "Ansatz order (2, 4 or 6); default kernel.order");
  derive->add_option("--out", out_path, "Kernel file to write")->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "Run one solver and write probe CSV");
  simulate_cmd->add_option("--config", config_path, "INI config file")->required();
  simulate_cmd->add_option("--method", method_name, "derived, standard-pd or fem")->required();
  simulate_cmd->add_option("--kernel", kernel_path, "Kernel file for --method derived");
  simulate_cmd->add_option("--out", out_path, "CSV file to write")->required();

  auto* compare_cmd =
      app.add_subcommand("compare", "Run all methods and compare midpoint displacement");
  compare_cmd->add_option("--config", config_path, "INI config file")->required();
  compare_cmd->add_option("--out", out_path, "Aligned midpoint CSV to write")->required();
  compare_cmd->add_option("--report", report_path, "Key-value metrics report to write");
  compare_cmd->add_option("--plot", plot_path, "gnuplot script to write");

  auto* dispersion = app.add_subcommand("dispersion", "Tabulate omega(xi) for every model");
  dispersion->add_option("--config", config_path, "INI config file")->required();
  dispersion->add_option("--out", out_path, "CSV file to write")->required();
  dispersion->add_option("--plot", plot_path, "gnuplot script to write");

  auto* sweep = app.add_subcommand("sweep-alpha", "Recover alpha from target c_1..c_k");
  sweep->add_option("--config", config_path, "INI config file")->required();
  sweep->add_option("--target", targets, "Comma-separated c_1,c_2,...")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const ExperimentConfig config = load_config(config_path);

    if (*derive) {
      const DiscreteKernel kernel = [&] {
        if (!order) return derive_kernel(config);
        make_ansatz(*order);
        return derive_kernel(config, *order);
      }();
      warn(kernel.warnings);
      save_kernel(out_path, kernel);
      print_kernel_table(std::cout, kernel);
    } else if (*simulate_cmd) {
      const Method method = parse_method(method_name);
      std::optional<DiscreteKernel> kernel;
      if (!kernel_path.empty()) {
        if (method != Method::derived_kernel) {
          throw ConfigError("--kernel only applies to --method derived");
        }
        kernel = load_kernel(kernel_path);
      }
      const SimulationResult result = simulate(config, method, kernel);
      save_csv(out_path, result.series);
      std::cout << to_string(method) << ": " << result.series.size() << " samples, dt "
                << result.dt << " s, " << result.wall_seconds << " s wall\n";
    } else if (*compare_cmd) {
      const ComparisonReport report = run_comparison(config);
      write_file_atomically(out_path,
                            [&](std::ostream& os) { write_comparison_csv(os, report); });
      if (!report_path.empty()) {
        write_file_atomically(report_path,
                              [&](std::ostream& os) { write_comparison_report(os, report); });
      }
      write_plot(plot_path, out_path, report.entries.size(), "t (s)", "u(L/2) (m)");
      for (const auto& e : report.entries) {
        std::cout << std::left << std::setw(12) << e.label << " relative_l2 "
                  << std::setprecision(6) << e.metrics.relative_l2 << '\n';
      }
    } else if (*dispersion) {
      const auto rows = dispersion_table(config);
      write_file_atomically(out_path, [&](std::ostream& os) { write_dispersion_csv(os, rows); });
      write_plot(plot_path, out_path, 5, "xi (1/m)", "omega (rad/s)");
      std::cout << rows.size() << " rows written to " << out_path << '\n';
    } else if (*sweep) {
      const AlphaSweepResult r = sweep_alpha(config.cell(), parse_targets(targets));
      std::cout << std::setprecision(10);
      std::cout << "alpha = " << r.alpha << '\n';
      std::cout << "beta = " << r.beta << '\n';
      std::cout << "residual = " << r.residual << '\n';
      std::cout << "max_relative_error = " << r.max_relative_error << '\n';
      for (std::size_t n = 0; n < r.coefficients.size(); ++n) {
        std::cout << "c_" << n + 1 << " = " << r.coefficients[n] << '\n';
      }
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
