#pragma once

// Plain-text kernel file:
//
//   cell_length <value>
//   order <value>
//   prefactor <value>
//   truncation_tol <value>      (optional)
//   <n>, <c_n>                  one line per n = -m..m
//
// Doubles are written with 17 significant digits so reading restores the
// exact bits.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "pdkernel/discrete_kernel.hpp"
#include "pdkernel/errors.hpp"

namespace pdkernel {

inline void write_kernel(std::ostream& os, const DiscreteKernel& kernel) {
  os << std::setprecision(17);
  os << "cell_length " << kernel.cell_length << '\n';
  os << "order " << kernel.order << '\n';
  os << "prefactor " << kernel.prefactor << '\n';
  os << "truncation_tol " << kernel.truncation_tol << '\n';
  for (const auto& [n, c] : kernel.coefficients()) os << n << ", " << c << '\n';
}

inline DiscreteKernel read_kernel(std::istream& is) {
  DiscreteKernel kernel;
  bool have_length = false, have_order = false, have_prefactor = false;
  std::map<int, double> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (line.find(',') != std::string::npos) {
      int n = 0;
      char comma = 0;
      double c = 0.0;
      if (!(ls >> n >> comma >> c) || comma != ',') {
        throw ConfigError("kernel file line " + std::to_string(line_no) + ": bad coefficient");
      }
      if (!entries.emplace(n, c).second) {
        throw ConfigError("kernel file: duplicate n = " + std::to_string(n));
      }
      continue;
    }
    std::string key;
    double value = 0.0;
    if (!(ls >> key >> value)) {
      throw ConfigError("kernel file line " + std::to_string(line_no) + ": bad header");
    }
    if (key == "cell_length") {
      kernel.cell_length = value;
      have_length = true;
    } else if (key == "order") {
      kernel.order = static_cast<int>(value);
      have_order = true;
    } else if (key == "prefactor") {
      kernel.prefactor = value;
      have_prefactor = true;
    } else if (key == "truncation_tol") {
      kernel.truncation_tol = value;
    } else {
      throw ConfigError("kernel file: unknown header '" + key + "'");
    }
  }
  if (!have_length || !have_order || !have_prefactor) {
    throw ConfigError("kernel file: missing cell_length, order or prefactor header");
  }
  if (!(kernel.cell_length > 0.0) || !(kernel.prefactor > 0.0)) {
    throw ConfigError("kernel file: cell_length and prefactor must be positive");
  }
  if (entries.empty()) throw ConfigError("kernel file: no coefficients");
  const int m = entries.rbegin()->first;
  if (entries.begin()->first != -m || static_cast<int>(entries.size()) != 2 * m + 1) {
    throw ConfigError("kernel file: coefficients must cover n = -m..m contiguously");
  }
  for (int n = 1; n <= m; ++n) {
    if (entries.at(n) != entries.at(-n)) {
      throw ConfigError("kernel file: c_" + std::to_string(n) + " != c_-" + std::to_string(n));
    }
  }
  for (int n = 0; n <= m; ++n) kernel.half.push_back(entries.at(n));
  return kernel;
}

/// Writes to a sibling temporary and renames it into place.
template <class Writer>
void write_file_atomically(const std::filesystem::path& path, Writer&& writer) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot open " + tmp.string() + " for writing");
    writer(os);
    os.flush();
    if (!os) throw ConfigError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void save_kernel(const std::filesystem::path& path, const DiscreteKernel& kernel) {
  write_file_atomically(path, [&](std::ostream& os) { write_kernel(os, kernel); });
}

inline DiscreteKernel load_kernel(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open kernel file " + path.string());
  return read_kernel(is);
}

}  // namespace pdkernel
