#pragma once

// Experiment configuration: INI text with sections, strictly validated.
// Every key is optional and defaults to the reference two-phase bar. Unknown
// sections or keys are rejected. See README.md for the schema.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pdkernel/errors.hpp"
#include "pdkernel/fem.hpp"
#include "pdkernel/microstructure.hpp"
#include "pdkernel/pulse.hpp"
#include "pdkernel/solver_state.hpp"

namespace pdkernel {

struct ExperimentConfig {
  struct Geometry {
    double bar_length = 1.0;
    double cell_length = 0.02;
    double alpha = 0.25;
    double beta = 0.5;
    bool operator==(const Geometry&) const = default;
  } geometry;

  struct Materials {
    double e_stiff = 200e9;
    double e_compliant = 5e9;
    double rho_stiff = 8000.0;
    double rho_compliant = 8000.0;
    double area = 1e-4;
    bool operator==(const Materials&) const = default;
  } materials;

  struct Pulse {
    double u0 = -5e-5;
    double duration = 1.57e-4;
    std::optional<double> a0;  // empty: peak-normalized, (T/2)^-12
    bool operator==(const Pulse&) const = default;
  } pulse;

  struct Kernel {
    int order = 4;
    int n_max = 32;
    int num_quad = 1024;
    double truncation_tol = 1e-4;
    bool operator==(const Kernel&) const = default;
  } kernel;

  struct Solver {
    double dt_safety = 0.8;
    std::optional<double> dt_max;  // empty: duration / 200
    std::optional<double> t_end;   // empty: 4 * duration
    std::vector<double> probes{0.5};
    std::size_t record_stride = 1;
    GhostRule ghost_rule = GhostRule::odd_reflection;
    bool operator==(const Solver&) const = default;
  } solver;

  struct StandardPd {
    double node_spacing = 0.005;
    double horizon = 0.02;
    bool operator==(const StandardPd&) const = default;
  } standard_pd;

  FemConfig fem;

  struct Compare {
    std::vector<int> kernel_orders{2, 4};
    bool operator==(const Compare&) const = default;
  } compare;

  struct Dispersion {
    int samples = 100;
    bool operator==(const Dispersion&) const = default;
  } dispersion;

  bool operator==(const ExperimentConfig&) const = default;

  UnitCell cell() const {
    return UnitCell{geometry.alpha,       geometry.beta,         geometry.cell_length,
                    materials.e_stiff,    materials.e_compliant, materials.rho_stiff,
                    materials.rho_compliant};
  }
  Bar bar() const { return make_bar(geometry.bar_length, cell()); }
  BoundaryPulse boundary_pulse() const {
    return pulse.a0 ? BoundaryPulse{pulse.u0, pulse.duration, *pulse.a0}
                    : make_peak_normalized_pulse(pulse.u0, pulse.duration);
  }
  double t_end() const { return solver.t_end.value_or(4.0 * pulse.duration); }
  double dt_max() const { return solver.dt_max.value_or(pulse.duration / 200.0); }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

inline long parse_integer(const std::string& key, const std::string& text) {
  long v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + text + "'");
  }
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + text + "'");
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("config: empty list entry in '" + text + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace detail

inline void validate(const ExperimentConfig& c) {
  Bar bar;
  try {
    bar = c.bar();  // validates the cell and the integer cell count
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(c.materials.area > 0.0)) throw ConfigError("config: materials.area must be positive");
  if (!(c.pulse.duration > 0.0)) throw ConfigError("config: pulse.duration must be positive");
  if (c.kernel.order != 2 && c.kernel.order != 4 && c.kernel.order != 6) {
    throw ConfigError("config: kernel.order must be 2, 4 or 6");
  }
  if (c.kernel.n_max < 2) throw ConfigError("config: kernel.n_max must be >= 2");
  if (c.kernel.num_quad < 8 * c.kernel.n_max) {
    throw ConfigError("config: kernel.num_quad must be >= 8 * kernel.n_max");
  }
  if (!(c.kernel.truncation_tol >= 0.0)) {
    throw ConfigError("config: kernel.truncation_tol must be >= 0");
  }
  if (!(c.solver.dt_safety > 0.0 && c.solver.dt_safety <= 1.0)) {
    throw ConfigError("config: solver.dt_safety must lie in (0, 1]");
  }
  if (!(c.dt_max() > 0.0)) throw ConfigError("config: solver.dt_max must be positive");
  if (!(c.t_end() >= 0.0)) throw ConfigError("config: solver.t_end must be >= 0");
  if (c.solver.record_stride < 1) throw ConfigError("config: solver.record_stride must be >= 1");
  for (double x : c.solver.probes) {
    if (!(x >= 0.0 && x <= bar.length)) {
      throw ConfigError("config: probe " + detail::format_double(x) + " outside the bar");
    }
  }
  for (int order : c.compare.kernel_orders) {
    if (order != 2 && order != 4 && order != 6) {
      throw ConfigError("config: compare.kernel_orders entries must be 2, 4 or 6");
    }
  }
  if (c.dispersion.samples < 2) throw ConfigError("config: dispersion.samples must be >= 2");
  validate(c.fem);
}

namespace detail {

// Binds every key to a parser and a printer so parsing and serialization
// cannot drift apart.
struct Field {
  std::function<void(const std::string&, const std::string&)> parse;
  std::function<std::optional<std::string>()> print;
};

inline Field number(double& v) {
  return {[&v](const std::string& k, const std::string& s) { v = parse_double(k, s); },
          [&v]() -> std::optional<std::string> { return format_double(v); }};
}

inline Field optional_number(std::optional<double>& v, const char* unset_word) {
  return {[&v, unset_word](const std::string& k, const std::string& s) {
            if (s == unset_word) {
              v.reset();
            } else {
              v = parse_double(k, s);
            }
          },
          [&v]() -> std::optional<std::string> {
            if (!v) return std::nullopt;
            return format_double(*v);
          }};
}

template <class Int>
Field integer(Int& v) {
  return {[&v](const std::string& k, const std::string& s) {
            const long x = parse_integer(k, s);
            if (x < 0) throw ConfigError("config: '" + k + "' must be non-negative");
            v = static_cast<Int>(x);
          },
          [&v]() -> std::optional<std::string> { return std::to_string(v); }};
}

inline Field boolean(bool& v) {
  return {[&v](const std::string& k, const std::string& s) { v = parse_bool(k, s); },
          [&v]() -> std::optional<std::string> { return v ? "true" : "false"; }};
}

inline std::map<std::string, std::map<std::string, Field>> schema(ExperimentConfig& c) {
  using Section = std::map<std::string, Field>;
  Section geometry{{"bar_length", number(c.geometry.bar_length)},
                   {"cell_length", number(c.geometry.cell_length)},
                   {"alpha", number(c.geometry.alpha)},
                   {"beta", number(c.geometry.beta)}};
  Section materials{{"e_stiff", number(c.materials.e_stiff)},
                    {"e_compliant", number(c.materials.e_compliant)},
                    {"rho_stiff", number(c.materials.rho_stiff)},
                    {"rho_compliant", number(c.materials.rho_compliant)},
                    {"area", number(c.materials.area)}};
  Section pulse{{"u0", number(c.pulse.u0)},
                {"duration", number(c.pulse.duration)},
                {"a0", optional_number(c.pulse.a0, "peak")}};
  Section kernel{{"order", integer(c.kernel.order)},
                 {"n_max", integer(c.kernel.n_max)},
                 {"num_quad", integer(c.kernel.num_quad)},
                 {"truncation_tol", number(c.kernel.truncation_tol)}};
  auto& probes = c.solver.probes;
  auto& rule = c.solver.ghost_rule;
  Section solver{
      {"dt_safety", number(c.solver.dt_safety)},
      {"dt_max", optional_number(c.solver.dt_max, "auto")},
      {"t_end", optional_number(c.solver.t_end, "auto")},
      {"probes",
       {[&probes](const std::string& k, const std::string& s) {
          probes.clear();
          for (const auto& item : split_list(s)) probes.push_back(parse_double(k, item));
        },
        [&probes]() -> std::optional<std::string> {
          std::string out;
          for (std::size_t i = 0; i < probes.size(); ++i) {
            out += (i ? ", " : "") + format_double(probes[i]);
          }
          return out;
        }}},
      {"record_stride", integer(c.solver.record_stride)},
      {"ghost_rule",
       {[&rule](const std::string&, const std::string& s) { rule = parse_ghost_rule(s); },
        [&rule]() -> std::optional<std::string> { return std::string(to_string(rule)); }}}};
  Section standard_pd{{"node_spacing", number(c.standard_pd.node_spacing)},
                      {"horizon", number(c.standard_pd.horizon)}};
  Section fem{{"elements_per_stiff_segment", integer(c.fem.elements_per_stiff_segment)},
              {"elements_per_compliant_segment", integer(c.fem.elements_per_compliant_segment)},
              {"mass_lumping", boolean(c.fem.mass_lumping)}};
  auto& orders = c.compare.kernel_orders;
  Section compare{
      {"kernel_orders",
       {[&orders](const std::string& k, const std::string& s) {
          orders.clear();
          for (const auto& item : split_list(s)) {
            orders.push_back(static_cast<int>(parse_integer(k, item)));
          }
        },
        [&orders]() -> std::optional<std::string> {
          std::string out;
          for (std::size_t i = 0; i < orders.size(); ++i) {
            out += (i ? ", " : "") + std::to_string(orders[i]);
          }
          return out;
        }}}};
  Section dispersion{{"samples", integer(c.dispersion.samples)}};
  return {{"geometry", geometry}, {"materials", materials},     {"pulse", pulse},
          {"kernel", kernel},     {"solver", solver},           {"standard_pd", standard_pd},
          {"fem", fem},           {"compare", compare},         {"dispersion", dispersion}};
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& is) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  auto fields = detail::schema(c);
  for (const auto& [section_name, section] : tree) {
    if (section.empty() && !section.data().empty()) {
      throw ConfigError("config: key '" + section_name + "' outside any section");
    }
    const auto s = fields.find(section_name);
    if (s == fields.end()) throw ConfigError("config: unknown section [" + section_name + "]");
    for (const auto& [key, node] : section) {
      const auto f = s->second.find(key);
      if (f == s->second.end()) {
        throw ConfigError("config: unknown key '" + key + "' in [" + section_name + "]");
      }
      f->second.parse(section_name + "." + key, node.data());
    }
  }
  validate(c);
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  return parse_config(is);
}

inline std::string serialize_config(const ExperimentConfig& config) {
  ExperimentConfig copy = config;
  const auto fields = detail::schema(copy);
  static constexpr std::string_view order[] = {"geometry", "materials",   "pulse",
                                               "kernel",   "solver",      "standard_pd",
                                               "fem",      "compare",     "dispersion"};
  std::ostringstream os;
  for (const auto name : order) {
    os << '[' << name << "]\n";
    for (const auto& [key, field] : fields.at(std::string(name))) {
      if (const auto value = field.print()) os << key << " = " << *value << '\n';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace pdkernel
