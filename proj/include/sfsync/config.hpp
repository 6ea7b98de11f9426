#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sfsync/error.hpp"

namespace sfsync {

/// Everything an experiment run depends on. Text form is flat "key = value" lines;
/// '#' starts a comment. Lists are comma separated; seed lists also accept "a-b" ranges.
struct ExperimentConfig {
  std::string experiment = "E1";
  std::vector<int> sizes;
  int m = 10;
  std::vector<std::uint64_t> seeds;
  std::string output_dir = ".";
  std::string system = "rossler";
  std::map<std::string, double> system_params;
  double coupling = 0.03;
  int rewire_steps = 30;
  double dt = 0.01;
  double horizon = 1500.0;
  double perturbation = 1e-2;
  double gamma_start = 0.0;
  double gamma_stop = 6.0;
  double gamma_step = 0.05;
  double region_tol = 1e-4;
  double desync_margin = 0.2;  // target c*lambda2 <= (1 - margin) * alpha1 for the rewired graph
  std::optional<double> alpha1;  // skip the MSF computation when both bounds are given
  std::optional<double> alpha2;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Defaults for each experiment id.
inline ExperimentConfig default_config(const std::string& id) {
  ExperimentConfig cfg;
  cfg.experiment = id;
  auto range = [](std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  };
  if (id == "E1") {
    cfg.sizes = {200, 300, 500, 1000};
    cfg.seeds = range(1, 100);
  } else if (id == "E2") {
    cfg.sizes = {200, 300, 400, 500, 600, 700, 800, 900, 1000};
    cfg.seeds = range(1, 50);
  } else if (id == "E3") {
    cfg.sizes = {200, 300, 500, 1000};
    cfg.seeds = {1};
  } else if (id == "E4") {
    cfg.sizes = {100};
    cfg.seeds = {1};
    cfg.rewire_steps = 200;
    cfg.system_params = {{"a", 0.2}, {"b", 0.2}, {"d", 6.0}};
  } else {
    throw Error(ErrorCode::InvalidParameter, "unknown experiment '" + id + "'");
  }
  return cfg;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "config key '" + key + "': not a number: '" + value + "'");
  }
}

inline long long parse_integer(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "config key '" + key + "': not an integer: '" + value + "'");
  }
}

inline std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
  using detail::parse_double;
  using detail::parse_integer;
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::Parse, "config line " + std::to_string(lineno) + ": expected key = value");
    kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
  }
  if (!kv.count("experiment")) throw Error(ErrorCode::Parse, "config lacks 'experiment'");
  ExperimentConfig cfg = default_config(kv.at("experiment"));

  for (const auto& [key, value] : kv) {
    if (key == "experiment") continue;
    if (key == "sizes") {
      cfg.sizes.clear();
      for (const auto& s : detail::split(value, ',')) cfg.sizes.push_back(static_cast<int>(parse_integer(key, s)));
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& s : detail::split(value, ',')) {
        const auto dash = s.find('-');
        if (dash != std::string::npos && dash > 0) {
          const auto lo = parse_integer(key, detail::trim(s.substr(0, dash)));
          const auto hi = parse_integer(key, detail::trim(s.substr(dash + 1)));
          if (lo < 0 || hi < lo) throw Error(ErrorCode::Parse, "bad seed range '" + s + "'");
          for (auto v = lo; v <= hi; ++v) cfg.seeds.push_back(static_cast<std::uint64_t>(v));
        } else {
          const auto v = parse_integer(key, s);
          if (v < 0) throw Error(ErrorCode::Parse, "negative seed '" + s + "'");
          cfg.seeds.push_back(static_cast<std::uint64_t>(v));
        }
      }
    } else if (key == "m") {
      cfg.m = static_cast<int>(parse_integer(key, value));
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "system") {
      cfg.system = value;
    } else if (key.rfind("param.", 0) == 0) {
      cfg.system_params[key.substr(6)] = parse_double(key, value);
    } else if (key == "coupling") {
      cfg.coupling = parse_double(key, value);
    } else if (key == "rewire_steps") {
      cfg.rewire_steps = static_cast<int>(parse_integer(key, value));
    } else if (key == "dt") {
      cfg.dt = parse_double(key, value);
    } else if (key == "horizon") {
      cfg.horizon = parse_double(key, value);
    } else if (key == "perturbation") {
      cfg.perturbation = parse_double(key, value);
    } else if (key == "gamma_start") {
      cfg.gamma_start = parse_double(key, value);
    } else if (key == "gamma_stop") {
      cfg.gamma_stop = parse_double(key, value);
    } else if (key == "gamma_step") {
      cfg.gamma_step = parse_double(key, value);
    } else if (key == "region_tol") {
      cfg.region_tol = parse_double(key, value);
    } else if (key == "desync_margin") {
      cfg.desync_margin = parse_double(key, value);
    } else if (key == "alpha1") {
      cfg.alpha1 = parse_double(key, value);
    } else if (key == "alpha2") {
      cfg.alpha2 = parse_double(key, value);
    } else {
      throw Error(ErrorCode::Parse, "unknown config key '" + key + "'");
    }
  }
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path);
  return parse_config(in);
}

inline std::string to_text(const ExperimentConfig& cfg) {
  using detail::format_double;
  std::ostringstream out;
  auto join = [](const auto& values) {
    std::ostringstream s;
    for (std::size_t i = 0; i < values.size(); ++i) s << (i ? "," : "") << values[i];
    return s.str();
  };
  out << "experiment = " << cfg.experiment << '\n'
      << "sizes = " << join(cfg.sizes) << '\n'
      << "m = " << cfg.m << '\n'
      << "seeds = " << join(cfg.seeds) << '\n'
      << "output_dir = " << cfg.output_dir << '\n'
      << "system = " << cfg.system << '\n';
  for (const auto& [k, v] : cfg.system_params) out << "param." << k << " = " << format_double(v) << '\n';
  out << "coupling = " << format_double(cfg.coupling) << '\n'
      << "rewire_steps = " << cfg.rewire_steps << '\n'
      << "dt = " << format_double(cfg.dt) << '\n'
      << "horizon = " << format_double(cfg.horizon) << '\n'
      << "perturbation = " << format_double(cfg.perturbation) << '\n'
      << "gamma_start = " << format_double(cfg.gamma_start) << '\n'
      << "gamma_stop = " << format_double(cfg.gamma_stop) << '\n'
      << "gamma_step = " << format_double(cfg.gamma_step) << '\n'
      << "region_tol = " << format_double(cfg.region_tol) << '\n'
      << "desync_margin = " << format_double(cfg.desync_margin) << '\n';
  if (cfg.alpha1) out << "alpha1 = " << format_double(*cfg.alpha1) << '\n';
  if (cfg.alpha2) out << "alpha2 = " << format_double(*cfg.alpha2) << '\n';
  return out.str();
}

}  // namespace sfsync
