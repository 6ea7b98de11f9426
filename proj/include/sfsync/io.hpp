#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>

#include <json.hpp>

#include "sfsync/assort.hpp"
#include "sfsync/dynamics.hpp"
#include "sfsync/error.hpp"
#include "sfsync/perturb.hpp"
#include "sfsync/spectra.hpp"

namespace sfsync {

inline constexpr const char* kToolkitVersion = "0.1.0";

using json = nlohmann::json;

inline json to_json(const SpectralSummary& s) {
  return json{{"eigenvalues", s.eigenvalues},
              {"lambda2", s.fiedler_value},
              {"lambdaN", s.max_value},
              {"fiedler", s.fiedler_vector},
              {"fiedler_multiplicity", s.fiedler_multiplicity}};
}

inline json to_json(const EigenEstimate& e) {
  auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  return json{{"target", to_string(e.target)},
              {"first_order", e.first_order},
              {"second_order", opt(e.second_order)},
              {"simple", opt(e.simple)},
              {"argmin_node", opt(e.argmin_node)},
              {"degenerate", e.degenerate},
              {"k_min", e.k_min},
              {"k_max", e.k_max}};
}

inline json to_json(const AssortativityProfile& p) {
  return json{{"r", p.r},           {"degree", p.degree}, {"theta", p.theta},
              {"theta_bar", p.theta_bar}, {"rho", p.rho}, {"theta_sum", p.theta_sum},
              {"degenerate", p.degenerate}};
}

inline json to_json(const StabilityRegion& r) {
  json curve = json::array();
  for (const auto& s : r.curve)
    curve.push_back({{"gamma", s.gamma}, {"omega_max", s.omega_max}, {"converged", s.converged}});
  return json{{"alpha1", r.alpha1}, {"alpha2", r.alpha2}, {"curve", curve}};
}

inline json to_json(const SyncVerdict& v) {
  auto finite_or_null = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  return json{{"synchronizable", v.synchronizable},
              {"c_lambda2", v.lower},
              {"c_lambdaN", v.upper},
              {"lower_ok", v.lower_ok},
              {"upper_ok", v.upper_ok},
              {"eigenratio", finite_or_null(v.eigenratio)},
              {"ratio_bound", finite_or_null(v.ratio_bound)},
              {"ratio_ok", v.ratio_ok}};
}

/// node,degree,theta,theta_bar,rho
inline void write_profile_csv(std::ostream& out, const AssortativityProfile& p) {
  out << "node,degree,theta,theta_bar,rho\n" << std::setprecision(17);
  for (std::size_t i = 0; i < p.theta.size(); ++i)
    out << i << ',' << p.degree[i] << ',' << p.theta[i] << ',' << p.theta_bar[i] << ','
        << p.rho[i] << '\n';
}

/// t,node,x1,...,xn -- one row per node per recorded instant.
inline void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec) {
  out << "t,node";
  for (int k = 0; k < rec.dim; ++k) out << ",x" << (k + 1);
  out << '\n' << std::setprecision(10);
  for (std::size_t s = 0; s < rec.times.size(); ++s)
    for (int i = 0; i < rec.nodes; ++i) {
      out << rec.times[s] << ',' << i;
      for (int k = 0; k < rec.dim; ++k) out << ',' << rec.states[s][static_cast<std::size_t>(i) * rec.dim + k];
      out << '\n';
    }
}

inline void write_sync_error_csv(std::ostream& out, const TrajectoryRecord& rec) {
  out << "t,sync_error\n" << std::setprecision(10);
  for (std::size_t s = 0; s < rec.times.size(); ++s) out << rec.times[s] << ',' << rec.sync_error[s] << '\n';
}

/// gamma,omega_max,converged_flag
inline void write_msf_csv(std::ostream& out, const std::vector<MsfSample>& curve) {
  out << "gamma,omega_max,converged_flag\n" << std::setprecision(10);
  for (const auto& s : curve) out << s.gamma << ',' << s.omega_max << ',' << (s.converged ? 1 : 0) << '\n';
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  return out;
}

inline void write_json_file(const std::string& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

}  // namespace sfsync
