#pragma once

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfsync/assort.hpp"
#include "sfsync/config.hpp"
#include "sfsync/dynamics.hpp"
#include "sfsync/experiments.hpp"
#include "sfsync/graph.hpp"
#include "sfsync/io.hpp"
#include "sfsync/perturb.hpp"
#include "sfsync/spectra.hpp"

namespace sfsync::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitModuleError = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline Edge parse_edge_flag(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("edge", "expected 'u,v', got '" + text + "'");
  try {
    return Edge::of(std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1)));
  } catch (const std::exception&) {
    throw CLI::ValidationError("edge", "expected 'u,v', got '" + text + "'");
  }
}

/// "start:stop:step"
inline std::vector<double> parse_grid_flag(const std::string& text) {
  const auto parts = sfsync::detail::split(text, ':');
  if (parts.size() != 3) throw CLI::ValidationError("gamma", "expected start:stop:step, got '" + text + "'");
  try {
    return make_grid(std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]));
  } catch (const Error& e) {
    throw CLI::ValidationError("gamma", e.what());
  } catch (const std::exception&) {
    throw CLI::ValidationError("gamma", "expected numbers in '" + text + "'");
  }
}

inline void emit_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << j.dump(2) << '\n';
  else
    write_json_file(path, j);
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral estimates and synchronization analysis for scale-free networks", "sfsync"};
  app.require_subcommand(1);

  // generate
  int gen_n = 0, gen_m = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Grow a Barabasi-Albert graph");
  generate->add_option("--n", gen_n, "node count")->required();
  generate->add_option("--m", gen_m, "edges per new node")->required();
  generate->add_option("--seed", gen_seed, "RNG seed")->required();
  generate->add_option("--out", gen_out, "edge-list output path")->required();

  // spectrum
  std::string spec_in, spec_out;
  auto* spectrum = app.add_subcommand("spectrum", "Exact Laplacian spectrum as JSON");
  spectrum->add_option("--in", spec_in, "edge-list input")->required()->check(CLI::ExistingFile);
  spectrum->add_option("--out", spec_out, "JSON output path (default stdout)");

  // estimate
  std::string est_in, est_target = "lambda2";
  bool est_json = false;
  auto* estimate = app.add_subcommand("estimate", "Perturbative extreme-eigenvalue estimate");
  estimate->add_option("--in", est_in, "edge-list input")->required()->check(CLI::ExistingFile);
  estimate->add_option("--target", est_target, "lambda2 or lambdaN")
      ->check(CLI::IsMember({"lambda2", "lambdaN"}));
  estimate->add_flag("--json", est_json, "print JSON");

  // assort
  std::string as_in, as_csv, as_json;
  auto* assort = app.add_subcommand("assort", "Local assortativity profile");
  assort->add_option("--in", as_in, "edge-list input")->required()->check(CLI::ExistingFile);
  assort->add_option("--csv", as_csv, "CSV output path");
  assort->add_option("--json", as_json, "JSON output path (default stdout when no CSV)");

  // rewire
  std::string rw_in, rw_out, rw_e1, rw_e2;
  auto* rewire = app.add_subcommand("rewire", "Similar-connection two-edge swap");
  rewire->add_option("--in", rw_in, "edge-list input")->required()->check(CLI::ExistingFile);
  rewire->add_option("--e1", rw_e1, "first edge 'u,v'")->required();
  rewire->add_option("--e2", rw_e2, "second edge 'u,v'")->required();
  rewire->add_option("--out", rw_out, "edge-list output path")->required();

  // simulate
  std::string sim_in, sim_out, sim_system = "rossler";
  double sim_c = 0.03, sim_dt = 0.01, sim_horizon = 200.0, sim_perturbation = 1e-2;
  int sim_stride = 100;
  std::uint64_t sim_seed = 1;
  auto* simulate = app.add_subcommand("simulate", "Integrate coupled oscillators on a graph");
  simulate->add_option("--in", sim_in, "edge-list input")->required()->check(CLI::ExistingFile);
  simulate->add_option("--system", sim_system, "rossler or lorenz")->check(CLI::IsMember({"rossler", "lorenz"}));
  simulate->add_option("--c", sim_c, "coupling strength")->check(CLI::NonNegativeNumber);
  simulate->add_option("--dt", sim_dt, "RK4 step")->check(CLI::PositiveNumber);
  simulate->add_option("--horizon", sim_horizon, "integration time")->check(CLI::PositiveNumber);
  simulate->add_option("--stride", sim_stride, "steps between samples")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "seed of the initial perturbation");
  simulate->add_option("--perturbation", sim_perturbation, "initial perturbation amplitude");
  simulate->add_option("--out", sim_out, "trajectory CSV path")->required();

  // msf
  std::string msf_system = "rossler", msf_grid = "0:6:0.05", msf_out, msf_region;
  double msf_dt = 0.01;
  auto* msf = app.add_subcommand("msf", "Master stability function curve");
  msf->add_option("--system", msf_system, "rossler or lorenz")->check(CLI::IsMember({"rossler", "lorenz"}));
  msf->add_option("--gamma", msf_grid, "grid start:stop:step");
  msf->add_option("--dt", msf_dt, "RK4 step")->check(CLI::PositiveNumber);
  msf->add_option("--out", msf_out, "curve CSV path")->required();
  msf->add_option("--region", msf_region, "also bisect the stability region and write it as JSON");

  // experiment
  std::string exp_config, exp_outdir;
  auto* experiment = app.add_subcommand("experiment", "Run a configured experiment (E1-E4)");
  experiment->add_option("--config", exp_config, "config file")->required()->check(CLI::ExistingFile);
  experiment->add_option("--out-dir", exp_outdir, "override output_dir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (generate->parsed()) {
      write_edge_list(gen_out, generate_ba(gen_n, gen_m, gen_seed));
    } else if (spectrum->parsed()) {
      detail::emit_json(to_json(eigen_full(read_edge_list(spec_in))), spec_out, out);
    } else if (estimate->parsed()) {
      const Graph g = read_edge_list(est_in);
      const auto e = est_target == "lambda2" ? estimate_lambda2(g) : estimate_lambda_max(g);
      if (est_json) {
        out << to_json(e).dump(2) << '\n';
      } else {
        out << to_string(e.target) << " first_order=" << e.first_order;
        if (e.second_order) out << " second_order=" << *e.second_order;
        if (e.simple) out << " simple=" << *e.simple;
        if (e.argmin_node) out << " argmin_node=" << *e.argmin_node;
        out << (e.degenerate ? " degenerate" : "") << '\n';
      }
    } else if (assort->parsed()) {
      const auto profile = local_assortativity(read_edge_list(as_in));
      if (!as_csv.empty()) {
        auto f = open_output(as_csv);
        write_profile_csv(f, profile);
      }
      if (!as_json.empty() || as_csv.empty()) detail::emit_json(to_json(profile), as_json, out);
    } else if (rewire->parsed()) {
      Edge e1, e2;
      try {
        e1 = detail::parse_edge_flag(rw_e1);
        e2 = detail::parse_edge_flag(rw_e2);
      } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
      }
      write_edge_list(rw_out, rewire_similar(read_edge_list(rw_in), e1, e2));
    } else if (simulate->parsed()) {
      const Graph g = read_edge_list(sim_in);
      const OdeSystem sys = make_system(sim_system);
      const auto h = CouplingMatrix::first_component(sys.dim);
      const auto x0 = perturbed_common_state(sys, g.node_count(), sim_perturbation, sim_seed, 500.0, sim_dt);
      const auto rec = simulate_coupled(g, sys, h, sim_c, x0, {sim_dt, sim_horizon, sim_stride});
      {
        auto f = open_output(sim_out);
        write_trajectory_csv(f, rec);
      }
      write_json_file(sim_out + ".json",
                      json{{"system", sys.name},
                           {"params", sys.params},
                           {"coupling", sim_c},
                           {"dt", sim_dt},
                           {"horizon", sim_horizon},
                           {"stride", sim_stride},
                           {"seed", sim_seed},
                           {"perturbation", sim_perturbation},
                           {"nodes", g.node_count()},
                           {"final_sync_error", rec.sync_error.back()},
                           {"toolkit_version", kToolkitVersion}});
    } else if (msf->parsed()) {
      std::vector<double> grid;
      try {
        grid = detail::parse_grid_flag(msf_grid);
      } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
      }
      const OdeSystem sys = make_system(msf_system);
      const auto h = CouplingMatrix::first_component(sys.dim);
      MsfOptions opts;
      opts.dt = msf_dt;
      if (msf_region.empty()) {
        auto f = open_output(msf_out);
        write_msf_csv(f, msf_curve(sys, h, grid, opts));
      } else {
        const auto region = compute_stability_region(sys, h, grid, opts, 1e-3);
        {
          auto f = open_output(msf_out);
          write_msf_csv(f, region.curve);
        }
        write_json_file(msf_region, to_json(region));
      }
    } else if (experiment->parsed()) {
      ExperimentConfig cfg = load_config(exp_config);
      if (!exp_outdir.empty()) cfg.output_dir = exp_outdir;
      for (const auto& path : run_experiment(cfg)) out << path << '\n';
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitModuleError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitModuleError;
  }
  return kExitOk;
}

}  // namespace sfsync::cli
