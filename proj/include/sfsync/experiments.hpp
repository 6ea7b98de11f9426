#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sfsync/assort.hpp"
#include "sfsync/config.hpp"
#include "sfsync/dynamics.hpp"
#include "sfsync/graph.hpp"
#include "sfsync/io.hpp"
#include "sfsync/perturb.hpp"
#include "sfsync/rewiring.hpp"
#include "sfsync/spectra.hpp"
#include "sfsync/stats.hpp"

namespace sfsync {

namespace detail {

/// Re-throws module errors with the run context attached.
template <typename F>
auto with_context(const std::string& context, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), context + ": " + e.what());
  }
}

inline std::string run_context(int n, std::uint64_t seed) {
  return "N=" + std::to_string(n) + " seed=" + std::to_string(seed);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// E1: link-removal insensitivity
// ---------------------------------------------------------------------------

struct RemovalRow {
  int size = 0;
  std::uint64_t seed = 0;
  double lambda2 = 0.0;
  double lambda2_removed = 0.0;
  double ratio = 0.0;  // (lambda2 - lambda2_removed) / lambda2
  Edge removed;
};

struct RemovalSummary {
  int size = 0;
  std::size_t count = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

struct E1Result {
  std::vector<RemovalRow> rows;
  std::vector<RemovalSummary> summaries;
};

inline RemovalRow link_removal_row(int n, int m, std::uint64_t seed) {
  return detail::with_context(detail::run_context(n, seed), [&] {
    const Graph g = generate_ba(n, m, seed);
    const LinkRemoval cut = remove_min_degree_link(g);
    RemovalRow row;
    row.size = n;
    row.seed = seed;
    row.lambda2 = laplacian_eigenvalues(g)[1];
    row.lambda2_removed = laplacian_eigenvalues(cut.graph)[1];
    row.ratio = (row.lambda2 - row.lambda2_removed) / row.lambda2;
    row.removed = cut.removed;
    return row;
  });
}

inline E1Result run_e1(const ExperimentConfig& cfg) {
  E1Result out;
  for (int n : cfg.sizes) {
    std::vector<double> ratios;
    for (auto seed : cfg.seeds) {
      out.rows.push_back(link_removal_row(n, cfg.m, seed));
      ratios.push_back(out.rows.back().ratio);
    }
    if (ratios.empty()) continue;
    out.summaries.push_back({n, ratios.size(), stats::quantile(ratios, 0.0), stats::quantile(ratios, 0.25),
                             stats::quantile(ratios, 0.5), stats::quantile(ratios, 0.75),
                             stats::quantile(ratios, 1.0)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// E2: estimation accuracy of the extreme eigenvalues
// ---------------------------------------------------------------------------

struct EstimateRow {
  int size = 0;
  std::uint64_t seed = 0;
  int k_min = 0;
  int k_max = 0;
  double lambda2 = 0.0;
  double lambda_max = 0.0;
  double lambda_max_simple = 0.0;              // k_max + 1
  std::optional<double> lambda_max_second;     // absent when the hub degree is shared
  double lambda2_estimate = 0.0;               // minimised link-removal estimate
  int argmin_node = -1;
  double lambda_max_rel_error = 0.0;           // |k_max + 1 - lambdaN| / lambdaN
  bool estimate_closer_than_kmin = false;      // |est - l2| < |k_min - l2|
};

struct E2Result {
  std::vector<EstimateRow> rows;
};

inline EstimateRow estimate_row(int n, int m, std::uint64_t seed) {
  return detail::with_context(detail::run_context(n, seed), [&] {
    const Graph g = generate_ba(n, m, seed);
    const auto eig = laplacian_eigenvalues(g);
    const auto top = estimate_lambda_max(g);
    const auto low = estimate_lambda2(g);
    EstimateRow row;
    row.size = n;
    row.seed = seed;
    row.k_min = low.k_min;
    row.k_max = top.k_max;
    row.lambda2 = eig[1];
    row.lambda_max = eig.back();
    row.lambda_max_simple = *top.simple;
    row.lambda_max_second = top.second_order;
    row.lambda2_estimate = *low.second_order;
    row.argmin_node = *low.argmin_node;
    row.lambda_max_rel_error = std::abs(row.lambda_max_simple - row.lambda_max) / row.lambda_max;
    row.estimate_closer_than_kmin =
        std::abs(row.lambda2_estimate - row.lambda2) < std::abs(row.k_min - row.lambda2);
    return row;
  });
}

inline E2Result run_e2(const ExperimentConfig& cfg) {
  E2Result out;
  for (int n : cfg.sizes)
    for (auto seed : cfg.seeds) out.rows.push_back(estimate_row(n, cfg.m, seed));
  return out;
}

// ---------------------------------------------------------------------------
// E3: local assortativity versus algebraic connectivity under similar rewiring
// ---------------------------------------------------------------------------

struct AssortStep {
  int size = 0;
  int step = 0;
  int node = -1;  // current argmin node of the lambda2 estimate
  double rho = 0.0;
  double lambda2 = 0.0;
  double estimate = 0.0;
};

struct AssortSeries {
  int size = 0;
  std::uint64_t seed = 0;
  std::vector<AssortStep> steps;
  double spearman = 0.0;  // rank correlation of (rho, lambda2)
  bool saturated = false; // stopped early: the argmin node had no heavier neighbour left
};

struct E3Result {
  std::vector<AssortSeries> series;
};

/// Up to `steps` similar-connection swaps at the current argmin node; a snapshot is taken
/// before the first swap and after each one.
inline AssortSeries assortativity_series(int n, int m, std::uint64_t seed, int steps) {
  return detail::with_context(detail::run_context(n, seed), [&] {
    AssortSeries series;
    series.size = n;
    series.seed = seed;
    Graph g = generate_ba(n, m, seed);
    std::mt19937_64 rng(seed);
    for (int step = 0;; ++step) {
      const auto est = estimate_lambda2(g);
      const int node = *est.argmin_node;
      const auto profile = local_assortativity(g);
      series.steps.push_back({n, step, node, profile.rho[node], laplacian_eigenvalues(g)[1], *est.second_order});
      if (step == steps) break;
      auto next = similar_rewire_step(g, node, rng);
      if (!next) {
        series.saturated = true;
        break;
      }
      g = std::move(next->graph);
    }
    std::vector<double> rho, l2;
    for (const auto& s : series.steps) {
      rho.push_back(s.rho);
      l2.push_back(s.lambda2);
    }
    series.spearman = rho.size() >= 2 ? stats::spearman(rho, l2) : 0.0;
    return series;
  });
}

inline E3Result run_e3(const ExperimentConfig& cfg) {
  E3Result out;
  for (int n : cfg.sizes)
    for (auto seed : cfg.seeds) out.series.push_back(assortativity_series(n, cfg.m, seed, cfg.rewire_steps));
  return out;
}

// ---------------------------------------------------------------------------
// E4: synchronization control by rewiring
// ---------------------------------------------------------------------------

struct NetworkRun {
  Graph graph;
  double lambda2 = 0.0;
  double lambda_max = 0.0;
  SyncVerdict verdict;
  TrajectoryRecord trajectory;
  bool synchronized = false;         // e < 1e-3 over the final 10% of the horizon
  double tail_min_error = 0.0;       // min e over the final half of the horizon
};

struct E4Result {
  StabilityRegion region;
  NetworkRun original;
  NetworkRun rewired;
  int rewire_steps = 0;
  std::uint64_t seed = 0;
};

inline StabilityRegion region_for(const ExperimentConfig& cfg, const OdeSystem& sys,
                                  const CouplingMatrix& h) {
  if (cfg.alpha1 && cfg.alpha2) return {*cfg.alpha1, *cfg.alpha2, {}};
  MsfOptions opts;
  opts.dt = cfg.dt;
  const auto grid = make_grid(cfg.gamma_start, cfg.gamma_stop, cfg.gamma_step);
  return compute_stability_region(sys, h, grid, opts, cfg.region_tol);
}

inline E4Result run_e4(const ExperimentConfig& cfg) {
  const int n = cfg.sizes.empty() ? 100 : cfg.sizes.front();
  const std::uint64_t seed = cfg.seeds.empty() ? 1 : cfg.seeds.front();
  return detail::with_context(detail::run_context(n, seed), [&] {
    const OdeSystem sys = make_system(cfg.system, cfg.system_params);
    const CouplingMatrix h = CouplingMatrix::first_component(sys.dim);
    E4Result out;
    out.seed = seed;
    out.region = region_for(cfg, sys, h);

    SimulationOptions sim;
    sim.dt = cfg.dt;
    sim.horizon = cfg.horizon;
    sim.sample_every = std::max(1, static_cast<int>(std::lround(1.0 / cfg.dt)));
    const auto x0 = perturbed_common_state(sys, n, cfg.perturbation, seed, 500.0, cfg.dt);

    auto evaluate = [&](Graph g) {
      NetworkRun run;
      const auto eig = laplacian_eigenvalues(g);
      run.lambda2 = eig[1];
      run.lambda_max = eig.back();
      run.verdict = check_synchronizable(run.lambda2, run.lambda_max, cfg.coupling, out.region);
      run.trajectory = simulate_coupled(g, sys, h, cfg.coupling, x0, sim);
      run.synchronized = synchronized_at_end(run.trajectory, 1e-3, 0.1);
      run.tail_min_error = min_error_in_tail(run.trajectory, 0.5);
      run.graph = std::move(g);
      return run;
    };

    Graph g = generate_ba(n, cfg.m, seed);
    out.original = evaluate(g);

    // Similar rewiring until c * lambda2 falls below alpha1 with the configured margin.
    const double target = (1.0 - cfg.desync_margin) * out.region.alpha1;
    auto lambda2_of = [](const Graph& x) { return laplacian_eigenvalues(x)[1]; };
    double l2 = out.original.lambda2;
    while (cfg.coupling * l2 >= target && out.rewire_steps < cfg.rewire_steps) {
      auto next = greedy_similar_rewire_step(g, lambda2_of);
      if (!next) break;
      g = std::move(next->graph);
      l2 = lambda2_of(g);
      ++out.rewire_steps;
    }
    out.rewired = evaluate(std::move(g));
    return out;
  });
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

namespace detail {

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

/// Writes `path` via `body` plus a `<path>.json` sidecar holding config and provenance.
template <typename F>
void write_with_sidecar(const ExperimentConfig& cfg, const std::string& path, F&& body) {
  {
    auto out = open_output(path);
    out << std::setprecision(12);
    body(out);
  }
  json meta{{"file", std::filesystem::path(path).filename().string()},
            {"experiment", cfg.experiment},
            {"config", to_text(cfg)},
            {"seeds", cfg.seeds},
            {"toolkit_version", kToolkitVersion},
            {"generated_at", utc_timestamp()}};
  write_json_file(path + ".json", meta);
}

}  // namespace detail

inline std::vector<std::string> write_e1(const ExperimentConfig& cfg, const E1Result& r) {
  const std::filesystem::path dir(cfg.output_dir);
  std::vector<std::string> files{(dir / "e1_ratios.csv").string(), (dir / "e1_summary.csv").string(),
                                 (dir / "e1_cdf.csv").string()};
  detail::write_with_sidecar(cfg, files[0], [&](std::ostream& out) {
    out << "size,seed,lambda2,lambda2_removed,ratio,removed_u,removed_v\n";
    for (const auto& row : r.rows)
      out << row.size << ',' << row.seed << ',' << row.lambda2 << ',' << row.lambda2_removed << ','
          << row.ratio << ',' << row.removed.u << ',' << row.removed.v << '\n';
  });
  detail::write_with_sidecar(cfg, files[1], [&](std::ostream& out) {
    out << "size,count,min,q1,median,q3,max\n";
    for (const auto& s : r.summaries)
      out << s.size << ',' << s.count << ',' << s.min << ',' << s.q1 << ',' << s.median << ','
          << s.q3 << ',' << s.max << '\n';
  });
  detail::write_with_sidecar(cfg, files[2], [&](std::ostream& out) {
    out << "size,ratio,cdf\n";
    for (int n : cfg.sizes) {
      std::vector<double> ratios;
      for (const auto& row : r.rows)
        if (row.size == n) ratios.push_back(row.ratio);
      std::sort(ratios.begin(), ratios.end());
      for (std::size_t i = 0; i < ratios.size(); ++i)
        out << n << ',' << ratios[i] << ',' << static_cast<double>(i + 1) / ratios.size() << '\n';
    }
  });
  return files;
}

inline std::vector<std::string> write_e2(const ExperimentConfig& cfg, const E2Result& r) {
  const std::string path = (std::filesystem::path(cfg.output_dir) / "e2_estimates.csv").string();
  detail::write_with_sidecar(cfg, path, [&](std::ostream& out) {
    out << "size,seed,k_min,k_max,lambdaN,lambdaN_simple,lambdaN_second,lambdaN_rel_error,"
           "lambda2,lambda2_first_order,lambda2_estimate,argmin_node,estimate_closer\n";
    for (const auto& row : r.rows) {
      out << row.size << ',' << row.seed << ',' << row.k_min << ',' << row.k_max << ','
          << row.lambda_max << ',' << row.lambda_max_simple << ',';
      if (row.lambda_max_second) out << *row.lambda_max_second;
      out << ',' << row.lambda_max_rel_error << ',' << row.lambda2 << ',' << row.k_min << ','
          << row.lambda2_estimate << ',' << row.argmin_node << ',' << (row.estimate_closer_than_kmin ? 1 : 0)
          << '\n';
    }
  });
  return {path};
}

inline std::vector<std::string> write_e3(const ExperimentConfig& cfg, const E3Result& r) {
  const std::filesystem::path dir(cfg.output_dir);
  std::vector<std::string> files{(dir / "e3_steps.csv").string(), (dir / "e3_summary.csv").string()};
  detail::write_with_sidecar(cfg, files[0], [&](std::ostream& out) {
    out << "size,seed,step,node,rho,lambda2,lambda2_estimate\n";
    for (const auto& s : r.series)
      for (const auto& st : s.steps)
        out << s.size << ',' << s.seed << ',' << st.step << ',' << st.node << ',' << st.rho << ','
            << st.lambda2 << ',' << st.estimate << '\n';
  });
  detail::write_with_sidecar(cfg, files[1], [&](std::ostream& out) {
    out << "size,seed,steps,saturated,spearman\n";
    for (const auto& s : r.series)
      out << s.size << ',' << s.seed << ',' << s.steps.size() - 1 << ',' << (s.saturated ? 1 : 0) << ','
          << s.spearman << '\n';
  });
  return files;
}

inline std::vector<std::string> write_e4(const ExperimentConfig& cfg, const E4Result& r) {
  const std::filesystem::path dir(cfg.output_dir);
  std::vector<std::string> files;
  auto emit = [&](const std::string& name, auto&& body) {
    files.push_back((dir / name).string());
    detail::write_with_sidecar(cfg, files.back(), body);
  };
  for (const auto& [tag, run] : {std::pair{"g1", &r.original}, std::pair{"g2", &r.rewired}}) {
    const std::string t = tag;
    emit("e4_" + t + ".edges", [&](std::ostream& out) { write_edge_list(out, run->graph); });
    emit("e4_" + t + "_trajectory.csv", [&](std::ostream& out) { write_trajectory_csv(out, run->trajectory); });
    emit("e4_" + t + "_sync_error.csv", [&](std::ostream& out) { write_sync_error_csv(out, run->trajectory); });
  }
  emit("e4_summary.json", [&](std::ostream& out) {
    auto run_json = [](const NetworkRun& run) {
      return json{{"lambda2", run.lambda2},
                  {"lambdaN", run.lambda_max},
                  {"verdict", to_json(run.verdict)},
                  {"synchronized", run.synchronized},
                  {"final_sync_error", run.trajectory.sync_error.back()},
                  {"tail_min_error", run.tail_min_error}};
    };
    json j{{"alpha1", r.region.alpha1},
           {"alpha2", r.region.alpha2},
           {"rewire_steps", r.rewire_steps},
           {"G1", run_json(r.original)},
           {"G2", run_json(r.rewired)}};
    out << j.dump(2) << '\n';
  });
  return files;
}

/// Runs the configured experiment and writes its files; returns the paths written.
inline std::vector<std::string> run_experiment(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  if (cfg.experiment == "E1") return write_e1(cfg, run_e1(cfg));
  if (cfg.experiment == "E2") return write_e2(cfg, run_e2(cfg));
  if (cfg.experiment == "E3") return write_e3(cfg, run_e3(cfg));
  if (cfg.experiment == "E4") return write_e4(cfg, run_e4(cfg));
  throw Error(ErrorCode::InvalidParameter, "unknown experiment '" + cfg.experiment + "'");
}

}  // namespace sfsync
