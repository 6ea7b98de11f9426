// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.
// Pass criterion ids (AC1 ... AC8) as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sfsync/assort.hpp"
#include "sfsync/config.hpp"
#include "sfsync/dynamics.hpp"
#include "sfsync/experiments.hpp"
#include "sfsync/graph.hpp"
#include "sfsync/perturb.hpp"
#include "sfsync/spectra.hpp"
#include "sfsync/stats.hpp"

using namespace sfsync;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Graph from_edges(int n, const std::vector<Edge>& e) { return Graph(n, e); }

Graph complete_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  return from_edges(n, e);
}

Graph star_graph(int n) {
  std::vector<Edge> e;
  for (int i = 1; i < n; ++i) e.push_back({0, i});
  return from_edges(n, e);
}

Graph path_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return from_edges(n, e);
}

Graph cycle_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back(Edge::of(i, (i + 1) % n));
  return from_edges(n, e);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// AC1
Outcome closed_form_spectra() {
  double worst = 0.0;
  for (int n = 2; n <= 50; ++n) {
    worst = std::max(worst, max_abs_diff(eigen_full(complete_graph(n)).eigenvalues, oracle::complete_spectrum(n)));
    worst = std::max(worst, max_abs_diff(eigen_full(star_graph(n)).eigenvalues, oracle::star_spectrum(n)));
    worst = std::max(worst, max_abs_diff(eigen_full(path_graph(n)).eigenvalues, oracle::path_spectrum(n)));
    if (n >= 3) worst = std::max(worst, max_abs_diff(eigen_full(cycle_graph(n)).eigenvalues, oracle::cycle_spectrum(n)));
  }
  return {worst < 1e-9, "max abs error " + fmt(worst) + " (tol 1e-9)"};
}

// AC2 + AC3 share one ensemble.
struct EstimateEnsemble {
  std::vector<EstimateRow> rows;
};

const EstimateEnsemble& estimate_ensemble() {
  static const EstimateEnsemble ens = [] {
    EstimateEnsemble e;
    for (int n : {200, 500, 1000})
      for (std::uint64_t seed = 1; seed <= 50; ++seed) e.rows.push_back(estimate_row(n, 10, seed));
    return e;
  }();
  return ens;
}

Outcome lambda_max_estimate() {
  bool pass = true;
  std::string detail;
  for (int n : {200, 500, 1000}) {
    std::vector<double> err;
    for (const auto& r : estimate_ensemble().rows)
      if (r.size == n) err.push_back(r.lambda_max_rel_error);
    const double med = stats::median(err);
    pass = pass && med < 0.05;
    detail += "N=" + std::to_string(n) + " median rel err " + fmt(med) + "; ";
  }
  return {pass, detail + "(tol 0.05)"};
}

Outcome lambda2_estimate() {
  bool pass = true;
  std::string detail;
  for (int n : {200, 500, 1000}) {
    int total = 0, closer = 0, below = 0;
    for (const auto& r : estimate_ensemble().rows) {
      if (r.size != n) continue;
      ++total;
      closer += r.estimate_closer_than_kmin;
      below += r.lambda2_estimate < r.k_min;
    }
    const double frac = static_cast<double>(closer) / total;
    pass = pass && frac >= 0.7 && below == total;
    detail += "N=" + std::to_string(n) + " closer " + fmt(100 * frac) + "%, below k_min " +
              std::to_string(below) + "/" + std::to_string(total) + "; ";
  }
  return {pass, detail + "(need >=70% and 100%)"};
}

// AC4
Outcome link_removal() {
  auto cfg = default_config("E1");
  const auto r = run_e1(cfg);
  std::vector<double> ratios;
  for (const auto& row : r.rows) ratios.push_back(row.ratio);
  const double mx = *std::max_element(ratios.begin(), ratios.end());
  const double med = stats::median(ratios);
  std::string sizes;
  for (int n : cfg.sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(n);
  return {mx < 0.1 && med < 0.02, std::to_string(ratios.size()) + " runs over N={" + sizes + "}: max " +
                                      fmt(mx) + " (tol 0.1), median " + fmt(med) + " (tol 0.02)"};
}

// AC5
Outcome assortativity_link() {
  auto cfg = default_config("E3");
  const auto r = run_e3(cfg);
  bool pass = true;
  std::string detail;
  for (const auto& s : r.series) {
    pass = pass && s.spearman <= -0.8;
    detail += "N=" + std::to_string(s.size) + " spearman " + fmt(s.spearman) + " (" +
              std::to_string(s.steps.size() - 1) + " steps" + (s.saturated ? ", saturated" : "") + "); ";
  }
  return {pass, detail + "(need <= -0.8)"};
}

// AC6; the region is reused by AC7.
StabilityRegion& measured_region() {
  static StabilityRegion region = [] {
    const auto cfg = default_config("E4");
    const OdeSystem sys = make_system(cfg.system, cfg.system_params);
    MsfOptions opts;
    opts.dt = cfg.dt;
    return compute_stability_region(sys, CouplingMatrix::first_component(sys.dim),
                                    make_grid(cfg.gamma_start, cfg.gamma_stop, cfg.gamma_step), opts,
                                    cfg.region_tol);
  }();
  return region;
}

Outcome msf_region() {
  const auto& region = measured_region();
  const bool a1 = std::abs(region.alpha1 - 0.199) <= 0.1 * 0.199;
  const bool a2 = std::abs(region.alpha2 - 5.44) <= 0.1 * 5.44;
  return {a1 && a2, "alpha1 " + fmt(region.alpha1) + " (want 0.199 +-10%), alpha2 " + fmt(region.alpha2) +
                        " (want 5.44 +-10%)"};
}

// AC7
Outcome sync_control() {
  auto cfg = default_config("E4");
  const auto& region = measured_region();
  cfg.alpha1 = region.alpha1;
  cfg.alpha2 = region.alpha2;
  const auto r = run_e4(cfg);
  const auto& g1 = r.original;
  const auto& g2 = r.rewired;
  const bool g1_ok = g1.verdict.synchronizable && g1.trajectory.sync_error.back() < 1e-3 && g1.synchronized;
  const bool g2_ok = !g2.verdict.synchronizable && g2.tail_min_error > 1e-3;
  return {g1_ok && g2_ok,
          "region (" + fmt(region.alpha1) + ", " + fmt(region.alpha2) + "); G1 lambda2 " + fmt(g1.lambda2) +
              " lambdaN " + fmt(g1.lambda_max) + " verdict " + (g1.verdict.synchronizable ? "true" : "false") +
              " e(T) " + fmt(g1.trajectory.sync_error.back()) + "; G2 after " + std::to_string(r.rewire_steps) +
              " swaps lambda2 " + fmt(g2.lambda2) + " lambdaN " + fmt(g2.lambda_max) + " verdict " +
              (g2.verdict.synchronizable ? "true" : "false") + " min e over final half " + fmt(g2.tail_min_error)};
}

// AC8
Outcome property_suites() {
  std::vector<std::string> failed;
  auto check = [&](bool ok, const std::string& name) {
    if (!ok) failed.push_back(name);
  };

  {  // degree preservation under rewiring
    std::mt19937_64 rng(7);
    Graph g = generate_ba(200, 4, 3);
    auto ref = g.degrees();
    bool ok = true;
    int accepted = 0;
    for (int t = 0; t < 300; ++t) {
      const auto edges = g.edges();
      std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
      try {
        Graph next = rewire_similar(g, edges[pick(rng)], edges[pick(rng)]);
        ok = ok && next.degrees() == ref;
        g = std::move(next);
        ++accepted;
      } catch (const Error&) {
      }
    }
    check(ok && accepted > 0, "degree preservation");
  }
  {  // theta_bar and rho identities
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto p = local_assortativity(generate_ba(300, 3, seed));
      ok = ok && std::abs(std::accumulate(p.theta_bar.begin(), p.theta_bar.end(), 0.0) - 1.0) < 1e-9;
      ok = ok && std::abs(std::accumulate(p.rho.begin(), p.rho.end(), 0.0) - p.r) < 1e-9;
    }
    check(ok, "sum theta_bar = 1, sum rho = r");
  }
  {  // estimator denominators and vanishing first-order term
    bool denominators = true, first_order = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Graph g = generate_ba(300, 5, seed);
      const int kmin = g.min_degree();
      for (int i = 0; i < g.node_count(); ++i) {
        first_order = first_order && first_order_correction(g, i) == 0.0;
        if (g.degree(i) != kmin) continue;
        for (int j : g.neighbours(i)) denominators = denominators && (kmin - 1) - g.degree(j) <= -1;
      }
    }
    check(denominators, "denominators <= -1");
    check(first_order, "first-order correction zero");
  }
  {  // interlacing on small graphs
    bool ok = true;
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 5 + trial * 45 / 19;
      const Graph g = generate_ba(n, 1 + trial % 3, 100 + trial);
      const auto before = laplacian_eigenvalues(g);
      for (const Edge& e : g.edges()) {
        const auto after = laplacian_eigenvalues(g.with_changes(std::span<const Edge>(&e, 1), {}));
        for (std::size_t i = 0; i < before.size(); ++i) {
          ok = ok && after[i] <= before[i] + 1e-9;
          if (i + 1 < before.size()) ok = ok && after[i + 1] >= before[i] - 1e-9;
        }
      }
    }
    check(ok, "interlacing");
  }
  {  // RK4 order
    const OdeSystem sys = rossler();
    const std::vector<double> x0{1.0, 1.0, 1.0};
    const auto ref = integrate_isolated(sys, x0, 1e-4, 2.0);
    auto err = [&](double dt) {
      const auto x = integrate_isolated(sys, x0, dt, 2.0);
      double e = 0;
      for (int k = 0; k < 3; ++k) e = std::max(e, std::abs(x[k] - ref[k]));
      return e;
    };
    const double ratio = err(0.1) / err(0.05);
    check(ratio > 8.0 && ratio < 32.0, "RK4 order (ratio " + fmt(ratio) + ")");
  }
  {  // Jacobians
    bool ok = true;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (const OdeSystem& sys : {rossler(), lorenz()}) {
      std::function<void(const std::vector<double>&, std::vector<double>&)> f =
          [&sys](const std::vector<double>& x, std::vector<double>& dx) { sys.field(x, dx); };
      for (int t = 0; t < 100; ++t) {
        std::vector<double> x{u(rng), u(rng), u(rng)}, jac(9);
        sys.jacobian(x, jac);
        const auto fd = oracle::fd_jacobian(f, x);
        for (int k = 0; k < 9; ++k) ok = ok && std::abs(jac[k] - fd[k]) <= 1e-5 * std::max(1.0, std::abs(fd[k]));
      }
    }
    check(ok, "Jacobian vs finite differences");
  }
  std::string detail = "7 property groups";
  if (!failed.empty()) {
    detail += "; failed:";
    for (const auto& f : failed) detail += " [" + f + "]";
  }
  return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 closed-form spectra", closed_form_spectra},
      {"AC2 lambdaN estimate", lambda_max_estimate},
      {"AC3 lambda2 estimate", lambda2_estimate},
      {"AC4 link-removal insensitivity", link_removal},
      {"AC5 assortativity vs lambda2", assortativity_link},
      {"AC6 MSF stability region", msf_region},
      {"AC7 synchronization control", sync_control},
      {"AC8 property suites", property_suites},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& [name, body] : criteria) {
    const std::string id = name.substr(0, name.find(' '));
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " -- " << o.detail << " [" << fmt(secs) << " s]"
              << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << '\n';
  return failures == 0 ? 0 : 1;
}
