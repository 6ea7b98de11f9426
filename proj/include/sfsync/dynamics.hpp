#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sfsync/error.hpp"
#include "sfsync/graph.hpp"
#include "sfsync/ode.hpp"

namespace sfsync {

// ---------------------------------------------------------------------------
// Coupled network simulation: x_i' = f(x_i) - c sum_j L_ij H x_j
// ---------------------------------------------------------------------------

struct SimulationOptions {
  double dt = 0.01;
  double horizon = 100.0;
  int sample_every = 10;  // steps between recorded samples
};

struct TrajectoryRecord {
  int nodes = 0;
  int dim = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> states;  // per sample: nodes * dim, node-major
  std::vector<double> sync_error;
};

/// e = sqrt((1/N) sum_i |x_i - mean|^2) over a node-major state vector.
inline double sync_error(std::span<const double> state, int nodes, int dim) {
  // Centroid as node 0 plus the mean offset, so identical states give exactly zero.
  std::vector<double> mean(dim, 0.0);
  for (int i = 1; i < nodes; ++i)
    for (int k = 0; k < dim; ++k) mean[k] += state[i * dim + k] - state[k];
  for (int k = 0; k < dim; ++k) mean[k] = state[k] + mean[k] / nodes;
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i)
    for (int k = 0; k < dim; ++k) {
      const double d = state[i * dim + k] - mean[k];
      acc += d * d;
    }
  return std::sqrt(acc / nodes);
}

inline TrajectoryRecord simulate_coupled(const Graph& g, const OdeSystem& sys,
                                         const CouplingMatrix& h, double c,
                                         std::span<const double> x0,
                                         const SimulationOptions& opts) {
  const int n = g.node_count();
  const int dim = sys.dim;
  if (c < 0.0) throw Error(ErrorCode::InvalidParameter, "coupling strength must be non-negative");
  if (opts.dt <= 0.0 || opts.horizon <= 0.0 || opts.sample_every < 1)
    throw Error(ErrorCode::InvalidParameter, "dt, horizon and sample stride must be positive");
  if (h.dim != dim) throw Error(ErrorCode::InvalidParameter, "coupling matrix dimension mismatch");
  if (x0.size() != static_cast<std::size_t>(n) * dim)
    throw Error(ErrorCode::InvalidParameter, "initial state must hold N * dim values");

  std::vector<double> diff(dim), hdiff(dim);
  auto rhs = [&](std::span<const double> x, std::span<double> dx) {
    for (int i = 0; i < n; ++i) {
      const auto xi = x.subspan(static_cast<std::size_t>(i) * dim, dim);
      auto dxi = dx.subspan(static_cast<std::size_t>(i) * dim, dim);
      sys.field(xi, dxi);
      // sum_j L_ij x_j = sum over neighbours of (x_i - x_j)
      std::fill(diff.begin(), diff.end(), 0.0);
      for (int j : g.neighbours(i))
        for (int k = 0; k < dim; ++k) diff[k] += xi[k] - x[static_cast<std::size_t>(j) * dim + k];
      h.apply(diff, hdiff);
      for (int k = 0; k < dim; ++k) dxi[k] -= c * hdiff[k];
    }
  };

  TrajectoryRecord rec;
  rec.nodes = n;
  rec.dim = dim;
  std::vector<double> x(x0.begin(), x0.end());
  auto record = [&](double t) {
    rec.times.push_back(t);
    rec.states.push_back(x);
    rec.sync_error.push_back(sync_error(x, n, dim));
  };
  record(0.0);
  Rk4 rk(x.size());
  const long steps = std::lround(opts.horizon / opts.dt);
  for (long s = 1; s <= steps; ++s) {
    rk.step(rhs, x, opts.dt);
    if (!all_finite(x)) throw DivergenceError(s * opts.dt);
    if (s % opts.sample_every == 0 || s == steps) record(s * opts.dt);
  }
  return rec;
}

/// Common state on the attractor (after `transient` time units from (1,...,1)) plus
/// independent uniform per-node perturbations in [-amplitude, amplitude].
inline std::vector<double> perturbed_common_state(const OdeSystem& sys, int nodes,
                                                  double amplitude, std::uint64_t seed,
                                                  double transient = 500.0, double dt = 0.01) {
  const auto base = integrate_isolated(sys, std::vector<double>(sys.dim, 1.0), dt, transient);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-amplitude, amplitude);
  std::vector<double> x(static_cast<std::size_t>(nodes) * sys.dim);
  for (int i = 0; i < nodes; ++i)
    for (int k = 0; k < sys.dim; ++k) x[static_cast<std::size_t>(i) * sys.dim + k] = base[k] + noise(rng);
  return x;
}

/// True when e(t) < threshold for every sample in the final `tail` fraction of the run.
inline bool synchronized_at_end(const TrajectoryRecord& rec, double threshold = 1e-3,
                                double tail = 0.1) {
  if (rec.times.empty()) return false;
  const double t_end = rec.times.back();
  const double t_from = t_end - tail * t_end;
  for (std::size_t s = 0; s < rec.times.size(); ++s)
    if (rec.times[s] >= t_from && !(rec.sync_error[s] < threshold)) return false;
  return true;
}

/// Smallest e(t) over the final `tail` fraction.
inline double min_error_in_tail(const TrajectoryRecord& rec, double tail) {
  double best = std::numeric_limits<double>::infinity();
  if (rec.times.empty()) return best;
  const double t_from = rec.times.back() * (1.0 - tail);
  for (std::size_t s = 0; s < rec.times.size(); ++s)
    if (rec.times[s] >= t_from) best = std::min(best, rec.sync_error[s]);
  return best;
}

// ---------------------------------------------------------------------------
// Master stability function
// ---------------------------------------------------------------------------

/// Benettin settings. The reference orbit starts at `initial` (default all ones).
struct MsfOptions {
  double dt = 0.01;
  double transient = 500.0;         // discarded before the reference orbit is used
  double tangent_transient = 50.0;  // lets the tangent vector align before averaging
  double averaging = 2000.0;
  double renormalize_every = 1.0;
  int segments = 10;
  double convergence_tol = 5e-3;  // bound on the standard error across segments
  std::vector<double> initial;
};

struct MsfSample {
  double gamma = 0.0;
  double omega_max = 0.0;
  bool converged = true;
};

/// Point on the attractor reached after the reference transient.
inline std::vector<double> msf_reference_state(const OdeSystem& sys, const MsfOptions& opts) {
  std::vector<double> x = opts.initial.empty() ? std::vector<double>(sys.dim, 1.0) : opts.initial;
  if (static_cast<int>(x.size()) != sys.dim)
    throw Error(ErrorCode::InvalidParameter, "initial state dimension mismatch");
  return integrate_isolated(sys, std::move(x), opts.dt, opts.transient);
}

/// Largest Lyapunov exponent of zeta' = [Df(s) - gamma H] zeta along the reference orbit
/// starting at `reference` (already on the attractor).
inline MsfSample master_stability_exponent(const OdeSystem& sys, const CouplingMatrix& h,
                                           double gamma, std::span<const double> reference,
                                           const MsfOptions& opts) {
  const int dim = sys.dim;
  std::vector<double> jac(static_cast<std::size_t>(dim * dim));
  auto rhs = [&](std::span<const double> y, std::span<double> dy) {
    const auto s = y.first(dim);
    const auto z = y.subspan(dim, dim);
    sys.field(s, dy.first(dim));
    sys.jacobian(s, jac);
    for (int i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (int j = 0; j < dim; ++j) acc += (jac[i * dim + j] - gamma * h(i, j)) * z[j];
      dy[dim + i] = acc;
    }
  };

  std::vector<double> y(2 * static_cast<std::size_t>(dim));
  std::copy(reference.begin(), reference.end(), y.begin());
  for (int i = 0; i < dim; ++i) y[dim + i] = 1.0 / std::sqrt(static_cast<double>(dim));

  Rk4 rk(y.size());
  const long per_renorm = std::max(1L, std::lround(opts.renormalize_every / opts.dt));
  const double interval = per_renorm * opts.dt;
  auto renormalize = [&]() {
    double norm = 0.0;
    for (int i = 0; i < dim; ++i) norm += y[dim + i] * y[dim + i];
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw DivergenceError(0.0);
    for (int i = 0; i < dim; ++i) y[dim + i] /= norm;
    return std::log(norm);
  };
  auto advance = [&](double t0) {
    for (long s = 0; s < per_renorm; ++s) rk.step(rhs, y, opts.dt);
    if (!all_finite(std::span<const double>(y).first(dim))) throw DivergenceError(t0 + interval);
    return renormalize();
  };

  const long warm = std::lround(opts.tangent_transient / interval);
  double t = 0.0;
  for (long r = 0; r < warm; ++r, t += interval) advance(t);

  const int segs = std::max(1, opts.segments);
  const long per_seg = std::max(1L, std::lround(opts.averaging / interval / segs));
  std::vector<double> seg_rate(segs);
  double total = 0.0;
  for (int sgm = 0; sgm < segs; ++sgm) {
    double acc = 0.0;
    for (long r = 0; r < per_seg; ++r, t += interval) acc += advance(t);
    seg_rate[sgm] = acc / (per_seg * interval);
    total += acc;
  }
  MsfSample out;
  out.gamma = gamma;
  out.omega_max = total / (static_cast<double>(segs) * per_seg * interval);
  if (segs > 1) {
    double var = 0.0;
    for (double r : seg_rate) var += (r - out.omega_max) * (r - out.omega_max);
    var /= (segs - 1);
    out.converged = std::sqrt(var / segs) < opts.convergence_tol;
  }
  return out;
}

inline std::vector<MsfSample> msf_curve(const OdeSystem& sys, const CouplingMatrix& h,
                                        std::span<const double> gamma_grid,
                                        const MsfOptions& opts = {}) {
  if (gamma_grid.empty()) throw Error(ErrorCode::InvalidParameter, "empty gamma grid");
  if (h.dim != sys.dim) throw Error(ErrorCode::InvalidParameter, "coupling matrix dimension mismatch");
  const auto reference = msf_reference_state(sys, opts);
  std::vector<MsfSample> curve;
  curve.reserve(gamma_grid.size());
  for (double gamma : gamma_grid) curve.push_back(master_stability_exponent(sys, h, gamma, reference, opts));
  return curve;
}

/// Inclusive grid start:stop:step.
inline std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start)
    throw Error(ErrorCode::InvalidParameter, "grid needs step > 0 and stop >= start");
  std::vector<double> grid;
  const long count = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) grid.push_back(start + i * step);
  return grid;
}

/// Synchronization holds iff c * lambda_i lies in (alpha1, alpha2) for all i >= 2.
struct StabilityRegion {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  std::vector<MsfSample> curve;
};

/// Locates the outermost sign changes of the sampled curve. With `omega` each bracket is
/// refined by bisection to width `tol`; otherwise the crossing is interpolated linearly.
/// A negative first (last) sample clips the region to the grid start (end).
inline StabilityRegion stability_region(std::vector<MsfSample> curve,
                                        const std::function<double(double)>& omega = {},
                                        double tol = 1e-2) {
  std::sort(curve.begin(), curve.end(),
            [](const MsfSample& a, const MsfSample& b) { return a.gamma < b.gamma; });
  std::size_t first = curve.size(), last = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].omega_max < 0.0) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == curve.size())
    throw Error(ErrorCode::EmptyRegion, "master stability function is never negative");

  auto crossing = [&](const MsfSample& pos, const MsfSample& neg) {
    double lo = pos.gamma, hi = neg.gamma;  // omega(lo) >= 0 > omega(hi), lo may exceed hi
    if (!omega) {
      const double w = pos.omega_max / (pos.omega_max - neg.omega_max);
      return lo + w * (hi - lo);
    }
    while (std::abs(hi - lo) > tol) {
      const double mid = 0.5 * (lo + hi);
      (omega(mid) < 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };

  StabilityRegion region;
  region.alpha1 = first == 0 ? curve.front().gamma : crossing(curve[first - 1], curve[first]);
  region.alpha2 = last + 1 == curve.size() ? curve.back().gamma : crossing(curve[last + 1], curve[last]);
  region.curve = std::move(curve);
  return region;
}

/// Full pipeline: sample the grid, then bisect each boundary with fresh exponent evaluations.
inline StabilityRegion compute_stability_region(const OdeSystem& sys, const CouplingMatrix& h,
                                                std::span<const double> gamma_grid,
                                                const MsfOptions& opts = {}, double tol = 1e-2) {
  const auto reference = msf_reference_state(sys, opts);
  std::vector<MsfSample> curve;
  for (double gamma : gamma_grid) curve.push_back(master_stability_exponent(sys, h, gamma, reference, opts));
  return stability_region(
      std::move(curve),
      [&](double gamma) { return master_stability_exponent(sys, h, gamma, reference, opts).omega_max; },
      tol);
}

struct SyncVerdict {
  bool synchronizable = false;
  double lower = 0.0;  // c * lambda2
  double upper = 0.0;  // c * lambdaN
  bool lower_ok = false;
  bool upper_ok = false;
  double eigenratio = 0.0;
  double ratio_bound = 0.0;  // alpha2 / alpha1 (infinite when alpha1 == 0)
  bool ratio_ok = false;
};

inline SyncVerdict check_synchronizable(double lambda2, double lambda_max, double c,
                                        const StabilityRegion& region) {
  SyncVerdict v;
  v.lower = c * lambda2;
  v.upper = c * lambda_max;
  v.lower_ok = v.lower > region.alpha1;
  v.upper_ok = v.upper < region.alpha2;
  v.synchronizable = v.lower_ok && v.upper_ok;
  v.eigenratio = lambda2 > 0 ? lambda_max / lambda2 : std::numeric_limits<double>::infinity();
  v.ratio_bound = region.alpha1 > 0 ? region.alpha2 / region.alpha1
                                    : std::numeric_limits<double>::infinity();
  v.ratio_ok = v.eigenratio < v.ratio_bound;
  return v;
}

}  // namespace sfsync
