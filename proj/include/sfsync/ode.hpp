#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sfsync/error.hpp"

namespace sfsync {

/// Autonomous vector field x' = f(x) together with its Jacobian.
struct OdeSystem {
  using Field = std::function<void(std::span<const double> x, std::span<double> dx)>;
  /// Writes Df(x) row-major into `jac` (dim * dim entries).
  using Jacobian = std::function<void(std::span<const double> x, std::span<double> jac)>;

  std::string name;
  int dim = 0;
  std::map<std::string, double> params;
  Field field;
  Jacobian jacobian;
};

/// x1' = -(x2 + x3), x2' = x1 + a x2, x3' = b + x3 (x1 - d).
inline OdeSystem rossler(double a = 0.2, double b = 0.2, double d = 6.0) {
  OdeSystem sys;
  sys.name = "rossler";
  sys.dim = 3;
  sys.params = {{"a", a}, {"b", b}, {"d", d}};
  sys.field = [a, b, d](std::span<const double> x, std::span<double> dx) {
    dx[0] = -(x[1] + x[2]);
    dx[1] = x[0] + a * x[1];
    dx[2] = b + x[2] * (x[0] - d);
  };
  sys.jacobian = [a, d](std::span<const double> x, std::span<double> j) {
    j[0] = 0.0;  j[1] = -1.0; j[2] = -1.0;
    j[3] = 1.0;  j[4] = a;    j[5] = 0.0;
    j[6] = x[2]; j[7] = 0.0;  j[8] = x[0] - d;
  };
  return sys;
}

inline OdeSystem lorenz(double sigma = 10.0, double rho = 28.0, double beta = 8.0 / 3.0) {
  OdeSystem sys;
  sys.name = "lorenz";
  sys.dim = 3;
  sys.params = {{"sigma", sigma}, {"rho", rho}, {"beta", beta}};
  sys.field = [sigma, rho, beta](std::span<const double> x, std::span<double> dx) {
    dx[0] = sigma * (x[1] - x[0]);
    dx[1] = x[0] * (rho - x[2]) - x[1];
    dx[2] = x[0] * x[1] - beta * x[2];
  };
  sys.jacobian = [sigma, rho, beta](std::span<const double> x, std::span<double> j) {
    j[0] = -sigma;       j[1] = sigma;  j[2] = 0.0;
    j[3] = rho - x[2];   j[4] = -1.0;   j[5] = -x[0];
    j[6] = x[1];         j[7] = x[0];   j[8] = -beta;
  };
  return sys;
}

inline OdeSystem make_system(const std::string& name, const std::map<std::string, double>& p = {}) {
  auto get = [&](const char* key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
  };
  if (name == "rossler") return rossler(get("a", 0.2), get("b", 0.2), get("d", 6.0));
  if (name == "lorenz") return lorenz(get("sigma", 10.0), get("rho", 28.0), get("beta", 8.0 / 3.0));
  throw Error(ErrorCode::InvalidParameter, "unknown system '" + name + "'");
}

/// Constant linear inner coupling H (row-major, dim x dim).
struct CouplingMatrix {
  int dim = 0;
  std::vector<double> values;

  static CouplingMatrix identity(int dim) {
    CouplingMatrix h{dim, std::vector<double>(static_cast<std::size_t>(dim * dim), 0.0)};
    for (int i = 0; i < dim; ++i) h.values[i * dim + i] = 1.0;
    return h;
  }

  /// Couples through the first state component only.
  static CouplingMatrix first_component(int dim) {
    CouplingMatrix h{dim, std::vector<double>(static_cast<std::size_t>(dim * dim), 0.0)};
    h.values[0] = 1.0;
    return h;
  }

  double operator()(int i, int j) const { return values[i * dim + j]; }

  /// out = H x
  void apply(std::span<const double> x, std::span<double> out) const {
    for (int i = 0; i < dim; ++i) {
      double s = 0.0;
      for (int j = 0; j < dim; ++j) s += values[i * dim + j] * x[j];
      out[i] = s;
    }
  }
};

/// Classical fixed-step fourth-order Runge-Kutta with reusable stage buffers.
class Rk4 {
 public:
  using Rhs = std::function<void(std::span<const double>, std::span<double>)>;

  explicit Rk4(std::size_t size) : k1_(size), k2_(size), k3_(size), k4_(size), tmp_(size) {}

  template <typename F>
  void step(F&& rhs, std::span<double> x, double dt) {
    const std::size_t n = x.size();
    rhs(std::span<const double>(x), std::span<double>(k1_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + 0.5 * dt * k1_[i];
    rhs(std::span<const double>(tmp_), std::span<double>(k2_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + 0.5 * dt * k2_[i];
    rhs(std::span<const double>(tmp_), std::span<double>(k3_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + dt * k3_[i];
    rhs(std::span<const double>(tmp_), std::span<double>(k4_));
    for (std::size_t i = 0; i < n; ++i)
      x[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

inline bool all_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

/// Integrates the isolated system for `duration` time units; returns the final state.
inline std::vector<double> integrate_isolated(const OdeSystem& sys, std::vector<double> x,
                                              double dt, double duration) {
  Rk4 rk(x.size());
  const long steps = std::lround(duration / dt);
  for (long s = 0; s < steps; ++s) {
    rk.step(sys.field, x, dt);
    if (!all_finite(x)) throw DivergenceError((s + 1) * dt);
  }
  return x;
}

}  // namespace sfsync
