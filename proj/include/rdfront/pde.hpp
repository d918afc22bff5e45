#pragma once

#include <functional>

#include "rdfront/model.hpp"
#include "rdfront/numerics.hpp"

namespace rdfront {

/// Uniform 1-D grid with clamped (time-dependent Dirichlet) boundaries.
struct Grid {
  double x0 = 0.0;
  double dx = 0.0;
  int n_nodes = 0;
  double x_at(int i) const { return x0 + dx * i; }
  double x_end() const { return x_at(n_nodes - 1); }
};

/// Boundary callable: fills the m boundary values at time t.
using BoundaryFn = std::function<void(double t, std::span<double> out)>;

/// Grid function u(x) in R^m at one time level.
struct Field {
  Grid grid;
  int m = 0;
  std::vector<double> values;  // n_nodes x m row-major
  double time = 0.0;

  std::span<double> at(int i) {
    return {values.data() + static_cast<std::size_t>(i) * m, static_cast<std::size_t>(m)};
  }
  std::span<const double> at(int i) const {
    return {values.data() + static_cast<std::size_t>(i) * m, static_cast<std::size_t>(m)};
  }
  double value(int i, int comp) const {
    return values[static_cast<std::size_t>(i) * m + comp];
  }
};

Field make_field(const Grid& grid, int m, double t0);

/// Backward-Euler diffusion + explicit reaction (IMEX). Monotone for
/// dt <= 1/(2 L): the diffusion solve is an M-matrix inverse and
/// u + dt f(u) is order-preserving. Boundary nodes are overwritten from the
/// callables after each step; the state must remain inside [0, box] up to a
/// 1e-9 slack (violation is an error, never a clamp).
class IvpSolver {
 public:
  IvpSolver(const ModelSpec& model, const Grid& grid, double dt, BoundaryFn left,
            BoundaryFn right);

  /// Advances the field by one dt.
  void step(Field& field) const;
  double dt() const { return dt_; }
  const ModelSpec& model() const { return *model_; }

  /// Repeated stepping to t_end; optional callback after each step.
  void solve_ivp(Field& field, double t_end,
                 const std::function<void(const Field&)>& on_step = {}) const;

 private:
  const ModelSpec* model_;
  Grid grid_;
  double dt_;
  BoundaryFn left_, right_;
  std::vector<TridiagonalSolver> solvers_;
  mutable std::vector<double> fbuf_, rhs_, bc_;
};

struct ComparisonReport {
  bool ordered = true;
  double worst_violation = 0.0;  // most negative ordering margin observed
  double at_time = 0.0;
  int snapshots_checked = 0;
};

/// Three-system comparison: advances u- under f-, u under f, u+ under f+
/// with the shared scheme and asserts ordering u- <= u <= u+ at every
/// snapshot (tolerance 1e-8). Initial data must be ordered and inside
/// [0, K+]. Boundary data is frozen at the initial boundary values.
ComparisonReport compare_three(const ModelSpec& lower, const ModelSpec& middle,
                               const ModelSpec& upper, Field u_minus, Field u_mid,
                               Field u_plus, double t_end, double dt,
                               double snap_dt = 0.5);

}  // namespace rdfront
