#include "rdfront/pde.hpp"

#include <algorithm>
#include <cmath>

namespace rdfront {

Field make_field(const Grid& grid, int m, double t0) {
  Field f;
  f.grid = grid;
  f.m = m;
  f.values.assign(static_cast<std::size_t>(grid.n_nodes) * m, 0.0);
  f.time = t0;
  return f;
}

IvpSolver::IvpSolver(const ModelSpec& model, const Grid& grid, double dt,
                     BoundaryFn left, BoundaryFn right)
    : model_(&model),
      grid_(grid),
      dt_(dt),
      left_(std::move(left)),
      right_(std::move(right)) {
  if (grid.n_nodes < 3 || !(grid.dx > 0.0))
    throw config_error("ivp: grid needs dx > 0 and at least 3 nodes");
  if (!(dt > 0.0) || dt > 0.5 / model.lipschitz_L)
    throw numeric_error("ivp: timestep above the monotonicity bound dt <= 1/(2L)");
  const int n = grid.n_nodes;
  solvers_.reserve(model.m);
  for (int j = 0; j < model.m; ++j) {
    const double mu = dt * model.diffusion[j] / (grid.dx * grid.dx);
    solvers_.emplace_back(n, -mu, 1.0 + 2.0 * mu, -mu);
  }
  fbuf_.resize(static_cast<std::size_t>(n) * model.m);
  rhs_.resize(n);
  bc_.resize(model.m);
}

void IvpSolver::step(Field& field) const {
  const int n = grid_.n_nodes;
  const int m = model_->m;
  const double tnew = field.time + dt_;
  auto& u = field.values;
  for (int i = 0; i < n; ++i)
    model_->reaction(field.at(i),
                     {fbuf_.data() + static_cast<std::size_t>(i) * m, static_cast<std::size_t>(m)});
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t idx = static_cast<std::size_t>(i) * m + j;
      rhs_[i] = u[idx] + dt_ * fbuf_[idx];
    }
    solvers_[j].solve(rhs_);
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i) * m + j] = rhs_[i];
  }
  left_(tnew, bc_);
  for (int j = 0; j < m; ++j) u[j] = bc_[j];
  right_(tnew, bc_);
  for (int j = 0; j < m; ++j)
    u[static_cast<std::size_t>(n - 1) * m + j] = bc_[j];
  field.time = tnew;

  const auto& box = model_->state_box_upper;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const double v = field.value(i, j);
      if (v < -1e-9 || v > box[j] + 1e-9)
        throw numeric_error("ivp: state left the box [0, K] (stability error)");
    }
}

void IvpSolver::solve_ivp(Field& field, double t_end,
                          const std::function<void(const Field&)>& on_step) const {
  const long steps = std::lround((t_end - field.time) / dt_);
  for (long s = 0; s < steps; ++s) {
    step(field);
    if (on_step) on_step(field);
  }
}

namespace {
BoundaryFn frozen_boundary(const Field& f, int node) {
  Vec vals(f.at(node).begin(), f.at(node).end());
  return [vals](double, std::span<double> out) {
    std::copy(vals.begin(), vals.end(), out.begin());
  };
}
}  // namespace

ComparisonReport compare_three(const ModelSpec& lower, const ModelSpec& middle,
                               const ModelSpec& upper, Field u_minus, Field u_mid,
                               Field u_plus, double t_end, double dt,
                               double snap_dt) {
  IvpSolver s_lo(lower, u_minus.grid, dt, frozen_boundary(u_minus, 0),
                 frozen_boundary(u_minus, u_minus.grid.n_nodes - 1));
  IvpSolver s_mid(middle, u_mid.grid, dt, frozen_boundary(u_mid, 0),
                  frozen_boundary(u_mid, u_mid.grid.n_nodes - 1));
  IvpSolver s_hi(upper, u_plus.grid, dt, frozen_boundary(u_plus, 0),
                 frozen_boundary(u_plus, u_plus.grid.n_nodes - 1));

  ComparisonReport rep;
  auto check = [&](double t) {
    double worst = 0.0;
    for (std::size_t i = 0; i < u_mid.values.size(); ++i) {
      worst = std::min(worst, u_mid.values[i] - u_minus.values[i]);
      worst = std::min(worst, u_plus.values[i] - u_mid.values[i]);
    }
    if (worst < rep.worst_violation) {
      rep.worst_violation = worst;
      rep.at_time = t;
    }
    ++rep.snapshots_checked;
    if (worst < -1e-8)
      throw numeric_error("compare_three: scheme-monotonicity error, ordering violated");
  };

  check(u_mid.time);
  const long steps = std::lround((t_end - u_mid.time) / dt);
  const long per_snap = std::max(1L, std::lround(snap_dt / dt));
  for (long s = 0; s < steps; ++s) {
    s_lo.step(u_minus);
    s_mid.step(u_mid);
    s_hi.step(u_plus);
    if ((s + 1) % per_snap == 0 || s + 1 == steps) check(u_mid.time);
  }
  rep.ordered = rep.worst_violation >= -1e-8;
  return rep;
}

}  // namespace rdfront
