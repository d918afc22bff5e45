#include "rdfront/front.hpp"

#include <algorithm>
#include <cmath>

#include "rdfront/numerics.hpp"

namespace rdfront {

namespace {

double stationary_residual(const ModelSpec& model, double c, double dxi,
                           const std::vector<double>& phi, int n,
                           std::vector<double>& fbuf) {
  const int m = model.m;
  for (int i = 0; i < n; ++i)
    model.reaction({phi.data() + static_cast<std::size_t>(i) * m, static_cast<std::size_t>(m)},
                   {fbuf.data() + static_cast<std::size_t>(i) * m, static_cast<std::size_t>(m)});
  double res = 0.0;
  const double inv2 = 1.0 / (2.0 * dxi), invh2 = 1.0 / (dxi * dxi);
  for (int i = 1; i + 1 < n; ++i)
    for (int j = 0; j < m; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * m + j;
      const double lap = (phi[idx + m] - 2.0 * phi[idx] + phi[idx - m]) * invh2;
      const double adv = (phi[idx + m] - phi[idx - m]) * inv2;
      res = std::max(res, std::abs(model.diffusion[j] * lap - c * adv + fbuf[idx]));
    }
  return res;
}

}  // namespace

FrontProfile compute_front(const ModelSpec& model, const SpectralData& spectral,
                           double c, const FrontOptions& opts) {
  if (!(c > spectral.c_star()))
    throw config_error("compute_front: speed below critical (c <= c*)");
  const int m = model.m;
  const double lam1 = compute_lambda1(spectral, c);
  const Vec v1 = spectral.v(lam1);
  const int n = static_cast<int>(std::lround((opts.xi1 - opts.xi0) / opts.dxi)) + 1;
  const double dxi = opts.dxi;

  // Monotonicity of the implicit operator needs the advection part dominated
  // by diffusion on the stencil.
  for (double d : model.diffusion)
    if (!(dxi < 2.0 * d / c))
      throw numeric_error("compute_front: grid too coarse for a monotone stencil (dxi >= 2d/c)");

  std::vector<double> phi(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    const double e = std::exp(lam1 * (opts.xi0 + dxi * i));
    for (int j = 0; j < m; ++j)
      phi[static_cast<std::size_t>(i) * m + j] = std::min(model.K[j], v1[j] * e);
  }

  const double dtau = 0.5 / model.lipschitz_L;
  std::vector<TridiagonalSolver> solvers;
  solvers.reserve(m);
  for (int j = 0; j < m; ++j) {
    const double d = model.diffusion[j];
    solvers.emplace_back(n, -dtau * (d / (dxi * dxi) + c / (2.0 * dxi)),
                         1.0 + 2.0 * dtau * d / (dxi * dxi),
                         -dtau * (d / (dxi * dxi) - c / (2.0 * dxi)));
  }

  const double tail_left = std::exp(lam1 * opts.xi0);
  std::vector<double> fbuf(phi.size()), rhs(n), col(n);
  FrontProfile out;
  out.c = c;
  out.lambda1 = lam1;
  out.v1 = v1;

  double res = 0.0;
  int step = 0;
  double best_res = 1e300;
  int best_step = 0;
  for (; step < opts.max_steps; ++step) {
    if (step % 10 == 0) {
      res = stationary_residual(model, c, dxi, phi, n, fbuf);
      if (res < opts.tol) break;
      if (res < best_res * 0.99999) {
        best_res = res;
        best_step = step;
      } else if (step - best_step > 2000) {
        throw numeric_error("compute_front: residual plateaued above tolerance");
      }
      // degenerate collapse guard: after an initial transient the right half
      // must stay at K-scale
      if (step * dtau > 20.0) {
        double sup_right = 0.0;
        for (int i = n / 2; i < n; ++i)
          for (int j = 0; j < m; ++j)
            sup_right = std::max(sup_right,
                                 phi[static_cast<std::size_t>(i) * m + j] / model.K[j]);
        if (sup_right < 0.1)
          throw numeric_error("compute_front: profile collapsed toward 0 (degenerate limit)");
      }
    }
    for (int i = 0; i < n; ++i)
      model.reaction({phi.data() + static_cast<std::size_t>(i) * m, static_cast<std::size_t>(m)},
                     {fbuf.data() + static_cast<std::size_t>(i) * m, static_cast<std::size_t>(m)});
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = static_cast<std::size_t>(i) * m + j;
        rhs[i] = phi[idx] + dtau * fbuf[idx];
      }
      rhs[0] = v1[j] * tail_left;  // clamped to the analytic tail
      rhs[n - 1] = model.K[j];     // clamped to K
      solvers[j].solve(rhs);
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = static_cast<std::size_t>(i) * m + j;
        if (rhs[i] > phi[idx] + 1e-12)
          throw numeric_error("compute_front: iterate rose; supersolution property lost");
        phi[idx] = rhs[i];
      }
    }
  }
  if (res >= opts.tol)
    throw numeric_error("compute_front: residual floor not reached in max steps");

  out.steps = step;
  out.residual = res;
  out.profile = Profile(opts.xi0, dxi, m, std::move(phi), DecayMeta{lam1, v1});
  if (opts.normalize) normalize_phase(out, opts.fit_lo, opts.fit_hi);
  return out;
}

void normalize_phase(FrontProfile& front, double fit_lo, double fit_hi) {
  const Profile& p = front.profile;
  const double lam = front.lambda1;
  std::vector<double> xs, ys;
  for (int i = 0; i < p.n_nodes(); ++i) {
    const double v = p.value(i, 0);
    if (v >= fit_lo && v <= fit_hi) {
      xs.push_back(p.t_at(i));
      ys.push_back(std::log(v));
    }
  }
  if (xs.size() < 8)
    throw numeric_error("normalize_phase: tail fit window is empty (extend grid)");
  // fixed-slope fit: log Phi_1 = log(a v_1) + lam xi
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    acc += ys[i] - lam * xs[i] - std::log(front.v1[0]);
  const double loga = acc / xs.size();
  // Phi(xi + shift) then has tail amplitude a e^{lam shift} = 1.
  const double shift = -loga / lam;

  front.fitted_amplitude = std::exp(loga);
  front.fitted_slope = fit_line(xs, ys).slope;
  front.shift_applied = shift;
  front.profile.shift_argument(shift);
}

FrontReport verify_front(const ModelSpec& model, const FrontProfile& front,
                         double tol_res) {
  FrontReport rep;
  const Profile& p = front.profile;
  const int n = p.n_nodes(), m = p.m();
  std::vector<double> fbuf(static_cast<std::size_t>(n) * m);
  rep.residual_max =
      stationary_residual(model, front.c, p.dt(), p.raw(), n, fbuf);
  rep.residual_ok = rep.residual_max <= tol_res;

  rep.monotone_ok = p.is_nondecreasing(1e-12);

  double minval = 1e300;
  for (int i = 1; i + 1 < n; ++i)
    for (int j = 0; j < m; ++j) minval = std::min(minval, p.value(i, j));
  rep.positive_ok = minval > 0.0;

  rep.left_norm = max_abs(p.node(0));
  rep.right_distance = max_norm_diff(p.node(n - 1), model.K);
  rep.limits_ok = rep.left_norm <= 1e-6 && rep.right_distance <= 1e-4;

  // Exponential bound. The decay shift rescales the tail by the fitted
  // amplitude, whose window-curvature bias can push the deep-tail ratio a few
  // tenths of a percent above 1; a 0.5% relative allowance absorbs that while
  // still catching any core-scale violation. The 2% ratio check uses the
  // deeper half of the fit window; at the shallow end the second-order tail
  // term itself can reach 2% (the exact Fisher front does).
  double over = -1e300;
  double rel_over = -1e300;
  double reldev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = std::exp(front.lambda1 * p.t_at(i));
    for (int j = 0; j < m; ++j) {
      const double bound = front.v1[j] * e;
      over = std::max(over, p.value(i, j) - bound);
      rel_over = std::max(rel_over, p.value(i, j) / bound - 1.0);
      if (p.value(i, 0) >= 1e-8 && p.value(i, 0) <= 1e-6)
        reldev = std::max(reldev, std::abs(p.value(i, j) / bound - 1.0));
    }
  }
  rep.bound_overshoot = over;
  // 1/a at the clamped far tail is the largest benign ratio (a is the fitted
  // amplitude, within 1% of 1 at sane resolutions)
  rep.bound_ok = rel_over <= 2e-2;
  rep.tail_max_reldev = reldev;
  rep.tail_ok = reldev <= 0.02;
  return rep;
}

}  // namespace rdfront
