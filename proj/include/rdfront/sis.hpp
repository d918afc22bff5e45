#pragma once

#include "rdfront/model.hpp"
#include "rdfront/profile.hpp"
#include "rdfront/spectral.hpp"

namespace rdfront {

struct GammaOptions {
  double t0 = -40.0;
  double t1 = 40.0;
  double dt = 0.01;
  double tol = 1e-10;      // sup-norm increment stopping tolerance
  double eps = 1.5;        // subsolution exponent factor, in (1,2)
  double q0 = 2.0;         // subsolution coefficient, doubled on failure
  double q_cap = 1024.0;
  int max_sweeps = 10000;
};

struct GammaRunInfo {
  int sweeps = 0;
  double q_used = 0.0;
  double final_increment = 0.0;
  double end_distance = 0.0;      // |Gamma(t1) - K|_inf
  double worst_sweep_rise = 0.0;  // max pointwise increase across sweeps
};

/// The explicit sub/supersolution pair of the monotone iteration:
/// upperph_i(t) = min(K_i, v*_i e^{s0 t}), lower_i(t) = max(0, v*_i e^{s0 t} - q v*_i e^{eps s0 t}).
std::pair<Profile, Profile> sub_super_pair(const SpectralData& spectral,
                                           std::span<const double> K, double eps,
                                           double q, double t0, double t1, double dt);

/// Spatially independent solution Gamma(t) of u' = f(u) connecting 0 to K,
/// computed by the monotone iteration u <- F(u),
/// F_i(u)(t) = int_{-inf}^t e^{-L(t-s)} (f_i(u(s)) + L u_i(s)) ds,
/// discretized with the exponentially weighted trapezoid rule; the improper
/// tail uses the analytic decay v* e^{s0 t}. Starts at the supersolution and
/// sweeps until the sup increment drops below tol.
Profile compute_gamma(const ModelSpec& model, const SpectralData& spectral,
                      const GammaOptions& opts = {}, GammaRunInfo* info = nullptr);

struct GammaReport {
  bool residual_ok = false;
  double residual_max = 0.0;
  bool monotone_ok = false;
  double min_forward_difference = 0.0;
  bool bound_ok = false;      // Gamma(t) <= v* e^{s0 t} (+ dt^2-scale slack)
  double bound_overshoot = 0.0;
  bool tail_ok = false;       // e^{-s0 t} Gamma(t) within 2% of v* for t <= -10
  double tail_max_reldev = 0.0;
  bool ok() const { return residual_ok && monotone_ok && bound_ok && tail_ok; }
};

/// Report-only verification of a Gamma profile: ODE residual by centered
/// differences, strict monotonicity, the exponential upper bound, and the
/// left-tail decay ratio.
GammaReport verify_gamma(const ModelSpec& model, const SpectralData& spectral,
                         const Profile& gamma, double tol_res = 1e-5);

}  // namespace rdfront
