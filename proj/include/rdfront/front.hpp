#pragma once

#include "rdfront/model.hpp"
#include "rdfront/profile.hpp"
#include "rdfront/spectral.hpp"

namespace rdfront {

struct FrontOptions {
  double xi0 = -80.0;
  double xi1 = 80.0;
  double dxi = 0.02;
  double tol = 1e-8;        // stationary residual target
  int max_steps = 400000;
  double fit_lo = 1e-8;     // tail-fit window in the first component
  double fit_hi = 1e-4;
  bool normalize = true;
};

/// A traveling-front profile in the moving coordinate xi = x dot nu + c t.
struct FrontProfile {
  Profile profile;
  double c = 0.0;
  double lambda1 = 0.0;
  Vec v1;                       // v(lambda_1(c))
  double fitted_amplitude = 1.0;  // tail amplitude estimated before the shift
  double fitted_slope = 0.0;      // free-slope tail fit (diagnostic)
  double shift_applied = 0.0;
  double residual = 0.0;          // achieved stationary residual
  int steps = 0;
};

/// Computes the monostable front by relaxing d_tau Phi = D Phi'' - c Phi' + f(Phi)
/// from the supersolution min(K, v(lambda_1) e^{lambda_1 xi}) (implicit
/// diffusion-advection, explicit reaction; the iterate is pointwise
/// nonincreasing in tau, asserted per step). Requires c > c*; the CLI enforces
/// c >= 1.05 c* since near-critical tails are non-generic. Ends with the decay
/// phase normalization unless opts.normalize is false.
FrontProfile compute_front(const ModelSpec& model, const SpectralData& spectral,
                           double c, const FrontOptions& opts = {});

/// Estimates the tail amplitude on the fit window and shifts xi so that
/// Phi(xi) e^{-lambda_1 xi} -> v(lambda_1). Idempotent up to grid tolerance.
void normalize_phase(FrontProfile& front, double fit_lo = 1e-8, double fit_hi = 1e-4);

struct FrontReport {
  bool residual_ok = false;
  double residual_max = 0.0;
  bool monotone_ok = false;
  bool positive_ok = false;
  bool limits_ok = false;       // Phi(left) ~ 0, Phi(right) ~ K
  double left_norm = 0.0;
  double right_distance = 0.0;
  bool bound_ok = false;        // Phi <= v(lambda1) e^{lambda1 xi} + 1e-9
  double bound_overshoot = 0.0;
  bool tail_ok = false;         // tail ratio within 2% of v(lambda1) on the window
  double tail_max_reldev = 0.0;
  bool ok() const {
    return residual_ok && monotone_ok && positive_ok && limits_ok && bound_ok && tail_ok;
  }
};

FrontReport verify_front(const ModelSpec& model, const FrontProfile& front,
                         double tol_res = 1e-6);

}  // namespace rdfront
