#pragma once

#include <optional>

#include "rdfront/front.hpp"
#include "rdfront/pde.hpp"
#include "rdfront/profile.hpp"
#include "rdfront/sis.hpp"

namespace rdfront {

struct Wave {
  double c = 0.0;
  double h = 0.0;
  int nu = +1;  // direction, +1 or -1
};

enum class EntireMode { cooperative, noncooperative };

/// The parameter tuple p of the entire-solution construction plus the
/// numerical knobs of the n-schedule runs.
struct EntireConfig {
  std::vector<Wave> waves;  // l waves
  std::vector<int> chi;     // l+1 activation flags
  double h_last = 0.0;
  EntireMode mode = EntireMode::cooperative;
  std::vector<double> n_schedule = {2.0, 4.0, 6.0, 8.0};
  double t_end = 5.0;
  double dx = 0.05;
  double dt = 1e-3;
  double snap_dt = 0.5;
  double domain_halfwidth = 0.0;  // 0 = auto: max_c (n_max + t_end) + 40
  double window_halfwidth = 0.0;  // 0 = auto: domain minus contamination buffer
  bool subsolution_floor = true;  // discrete rendering of u_lower <= U
  double tol_order = 1e-8;        // scheme-level ordering assertions
  double tol_sandwich = 1e-3;     // discretization-level sandwich margins

  int l() const { return static_cast<int>(waves.size()); }
  bool sis_active() const { return chi.back() != 0; }
  int active_count() const;
  double n_max() const { return n_schedule.back(); }
  void validate(const SpectralData& spectral) const;
  double resolved_domain_halfwidth() const;
  double resolved_window_halfwidth(double max_diffusion) const;
};

/// Precomputed ingredients: one front profile per wave (entries for inactive
/// waves are ignored) and the spatially independent solution. In
/// non-cooperative mode these are the profiles of the lower envelope system.
struct EntireProfiles {
  std::vector<FrontProfile> fronts;
  Profile gamma;
};

/// The moving lower envelope
/// u_lower(x,t) = max( max_i chi_i Phi_i(nu_i x + c_i t + h_i), chi_{l+1} Gamma(t+h_last) ).
class LowerEnvelope {
 public:
  LowerEnvelope(const EntireConfig& config, const EntireProfiles& profiles);
  void eval(double x, double t, std::span<double> out) const;
  int m() const { return m_; }

 private:
  const EntireConfig* config_;
  const EntireProfiles* profiles_;
  int m_ = 0;
};

/// Initial data of the level-n run: the lower envelope at t = -n.
Field initial_data(const EntireConfig& config, const EntireProfiles& profiles,
                   double n, const Grid& grid);

/// The exponential upper estimate
/// Pi(x,t) = sum_i chi_i v(lambda_1(c_i)) e^{lambda_1(c_i)(nu_i x + c_i t + h_i)}
///           + chi_{l+1} v* e^{s0 (t + h_last)}.
Vec pi_bound(const EntireConfig& config, const SpectralData& spectral, double x,
             double t);

struct SnapshotSet {
  Grid grid;
  int m = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> fields;  // values per time, n_nodes x m
  int index_of(double t) const;
};

struct SandwichReport {
  // min over window and steps of (pre-floor step result - u_lower): the
  // honest discrete-subsolution slack, negative when the raw scheme dips
  // below the envelope.
  double lower_margin = 0.0;
  double lower_at_x = 0.0, lower_at_t = 0.0;
  // min over window snapshots of (min(K_upper, Pi) - U)
  double upper_margin = 0.0;
  double upper_at_x = 0.0, upper_at_t = 0.0;
  std::vector<double> n_increments;  // sup |U^{n+1}-U^n| on shared snapshots
  bool monotone_in_n_ok = true;
  double worst_n_violation = 0.0;
  bool monotone_in_t_ok = true;
  double min_time_forward_difference = 0.0;
  double floor_lift_fraction = 0.0;  // fraction of node-steps raised by the floor
  double end_liminf_gap = 0.0;       // min over window of (U(t_end) - K_lower_target)
  bool ok(double tol_sandwich, double tol_order, EntireMode mode) const;
};

struct EntireResult {
  SnapshotSet snapshots;  // largest-n member of the family
  SandwichReport report;
};

/// Runs the n-schedule, asserting (cooperative mode) that the family is
/// nondecreasing in n on shared snapshots, that the sandwich
/// u_lower <= U^n <= min(K, Pi) holds on the interior window, and that the
/// per-n increments shrink. Returns the largest-n trajectory.
/// `K_liminf_target` (non-cooperative mode) is K^- for the end-state check.
EntireResult construct(const EntireConfig& config, const ModelSpec& model,
                       const EntireProfiles& profiles, const SpectralData& spectral,
                       const Vec* K_liminf_target = nullptr);

struct QualitativeReport {
  bool positive_ok = false;       // 0 << U on the window
  double min_value = 0.0;
  bool below_K_ok = false;        // U << K on the window (cooperative)
  double min_gap_to_K = 0.0;
  bool time_monotone_ok = false;  // strictly increasing in t on the window
  double fitted_exponent = 0.0;
  double expected_exponent = 0.0;
  bool exponent_ok = false;       // within 5%
  double fit_x = 0.0;
  double earliest_sup_near_origin = 0.0;  // sup_{|x|<=5} |U| at the earliest snapshot
  bool decay_to_zero_ok = false;
};

QualitativeReport verify_qualitative(const SnapshotSet& snaps,
                                     const EntireConfig& config,
                                     const ModelSpec& model,
                                     const SpectralData& spectral);

struct PairOrderingReport {
  bool ordered = true;
  double worst_violation = 0.0;
  double sup_difference = 0.0;
};

/// Reruns with h_i increased by delta_h (index l = SIS shift) and checks
/// U(h + delta) >= U(h) on shared snapshots.
PairOrderingReport monotone_in_h(const EntireConfig& config, const ModelSpec& model,
                                 const EntireProfiles& profiles,
                                 const SpectralData& spectral, int wave_index,
                                 double delta_h);

struct DiffBoundReport {
  bool nonnegative_ok = true;
  double worst_negative = 0.0;
  bool bound_ok = true;
  double worst_bound_excess = 0.0;  // max of (W - envelope - tol)
  double sup_diff_left_halfplane = 0.0;  // sup of W on {x nu_1 <= 0} in the window
};

/// Theorem-2.10-style difference bound: runs config and the same config with
/// chi_1 zeroed; asserts 0 <= U_p0 - U_p1 <= v(l1) e^{l1 (nu_1 x + c_1 t + h_1)}
/// + tol on shared window snapshots. Requires f'(u) <= f'(0) on [0,K]
/// (sampled); refuses the run otherwise.
DiffBoundReport diff_bound(const EntireConfig& config_p0, const ModelSpec& model,
                           const EntireProfiles& profiles,
                           const SpectralData& spectral);

}  // namespace rdfront
