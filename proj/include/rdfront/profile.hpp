#pragma once

#include <span>
#include <string>
#include <vector>

#include "rdfront/common.hpp"

namespace rdfront {

/// Analytic left tail used when evaluating a profile beyond its grid:
/// u(t) ~ amplitude * exp(rate * t) for t < t0.
struct DecayMeta {
  double rate = 0.0;
  Vec amplitude;
};

/// A sampled one-argument vector-valued function on a uniform grid.
/// Used for the spatially independent solution Gamma(t) and for front
/// profiles Phi_c(xi). Left of the grid the analytic tail applies; right
/// of the grid the last sample is held (profiles are heteroclinics, the
/// right limit is an equilibrium).
class Profile {
 public:
  Profile() = default;
  Profile(double t0, double dt, int m, std::vector<double> values, DecayMeta decay);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  int m() const { return m_; }
  int n_nodes() const { return n_; }
  double t_at(int i) const { return t0_ + dt_ * i; }
  const DecayMeta& decay() const { return decay_; }
  const std::vector<double>& raw() const { return values_; }

  std::span<const double> node(int i) const {
    return {values_.data() + static_cast<std::size_t>(i) * m_, static_cast<std::size_t>(m_)};
  }
  double value(int i, int comp) const { return values_[static_cast<std::size_t>(i) * m_ + comp]; }

  /// Linear interpolation with analytic left tail and right clamp.
  void eval(double t, std::span<double> out) const;
  Vec eval(double t) const;

  /// Shifts the argument: result(t) == old(t + shift).
  void shift_argument(double shift) { t0_ -= shift; }

  /// Componentwise nondecreasing along the grid (slack for roundoff).
  bool is_nondecreasing(double slack = 0.0) const;

  /// min over nodes/components of (box_upper - value) and of value itself.
  double min_value() const;
  double max_box_excess(std::span<const double> box_upper) const;

  void save_binary(const std::string& path) const;
  static Profile load_binary(const std::string& path);

 private:
  double t0_ = 0.0;
  double dt_ = 0.0;
  int m_ = 0;
  int n_ = 0;
  std::vector<double> values_;  // n*m row-major
  DecayMeta decay_;
};

}  // namespace rdfront
