#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "rdfront/common.hpp"

namespace rdfront {

/// Bisection on [lo, hi]; f(lo) and f(hi) must have opposite signs.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-12);

/// Finds a sign change of f by doubling from `start`, then bisects.
/// Scans s = start, 2*start, ... up to `cap`.
double bracket_and_bisect(const std::function<double(double)>& f, double start,
                          double cap, double xtol = 1e-12);

/// Golden-section minimizer on [a, b] for a unimodal f; tolerance in x.
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double xtol = 1e-10);

/// Halton low-discrepancy sequence, one coordinate.
double halton(std::uint64_t index, std::uint32_t base);

/// Fills `out` (dims entries) with the Halton point of the given index.
/// Deterministic; a seed is folded in as an index offset.
void halton_point(std::uint64_t index, std::uint64_t seed, std::span<double> out);

/// Central-difference Jacobian of `f` at `u`, steps scaled per component.
/// Result is row-major m x m.
std::vector<double> fd_jacobian(const Reaction& f, std::span<const double> u,
                                double step = 1e-6);

/// Least-squares line fit y ~ slope*x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Constant-coefficient tridiagonal solver (Thomas), factorized once.
/// Rows 0 and n-1 are identity rows (Dirichlet).
class TridiagonalSolver {
 public:
  TridiagonalSolver() = default;
  /// Interior rows: lower*u[i-1] + diag*u[i] + upper*u[i+1] = rhs[i].
  TridiagonalSolver(int n, double lower, double diag, double upper);
  void solve(std::span<double> rhs_inout) const;
  int size() const { return n_; }

 private:
  int n_ = 0;
  double lower_ = 0.0;
  std::vector<double> cprime_;  // modified upper coefficients
  std::vector<double> inv_diag_;
};

/// FNV-1a 64-bit hash (stable across platforms; used for config digests).
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull);
std::string hex64(std::uint64_t h);

}  // namespace rdfront
