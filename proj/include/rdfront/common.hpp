#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdfront {

using Vec = std::vector<double>;

/// Pointwise reaction term: reads u (m entries), writes f(u) (m entries).
using Reaction = std::function<void(std::span<const double>, std::span<double>)>;

/// Bad or inconsistent user input (config files, parameters). Exit code 4.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A hypothesis the algorithms rely on fails for the given model. Exit code 2.
class assumption_error : public std::runtime_error {
 public:
  explicit assumption_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: non-convergence, instability, verification miss. Exit code 3.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

inline double max_abs(std::span<const double> v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

inline double max_norm_diff(std::span<const double> a, std::span<const double> b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

}  // namespace rdfront
