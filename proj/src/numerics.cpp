#include "rdfront/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rdfront {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw numeric_error("bisect: no sign change on bracket");
  for (int it = 0; it < 200 && (hi - lo) > xtol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double bracket_and_bisect(const std::function<double(double)>& f, double start,
                          double cap, double xtol) {
  double a = start;
  double fa = f(a);
  if (fa == 0.0) return a;
  double b = a;
  for (;;) {
    b *= 2.0;
    if (b > cap) throw numeric_error("bracket_and_bisect: no sign change up to cap");
    double fb = f(b);
    if (fb == 0.0) return b;
    if ((fa > 0) != (fb > 0)) return bisect(f, a, b, xtol);
    a = b;
    fa = fb;
  }
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double xtol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double halton(std::uint64_t index, std::uint32_t base) {
  double f = 1.0;
  double r = 0.0;
  std::uint64_t i = index;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

void halton_point(std::uint64_t index, std::uint64_t seed, std::span<double> out) {
  static constexpr std::uint32_t primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                             23, 29, 31, 37, 41, 43, 47, 53};
  const std::uint64_t idx = index + 1 + (seed % 8191) * 131;
  for (std::size_t d = 0; d < out.size(); ++d)
    out[d] = halton(idx, primes[d % (sizeof(primes) / sizeof(primes[0]))]);
}

std::vector<double> fd_jacobian(const Reaction& f, std::span<const double> u,
                                double step) {
  const int m = static_cast<int>(u.size());
  std::vector<double> jac(m * m);
  Vec up(u.begin(), u.end()), um(u.begin(), u.end()), fp(m), fm(m);
  for (int j = 0; j < m; ++j) {
    const double h = step * std::max(1.0, std::abs(u[j]));
    up[j] = u[j] + h;
    um[j] = u[j] - h;
    f(up, fp);
    f(um, fm);
    for (int i = 0; i < m; ++i) jac[i * m + j] = (fp[i] - fm[i]) / (2.0 * h);
    up[j] = u[j];
    um[j] = u[j];
  }
  return jac;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2) throw numeric_error("fit_line: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  LineFit out;
  out.slope = (n * sxy - sx * sy) / denom;
  out.intercept = (sy - out.slope * sx) / n;
  return out;
}

TridiagonalSolver::TridiagonalSolver(int n, double lower, double diag, double upper)
    : n_(n), lower_(lower), cprime_(n), inv_diag_(n) {
  if (n < 3) throw numeric_error("tridiagonal: need n >= 3");
  // Row 0 is identity; eliminate forward once, coefficients are reusable.
  cprime_[0] = 0.0;
  inv_diag_[0] = 1.0;
  for (int i = 1; i < n - 1; ++i) {
    const double denom = diag - lower * cprime_[i - 1];
    inv_diag_[i] = 1.0 / denom;
    cprime_[i] = upper * inv_diag_[i];
  }
  const double denom = 1.0;  // identity last row
  inv_diag_[n - 1] = 1.0 / denom;
  cprime_[n - 1] = 0.0;
}

void TridiagonalSolver::solve(std::span<double> rhs) const {
  // forward sweep (row 0 untouched, last row identity)
  for (int i = 1; i < n_ - 1; ++i)
    rhs[i] = (rhs[i] - lower_ * rhs[i - 1]) * inv_diag_[i];
  // back substitution
  for (int i = n_ - 2; i >= 1; --i) rhs[i] -= cprime_[i] * rhs[i + 1];
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace rdfront
