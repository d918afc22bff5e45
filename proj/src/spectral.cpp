#include "rdfront/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "rdfront/numerics.hpp"

namespace rdfront {

namespace {

constexpr double kPowerTol = 1e-13;
constexpr int kPowerCap = 100000;

// Strongly connected components (Tarjan) of the sparsity digraph of A:
// edge j -> i when A[i][j] != 0, i != j. Returns components in topological
// order of dependencies: a component only receives input from earlier ones
// iff the matrix is in block lower triangular form under that ordering.
std::vector<std::vector<int>> scc_blocks(const std::vector<double>& A, int m) {
  std::vector<std::vector<int>> adj(m);  // adj[u] = nodes that depend on u? use u->w edges
  // For Tarjan we need plain directed edges; take i -> j when A[i][j] != 0
  // (row i depends on column j).
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && A[i * m + j] != 0.0) adj[i].push_back(j);

  std::vector<int> index(m, -1), low(m, 0), stk;
  std::vector<char> on(m, 0);
  std::vector<std::vector<int>> comps;
  int counter = 0;

  // iterative Tarjan
  struct Frame {
    int v;
    std::size_t ei;
  };
  for (int root = 0; root < m; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stk.push_back(root);
    on[root] = 1;
    while (!call.empty()) {
      auto& fr = call.back();
      if (fr.ei < adj[fr.v].size()) {
        int w = adj[fr.v][fr.ei++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stk.push_back(w);
          on[w] = 1;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[fr.v] = std::min(low[fr.v], index[w]);
        }
      } else {
        int v = fr.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        if (low[v] == index[v]) {
          std::vector<int> comp;
          for (;;) {
            int w = stk.back();
            stk.pop_back();
            on[w] = 0;
            comp.push_back(w);
            if (w == v) break;
          }
          comps.push_back(std::move(comp));
        }
      }
    }
  }
  // Tarjan emits components in reverse topological order of the digraph
  // i -> j ("i depends on j"): dependencies come later. Reverse so that
  // sources (self-contained blocks) come first.
  // A component C1 before C2 must satisfy: no i in C1 depends on j in C2.
  std::reverse(comps.begin(), comps.end());
  // Kahn-verify and fix ordering (robustness for arbitrary patterns).
  const int nc = static_cast<int>(comps.size());
  std::vector<int> comp_of(m);
  for (int c = 0; c < nc; ++c)
    for (int v : comps[c]) comp_of[v] = c;
  std::vector<int> indeg(nc, 0);
  std::vector<std::vector<int>> cadj(nc);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && A[i * m + j] != 0.0 && comp_of[i] != comp_of[j]) {
        cadj[comp_of[j]].push_back(comp_of[i]);
        ++indeg[comp_of[i]];
      }
  std::vector<int> order;
  std::vector<int> q;
  for (int c = 0; c < nc; ++c)
    if (indeg[c] == 0) q.push_back(c);
  while (!q.empty()) {
    std::sort(q.begin(), q.end());
    int c = q.front();
    q.erase(q.begin());
    order.push_back(c);
    for (int w : cadj[c])
      if (--indeg[w] == 0) q.push_back(w);
  }
  std::vector<std::vector<int>> sorted;
  sorted.reserve(nc);
  for (int c : order) sorted.push_back(comps[c]);
  return sorted;
}

void check_cooperative_matrix(const std::vector<double>& A, int m) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && A[i * m + j] < 0.0)
        throw assumption_error("principal_eigenpair: matrix is not cooperative");
}

// Power iteration on the nonnegative shift A + sigma*I restricted to `idx`.
// Stopping uses the Collatz-Wielandt enclosure min_i (Bv)_i/v_i <= perron <=
// max_i (Bv)_i/v_i, so the converged eigenvalue carries a residual bound.
Eigenpair power_iteration(const std::vector<double>& A, int m,
                          const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  if (k == 1) return {A[idx[0] * m + idx[0]], Vec{1.0}};
  double min_diag = 0.0;
  for (int a = 0; a < k; ++a) min_diag = std::min(min_diag, A[idx[a] * m + idx[a]]);
  const double sigma = 1.0 + std::max(0.0, -min_diag);
  Vec v(k, 1.0), w(k);
  for (int it = 0; it < kPowerCap; ++it) {
    double lo = 1e300, hi = -1e300, nrm = 0.0;
    for (int a = 0; a < k; ++a) {
      double s = sigma * v[a];
      for (int b = 0; b < k; ++b) s += A[idx[a] * m + idx[b]] * v[b];
      w[a] = s;
      const double q = s / v[a];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
      nrm = std::max(nrm, std::abs(s));
    }
    for (int a = 0; a < k; ++a) w[a] /= nrm;
    std::swap(v, w);
    if (hi - lo < kPowerTol * std::max(1.0, hi))
      return {0.5 * (lo + hi) - sigma, v};
  }
  throw numeric_error("principal_eigenpair: power iteration did not converge");
}

// Largest real root of the characteristic polynomial, m <= 3 (cross-check).
double char_poly_max_real_root(const std::vector<double>& A, int m) {
  if (m == 1) return A[0];
  if (m == 2) {
    const double tr = A[0] + A[3];
    const double det = A[0] * A[3] - A[1] * A[2];
    const double disc = tr * tr - 4.0 * det;
    if (disc < 0.0) throw numeric_error("char poly: complex principal eigenvalue");
    return 0.5 * (tr + std::sqrt(disc));
  }
  // m == 3: lambda^3 - c2 lambda^2 + c1 lambda - c0
  const double a = A[0], b = A[1], c = A[2], d = A[3], e = A[4], f = A[5],
               g = A[6], h = A[7], i = A[8];
  const double c2 = a + e + i;
  const double c1 = (a * e - b * d) + (a * i - c * g) + (e * i - f * h);
  const double c0 = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
  // roots of x^3 + px + q after depressing with x = y + c2/3
  const double p = c1 - c2 * c2 / 3.0;
  const double q = -c0 + c1 * c2 / 3.0 - 2.0 * c2 * c2 * c2 / 27.0;
  // x^3 + p x + q = 0; take max real root
  const double discr = q * q / 4.0 + p * p * p / 27.0;
  double best;
  if (discr >= 0) {
    const double s = std::sqrt(discr);
    const double u = std::cbrt(-q / 2.0 + s), w = std::cbrt(-q / 2.0 - s);
    best = u + w;
  } else {
    const double r = std::sqrt(-p * p * p / 27.0);
    const double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
    best = -1e300;
    for (int k3 = 0; k3 < 3; ++k3)
      best = std::max(best, 2.0 * std::sqrt(-p / 3.0) * std::cos((phi + 2.0 * M_PI * k3) / 3.0));
  }
  return best + c2 / 3.0;
}

}  // namespace

std::vector<double> assemble_A(const ModelSpec& model, double lambda) {
  if (lambda < 0.0) throw config_error("assemble_A: lambda must be >= 0");
  const int m = model.m;
  std::vector<double> A = model.jacobian0;
  for (int i = 0; i < m; ++i) A[i * m + i] += model.diffusion[i] * lambda * lambda;
  return A;
}

SpectralStructure detect_structure(const ModelSpec& model) {
  auto blocks = scc_blocks(model.jacobian0, model.m);
  return blocks.size() == 1 ? SpectralStructure::irreducible_cooperative
                            : SpectralStructure::block_lower_triangular;
}

Eigenpair principal_eigenpair(const std::vector<double>& A, int m,
                              SpectralStructure structure) {
  check_cooperative_matrix(A, m);
  Eigenpair out;
  if (m == 1) {
    out.value = A[0];
    out.vector = {1.0};
    return out;
  }
  if (structure == SpectralStructure::irreducible_cooperative) {
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    out = power_iteration(A, m, all);
  } else {
    auto blocks = scc_blocks(A, m);
    // principal eigenvalue per block; the dominant one must be the first
    // block and strictly dominate the others.
    std::vector<Eigenpair> per;
    per.reserve(blocks.size());
    for (auto& blk : blocks) per.push_back(power_iteration(A, m, blk));
    std::size_t dominant = 0;
    for (std::size_t b = 1; b < per.size(); ++b)
      if (per[b].value > per[dominant].value) dominant = b;
    const double M = per[dominant].value;
    for (std::size_t b = 0; b < per.size(); ++b) {
      if (b == dominant) continue;
      if (!(per[b].value < M - 1e-10 * std::max(1.0, std::abs(M))))
        throw assumption_error(
            "A1b violation: principal eigenvalue is not strictly dominant");
    }
    // back-substitute the eigenvector downstream of the dominant block:
    // (M I - A_bb) v_b = sum_{earlier} A_bc v_c.
    Vec v(m, 0.0);
    for (std::size_t a = 0; a < blocks[dominant].size(); ++a)
      v[blocks[dominant][a]] = per[dominant].vector[a];
    for (std::size_t b = dominant + 1; b < blocks.size(); ++b) {
      const auto& blk = blocks[b];
      const int k = static_cast<int>(blk.size());
      Vec rhs(k, 0.0);
      for (int a = 0; a < k; ++a)
        for (int j = 0; j < m; ++j)
          if (std::find(blk.begin(), blk.end(), j) == blk.end())
            rhs[a] += A[blk[a] * m + j] * v[j];
      // solve (M I - A_bb) x = rhs by Gaussian elimination (k <= m <= 4)
      std::vector<double> B(k * k);
      for (int a = 0; a < k; ++a)
        for (int c = 0; c < k; ++c) B[a * k + c] = (a == c ? M : 0.0) - A[blk[a] * m + blk[c]];
      for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
          if (std::abs(B[r * k + col]) > std::abs(B[piv * k + col])) piv = r;
        if (std::abs(B[piv * k + col]) < 1e-300)
          throw numeric_error("principal_eigenpair: singular back-substitution block");
        if (piv != col) {
          for (int c = 0; c < k; ++c) std::swap(B[piv * k + c], B[col * k + c]);
          std::swap(rhs[piv], rhs[col]);
        }
        for (int r = col + 1; r < k; ++r) {
          const double fct = B[r * k + col] / B[col * k + col];
          for (int c = col; c < k; ++c) B[r * k + c] -= fct * B[col * k + c];
          rhs[r] -= fct * rhs[col];
        }
      }
      for (int r = k - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < k; ++c) s -= B[r * k + c] * rhs[c];
        rhs[r] = s / B[r * k + r];
      }
      for (int a = 0; a < k; ++a) v[blk[a]] = rhs[a];
    }
    out.value = M;
    out.vector = std::move(v);
  }
  // normalize to max-norm 1, positive orientation
  double mx = 0.0;
  for (double x : out.vector) mx = std::max(mx, std::abs(x));
  if (mx == 0.0) throw numeric_error("principal_eigenpair: zero eigenvector");
  for (double& x : out.vector) x /= mx;
  for (double x : out.vector)
    if (!(x > 0.0))
      throw assumption_error("principal_eigenpair: eigenvector is not strictly positive");
  // cross-check against the characteristic polynomial for small m
  if (m <= 3) {
    const double root = char_poly_max_real_root(A, m);
    if (std::abs(root - out.value) > 1e-9 * std::max(1.0, std::abs(root)))
      throw numeric_error("principal_eigenpair: char-poly cross-check failed");
  }
  return out;
}

SpectralData::SpectralData(const ModelSpec& model, SpectralStructure structure)
    : m_(model.m),
      diffusion_(model.diffusion),
      jacobian0_(model.jacobian0),
      structure_(structure) {}

double SpectralData::M(double lambda) const {
  return eigenpair(lambda).value;
}

Vec SpectralData::v(double lambda) const {
  return eigenpair(lambda).vector;
}

Eigenpair SpectralData::eigenpair(double lambda) const {
  if (lambda < 0.0) throw config_error("spectral: lambda must be >= 0");
  std::vector<double> A = jacobian0_;
  for (int i = 0; i < m_; ++i) A[i * m_ + i] += diffusion_[i] * lambda * lambda;
  return principal_eigenpair(A, m_, structure_);
}

SpectralData compute_cstar(const ModelSpec& model) {
  SpectralData sd(model, detect_structure(model));
  const Eigenpair at0 = sd.eigenpair(0.0);
  if (!(at0.value > 0.0))
    throw assumption_error("monostability violation: s(f'(0)) <= 0");
  sd.s0_ = at0.value;
  sd.v_star_ = at0.vector;

  // Expand the probe list [1e-6, 1, 2, 4, ...] until M(l)/l has risen for
  // three consecutive probes, then golden-section around the best probe.
  auto g = [&](double l) { return sd.M(l) / l; };
  std::vector<double> ls{1e-6, 0.25, 0.5, 1.0};
  std::vector<double> gs;
  for (double l : ls) gs.push_back(g(l));
  int rises = 0;
  while (rises < 3) {
    const double next = ls.back() * 2.0;
    if (next > 1e3)
      throw numeric_error("compute_cstar: no interior minimum found on the scan");
    ls.push_back(next);
    gs.push_back(g(next));
    rises = gs[gs.size() - 1] > gs[gs.size() - 2] ? rises + 1 : 0;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < gs.size(); ++i)
    if (gs[i] < gs[best]) best = i;
  const double lo = best == 0 ? 1e-6 : ls[best - 1];
  const double hi = best + 1 < ls.size() ? ls[best + 1] : ls.back();
  double lstar = golden_min(g, lo, hi, 1e-10);
  // Golden section is noise-limited to ~sqrt(eps) near the flat minimum;
  // polish the minimizer with a three-point parabola vertex.
  for (double delta : {1e-4, 1e-6}) {
    const double gm = g(lstar - delta), g0 = g(lstar), gp = g(lstar + delta);
    const double denom = gm - 2.0 * g0 + gp;
    if (denom > 0.0) {
      const double step = 0.5 * delta * (gm - gp) / denom;
      if (std::abs(step) < 2.0 * delta) lstar += step;
    }
  }
  sd.lambda_star_ = lstar;
  sd.c_star_ = g(lstar);
  return sd;
}

double compute_lambda1(const SpectralData& spectral, double c) {
  if (!(c > spectral.c_star()))
    throw config_error("compute_lambda1: speed below critical (c <= c*)");
  auto f = [&](double l) { return spectral.M(l) - c * l; };
  // f > 0 near 0 (f(0+) = M(0) > 0) and f(lambda_star) = lambda_star (c*-c) < 0.
  return bisect(f, 1e-12, spectral.lambda_star(), 1e-13);
}

}  // namespace rdfront
