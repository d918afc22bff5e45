#include "rdfront/checker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rdfront/numerics.hpp"

namespace rdfront {

namespace {

std::string point_str(std::span<const double> u) {
  std::string s = "(";
  char buf[32];
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g", u[i]);
    s += buf;
    if (i + 1 < u.size()) s += ", ";
  }
  return s + ")";
}

}  // namespace

CheckEntry check_cooperative(const Reaction& reaction, int m,
                             std::span<const double> box_upper, long samples,
                             std::uint64_t seed) {
  CheckEntry e;
  e.name = "cooperative";
  e.samples = samples;
  e.margin = 1e300;
  Vec u(m), fp(m), fm(m);
  for (long s = 0; s < samples; ++s) {
    halton_point(static_cast<std::uint64_t>(s), seed, u);
    for (int i = 0; i < m; ++i) u[i] *= box_upper[i];
    for (int j = 0; j < m; ++j) {
      const double h = 1e-6 * std::max(1.0, box_upper[j]);
      Vec up(u), um(u);
      up[j] = std::min(u[j] + h, box_upper[j]);
      um[j] = std::max(u[j] - h, 0.0);
      reaction(up, fp);
      reaction(um, fm);
      for (int i = 0; i < m; ++i) {
        if (i == j) continue;
        const double deriv = (fp[i] - fm[i]) / (up[j] - um[j]);
        e.margin = std::min(e.margin, deriv);
        if (deriv < -1e-8 && e.status != CheckStatus::fail) {
          e.status = CheckStatus::fail;
          e.counterexample = u;
          char buf[128];
          std::snprintf(buf, sizeof buf, "d f_%d / d u_%d = %.3e < 0 at %s", i + 1,
                        j + 1, deriv, point_str(u).c_str());
          e.detail = buf;
        }
      }
    }
  }
  if (e.status == CheckStatus::pass) e.detail = "off-diagonal partials nonnegative";
  return e;
}

CheckEntry check_subhomog(const Reaction& reaction,
                          const std::vector<double>& jacobian0,
                          const SpectralData& spectral,
                          std::span<const double> K_upper, int k_max, long samples,
                          std::uint64_t seed) {
  CheckEntry e;
  e.name = "subhomogeneity";
  e.margin = 1e300;
  const int m = spectral.m();
  double knorm = 0.0;
  for (double x : K_upper) knorm = std::max(knorm, x);
  const double rho_max = 10.0 * knorm;
  const double rho_min = 1e-6;
  // The exponents used downstream are lambda_1(c) in (0, lambda_star) and 0;
  // cover both readings of the lambda range by taking the larger of
  // lambda_star and M(0).
  const double lam_hi = std::max(spectral.lambda_star(), spectral.s0());

  Vec w(m), arg(m), lhs(m), rhs(m);
  long total = 0;
  for (int k = 1; k <= k_max; ++k) {
    Vec pt(2 * k);
    for (long s = 0; s < samples; ++s, ++total) {
      halton_point(static_cast<std::uint64_t>(s), seed + 17 * k, pt);
      std::fill(w.begin(), w.end(), 0.0);
      for (int j = 0; j < k; ++j) {
        const double rho =
            rho_min * std::pow(rho_max / rho_min, pt[2 * j]);  // log-spaced
        const double lam = lam_hi * pt[2 * j + 1];
        Vec vj = spectral.v(lam);
        for (int i = 0; i < m; ++i) w[i] += rho * vj[i];
      }
      for (int i = 0; i < m; ++i) arg[i] = std::min(K_upper[i], w[i]);
      reaction(arg, lhs);
      for (int i = 0; i < m; ++i) {
        double s2 = 0.0;
        for (int j = 0; j < m; ++j) s2 += jacobian0[i * m + j] * w[j];
        rhs[i] = s2;
      }
      for (int i = 0; i < m; ++i) {
        const double gap = rhs[i] - lhs[i];
        e.margin = std::min(e.margin, gap);
        if (gap < -1e-9 && e.status != CheckStatus::fail) {
          e.status = CheckStatus::fail;
          e.counterexample = arg;
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "component %d: f(min(K,w)) exceeds f'(0)w by %.3e (k=%d)",
                        i + 1, -gap, k);
          e.detail = buf;
        }
      }
    }
  }
  e.samples = total;
  if (e.status == CheckStatus::pass) {
    e.status = CheckStatus::heuristic_pass;  // finite sampling of an unbounded family
    e.detail = "holds at all sampled (rho, lambda) combinations";
  }
  return e;
}

CheckEntry check_envelope_order(const ModelSpec& model, const EnvelopePair& env,
                                long samples, std::uint64_t seed) {
  CheckEntry e;
  e.name = "envelope-order";
  e.samples = samples;
  e.margin = 1e300;
  const int m = model.m;
  for (int i = 0; i < m; ++i) {
    if (!(env.K_minus[i] > 0.0) || env.K_minus[i] > model.K[i] + 1e-12 ||
        model.K[i] > env.K_plus[i] + 1e-12) {
      e.status = CheckStatus::fail;
      e.counterexample = model.K;
      e.detail = "equilibrium ordering 0 << K- <= K <= K+ fails";
      return e;
    }
  }
  Vec u(m), flo(m), fmid(m), fhi(m);
  for (long s = 0; s < samples; ++s) {
    halton_point(static_cast<std::uint64_t>(s), seed, u);
    for (int i = 0; i < m; ++i) u[i] *= env.K_plus[i];
    env.f_minus(u, flo);
    model.reaction(u, fmid);
    env.f_plus(u, fhi);
    for (int i = 0; i < m; ++i) {
      const double g1 = fmid[i] - flo[i];
      const double g2 = fhi[i] - fmid[i];
      e.margin = std::min({e.margin, g1, g2});
      if ((g1 < -1e-9 || g2 < -1e-9) && e.status != CheckStatus::fail) {
        e.status = CheckStatus::fail;
        e.counterexample = u;
        e.detail = "envelope ordering f- <= f <= f+ fails at " + point_str(u);
      }
    }
  }
  if (e.status == CheckStatus::pass) e.detail = "f- <= f <= f+ on sampled box";
  return e;
}

AssumptionReport check_H1_H2(const ModelSpec& model, long samples) {
  const auto* ep = std::get_if<EpidemicParams>(&model.details);
  if (!ep) throw config_error("check_H1_H2: not an epidemic model");
  AssumptionReport rep;

  CheckEntry h1;
  h1.name = "H1";
  h1.samples = samples;
  h1.margin = 1e300;
  // g(0)=0, g(k) = beta/gamma k, g > (beta/gamma) u on (0,k), g <= g'(0) u.
  const double slope = ep->beta / ep->gamma;
  const double resid = std::abs(ep->g(ep->k) - slope * ep->k);
  if (resid > 1e-9) {
    h1.status = CheckStatus::fail;
    h1.detail = "g(k) != (beta/gamma) k";
    h1.counterexample = Vec{ep->k};
  }
  for (long s = 1; s < samples && h1.status != CheckStatus::fail; ++s) {
    const double u = ep->k * s / static_cast<double>(samples);
    const double over = ep->g(u) - slope * u;          // must be > 0 interior
    const double under = ep->gprime0 * u - ep->g(u);   // must be >= 0
    h1.margin = std::min({h1.margin, over, under});
    if (over <= 0.0 || under < -1e-12) {
      h1.status = CheckStatus::fail;
      h1.counterexample = Vec{u};
      h1.detail = over <= 0.0 ? "g(u) <= (beta/gamma)u inside (0,k)"
                              : "g(u) > g'(0)u on [0,k]";
    }
  }
  if (h1.status == CheckStatus::pass) h1.detail = "slope and linear-bound conditions hold";
  rep.entries.push_back(h1);

  CheckEntry h2;
  h2.name = ep->g_kind == GKind::g1 ? "H2a" : "H2b";
  h2.samples = samples;
  h2.margin = 1e300;
  const double hi = std::isfinite(ep->u_max) ? 2.0 * ep->u_max : 2.0 * ep->k;
  double prev = 0.0;
  for (long s = 1; s <= samples; ++s) {
    const double u = hi * s / static_cast<double>(samples);
    const double gu = ep->g(u);
    const bool increasing_region = !std::isfinite(ep->u_max) || u <= ep->u_max;
    const double step = increasing_region ? gu - prev : prev - gu;
    h2.margin = std::min(h2.margin, step);
    if (step < -1e-12 && h2.status != CheckStatus::fail) {
      h2.status = CheckStatus::fail;
      h2.counterexample = Vec{u};
      h2.detail = "monotonicity pattern around u_max violated";
    }
    prev = gu;
  }
  if (h2.status == CheckStatus::pass)
    h2.detail = std::isfinite(ep->u_max)
                    ? (ep->k <= ep->u_max ? "unimodal with k <= u_max (cooperative regime)"
                                          : "unimodal with k > u_max (non-cooperative regime)")
                    : "g increasing on (0, inf)";
  rep.entries.push_back(h2);
  return rep;
}

AssumptionReport check_A0(const ModelSpec& model, long rays, std::uint64_t seed) {
  AssumptionReport rep;
  const int m = model.m;

  CheckEntry eq;
  eq.name = "A0-equilibria";
  Vec zero(m, 0.0);
  const double f0 = max_abs(model.eval(zero));
  const double fK = max_abs(model.eval(model.K));
  eq.margin = -std::max(f0, fK);
  if (f0 != 0.0 || fK > 1e-10) {
    eq.status = CheckStatus::fail;
    eq.counterexample = f0 != 0.0 ? zero : model.K;
    eq.detail = "f(0) or f(K) not an equilibrium within tolerance";
  } else {
    eq.detail = "f(0) = 0 exactly, |f(K)| <= 1e-10";
  }
  rep.entries.push_back(eq);

  // Interior-uniqueness heuristic: along random rays s -> s * (r .* K),
  // look for an interior point where every component of f changes sign
  // simultaneously between consecutive samples.
  CheckEntry uniq;
  uniq.name = "A0-interior-uniqueness";
  uniq.samples = rays;
  Vec dir(m), u(m), fu(m);
  const int per_ray = 64;
  long suspicious = 0;
  for (long r = 0; r < rays; ++r) {
    halton_point(static_cast<std::uint64_t>(r), seed + 1, dir);
    for (int i = 0; i < m; ++i) dir[i] = (0.05 + 0.95 * dir[i]) * model.K[i];
    std::vector<int> prev_sign(m, 0);
    for (int s = 1; s < per_ray; ++s) {
      const double frac = s / static_cast<double>(per_ray);
      for (int i = 0; i < m; ++i) u[i] = frac * dir[i];
      model.reaction(u, fu);
      bool all_flipped = true;
      for (int i = 0; i < m; ++i) {
        const int sign = fu[i] > 0 ? 1 : (fu[i] < 0 ? -1 : 0);
        if (s == 1 || prev_sign[i] == 0 || sign == 0 || sign == prev_sign[i])
          all_flipped = false;
        prev_sign[i] = sign;
      }
      if (all_flipped && frac < 1.0 - 1.5 / per_ray) ++suspicious;
    }
  }
  uniq.margin = -static_cast<double>(suspicious);
  uniq.status = CheckStatus::heuristic_pass;
  if (suspicious > 0) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "%ld interior simultaneous sign flips observed (possible interior equilibrium)",
                  suspicious);
    uniq.detail = buf;
  } else {
    uniq.detail = "no interior equilibrium candidate along sampled rays";
  }
  rep.entries.push_back(uniq);
  return rep;
}

CheckEntry check_A1(const ModelSpec& model, const SpectralData& spectral) {
  CheckEntry e;
  e.name = spectral.structure() == SpectralStructure::irreducible_cooperative
               ? "A1a"
               : "A1b";
  e.margin = spectral.s0();
  if (!(spectral.s0() > 0.0)) {
    e.status = CheckStatus::fail;
    e.detail = "s(f'(0)) <= 0";
    e.counterexample = Vec(model.m, 0.0);
    return e;
  }
  // Positive eigenvector and, in the block case, dominance along the scan grid.
  const double lam_hi = 2.0 * spectral.lambda_star();
  const int grid = 41;
  try {
    for (int i = 0; i <= grid; ++i) {
      const double lam = lam_hi * i / grid;
      Eigenpair p = spectral.eigenpair(lam);  // throws on dominance/positivity failure
      // residual invariant
      const int m = model.m;
      auto A = assemble_A(model, lam);
      double res = 0.0;
      for (int r = 0; r < m; ++r) {
        double s = 0.0;
        for (int c = 0; c < m; ++c) s += A[r * m + c] * p.vector[c];
        res = std::max(res, std::abs(s - p.value * p.vector[r]));
      }
      if (res > 1e-10) {
        e.status = CheckStatus::fail;
        e.detail = "eigen residual above 1e-10 on the scan";
        return e;
      }
    }
  } catch (const assumption_error& err) {
    e.status = CheckStatus::fail;
    e.detail = err.what();
    return e;
  }
  e.status = spectral.structure() == SpectralStructure::block_lower_triangular
                 ? CheckStatus::heuristic_pass  // continuum dominance not decidable
                 : CheckStatus::pass;
  e.detail = "s(f'(0)) > 0, positive continuous eigenvector on the scan";
  return e;
}

AssumptionReport check_sufficient_conditions(const ModelSpec& model) {
  AssumptionReport rep;
  auto add = [&](const std::string& name, bool ok, double margin, const std::string& what) {
    CheckEntry e;
    e.name = name;
    e.status = ok ? CheckStatus::pass : CheckStatus::fail;
    e.margin = margin;
    e.detail = what;
    if (!ok) e.counterexample = Vec{};
    rep.entries.push_back(e);
  };
  switch (model.kind) {
    case ModelKind::buffered: {
      const auto& p = std::get<BufferedParams>(model.details);
      add("buffered-d1-ge-d2", p.d1 >= p.d2, p.d1 - p.d2, "d1 >= d2");
      add("buffered-k2b-lt-1", 1.0 > p.k2 * p.b, 1.0 - p.k2 * p.b, "1 > k2*b");
      add("buffered-k1-ge-k2", p.k1 >= p.k2, p.k1 - p.k2,
          "k1 >= k2 (reduces the subhomogeneity inequality to z1 >= k2 z2)");
      break;
    }
    case ModelKind::epidemic: {
      const auto& p = std::get<EpidemicParams>(model.details);
      add("epidemic-positive-equilibrium", p.omega * p.gamma > p.beta,
          p.omega * p.gamma - p.beta, "omega*gamma > beta");
      if (p.g_kind == GKind::g2) {
        const bool coop = p.omega * p.gamma <= 2.0 * p.beta;
        CheckEntry e;
        e.name = "epidemic-regime";
        e.status = CheckStatus::pass;
        e.margin = 2.0 * p.beta - p.omega * p.gamma;
        e.detail = coop ? "omega*gamma <= 2 beta: k <= u_max (cooperative)"
                        : "omega*gamma > 2 beta: k > u_max (non-cooperative)";
        rep.entries.push_back(e);
      }
      break;
    }
    case ModelKind::population: {
      const auto& p = std::get<PopulationParams>(model.details);
      add("population-r1-gt-alpha", p.r1 > p.alpha, p.r1 - p.alpha, "r1 > alpha");
      add("population-d1-ge-d2", p.d1 >= p.d2, p.d1 - p.d2, "d1 >= d2");
      add("population-delta-bound", p.delta * (p.r1 + p.r2 - p.alpha) >= p.r1 * p.r2,
          p.delta * (p.r1 + p.r2 - p.alpha) - p.r1 * p.r2,
          "delta (r1+r2-alpha) >= r1 r2 (gives delta z1 >= r1 z2)");
      break;
    }
    case ModelKind::custom:
      break;
  }
  return rep;
}

AssumptionReport verify_assumptions(const ModelSpec& model,
                                    const SpectralData& spectral,
                                    const EnvelopePair* envelopes,
                                    const CheckerOptions& opts) {
  AssumptionReport rep = check_A0(model, opts.rays, opts.seed);
  rep.entries.push_back(check_A1(model, spectral));
  for (auto& e : check_sufficient_conditions(model).entries) rep.entries.push_back(e);

  if (!envelopes) {
    auto coop = check_cooperative(model.reaction, model.m, model.state_box_upper,
                                  opts.samples, opts.seed);
    coop.name = "A2-cooperative";
    rep.entries.push_back(coop);
    auto sub = check_subhomog(model.reaction, model.jacobian0, spectral, model.K,
                              opts.k_max, opts.samples, opts.seed);
    sub.name = "A3-subhomogeneity";
    rep.entries.push_back(sub);
  } else {
    auto order = check_envelope_order(model, *envelopes, opts.samples, opts.seed);
    order.name = "A2p-envelope-order";
    rep.entries.push_back(order);

    // (A3)': equal Jacobians at 0 and no other positive equilibria of f+-.
    CheckEntry jac;
    jac.name = "A3p-shared-linearization";
    auto j_minus = fd_jacobian(envelopes->f_minus, Vec(model.m, 0.0));
    auto j_plus = fd_jacobian(envelopes->f_plus, Vec(model.m, 0.0));
    double worst = 0.0;
    for (int i = 0; i < model.m * model.m; ++i)
      worst = std::max({worst, std::abs(j_minus[i] - model.jacobian0[i]),
                        std::abs(j_plus[i] - model.jacobian0[i])});
    jac.margin = -worst;
    if (worst > 1e-6) {
      jac.status = CheckStatus::fail;
      jac.detail = "f+- Jacobian at 0 differs from f'(0)";
      jac.counterexample = Vec(model.m, 0.0);
    } else {
      jac.detail = "f, f-, f+ share the linearization at 0";
    }
    rep.entries.push_back(jac);

    auto coop_minus = check_cooperative(envelopes->f_minus, model.m,
                                        envelopes->K_plus, opts.samples, opts.seed);
    coop_minus.name = "A4p-cooperative-lower";
    rep.entries.push_back(coop_minus);
    auto coop_plus = check_cooperative(envelopes->f_plus, model.m, envelopes->K_plus,
                                       opts.samples, opts.seed);
    coop_plus.name = "A4p-cooperative-upper";
    rep.entries.push_back(coop_plus);

    auto sub = check_subhomog(envelopes->f_plus, model.jacobian0, spectral,
                              envelopes->K_plus, opts.k_max, opts.samples, opts.seed);
    sub.name = "A5p-subhomogeneity-upper";
    rep.entries.push_back(sub);
  }

  if (model.kind == ModelKind::epidemic)
    for (auto& e : check_H1_H2(model).entries) rep.entries.push_back(e);
  return rep;
}

}  // namespace rdfront
