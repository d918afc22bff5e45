#include "rdfront/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdfront/numerics.hpp"

namespace rdfront {

namespace {
constexpr double kLipschitzSafety = 1.25;

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw config_error(std::string("invalid parameter: ") + name + " must be > 0");
}
}  // namespace

double EpidemicParams::g(double u) const {
  if (g_kind == GKind::g1) return omega * u / (1.0 + nu * u);
  return omega * u / (1.0 + nu * u * u);
}

double ModelSpec::max_diffusion() const {
  double r = 0.0;
  for (double d : diffusion) r = std::max(r, d);
  return r;
}

void ModelSpec::validate(double eps_eq) const {
  if (m < 1) throw config_error("model: m must be >= 1");
  for (double d : diffusion)
    if (!(d > 0.0)) throw config_error("model: diffusion must be positive componentwise");
  Vec zero(m, 0.0);
  if (max_abs(eval(zero)) != 0.0) throw assumption_error("model: f(0) != 0");
  if (max_abs(eval(K)) > eps_eq)
    throw assumption_error("model: |f(K)| exceeds equilibrium tolerance");
  auto jac_fd = fd_jacobian(reaction, zero);
  for (int i = 0; i < m * m; ++i) {
    const double scale = std::max(1.0, std::abs(jacobian0[i]));
    if (std::abs(jac_fd[i] - jacobian0[i]) > 1e-6 * scale)
      throw assumption_error("model: jacobian0 disagrees with finite differences at 0");
  }
}

double estimate_lipschitz(const Reaction& f, int m, std::span<const double> box) {
  // 64 points per dimension for m <= 2; Halton budget of 4096 points above.
  double best = 0.0;
  Vec u(m), fp(m), fm(m);
  auto probe = [&](std::span<const double> pt) {
    for (int i = 0; i < m; ++i) {
      const double h = 1e-6 * std::max(1.0, box[i]);
      Vec up(pt.begin(), pt.end()), um(pt.begin(), pt.end());
      up[i] = std::min(pt[i] + h, box[i]);
      um[i] = std::max(pt[i] - h, 0.0);
      f(up, fp);
      f(um, fm);
      best = std::max(best, std::abs((fp[i] - fm[i]) / (up[i] - um[i])));
    }
  };
  if (m <= 2) {
    const int per = 64;
    if (m == 1) {
      for (int i = 0; i < per; ++i) {
        u[0] = box[0] * i / (per - 1.0);
        probe(u);
      }
    } else {
      for (int i = 0; i < per; ++i)
        for (int j = 0; j < per; ++j) {
          u[0] = box[0] * i / (per - 1.0);
          u[1] = box[1] * j / (per - 1.0);
          probe(u);
        }
    }
  } else {
    for (std::uint64_t s = 0; s < 4096; ++s) {
      halton_point(s, 0, u);
      for (int i = 0; i < m; ++i) u[i] *= box[i];
      probe(u);
    }
  }
  return best;
}

ModelSpec make_buffered(double d1, double d2, double k1, double k2, double b) {
  require_positive(d1, "d1");
  require_positive(d2, "d2");
  require_positive(k1, "k1");
  require_positive(k2, "k2");
  require_positive(b, "b");
  ModelSpec ms;
  ms.name = "buffered";
  ms.kind = ModelKind::buffered;
  ms.m = 2;
  ms.diffusion = {d1, d2};
  ms.reaction = [k1, k2, b](std::span<const double> w, std::span<double> out) {
    out[0] = w[0] * (1.0 - w[0]) + k1 * w[1] - k2 * w[0] * (b - w[1]);
    out[1] = -k1 * w[1] + k2 * w[0] * (b - w[1]);
  };
  ms.jacobian0 = {1.0 - k2 * b, k1, k2 * b, -k1};
  ms.K = {1.0, k2 * b / (k2 + k1)};
  ms.state_box_upper = ms.K;
  ms.details = BufferedParams{d1, d2, k1, k2, b};
  ms.lipschitz_L =
      kLipschitzSafety * estimate_lipschitz(ms.reaction, ms.m, ms.state_box_upper);
  ms.validate();
  return ms;
}

ModelSpec make_epidemic(double d1, double d2, double gamma, double beta,
                        GKind g_kind, double omega, double nu) {
  require_positive(d1, "d1");
  require_positive(d2, "d2");
  require_positive(gamma, "gamma");
  require_positive(beta, "beta");
  require_positive(omega, "omega");
  require_positive(nu, "nu");
  if (!(omega * gamma > beta))
    throw assumption_error("epidemic: omega*gamma <= beta, no positive equilibrium");

  EpidemicParams ep;
  ep.d1 = d1;
  ep.d2 = d2;
  ep.gamma = gamma;
  ep.beta = beta;
  ep.omega = omega;
  ep.nu = nu;
  ep.g_kind = g_kind;
  ep.gprime0 = omega;
  if (g_kind == GKind::g1) {
    ep.k = (omega * gamma - beta) / (beta * nu);
    ep.u_max = std::numeric_limits<double>::infinity();
    ep.cooperative = true;
  } else {
    ep.k = std::sqrt((omega * gamma - beta) / (beta * nu));
    ep.u_max = std::sqrt(1.0 / nu);
    ep.cooperative = ep.k <= ep.u_max;
  }

  ModelSpec ms;
  ms.name = g_kind == GKind::g1 ? "epidemic-g1" : "epidemic-g2";
  ms.kind = ModelKind::epidemic;
  ms.m = 2;
  ms.diffusion = {d1, d2};
  const EpidemicParams epc = ep;
  ms.reaction = [epc](std::span<const double> u, std::span<double> out) {
    out[0] = -u[0] + epc.gamma * u[1];
    out[1] = -epc.beta * u[1] + epc.g(u[0]);
  };
  ms.jacobian0 = {-1.0, gamma, omega, -beta};
  ms.K = {ep.k, ep.g(ep.k) / beta};
  ms.state_box_upper = ms.K;  // widened to K+ when envelopes are attached
  ms.details = ep;
  ms.lipschitz_L =
      kLipschitzSafety * estimate_lipschitz(ms.reaction, ms.m, ms.state_box_upper);
  ms.validate();
  return ms;
}

ModelSpec make_population(double d1, double d2, double r1, double r2,
                          double alpha, double delta) {
  require_positive(d1, "d1");
  require_positive(d2, "d2");
  require_positive(r1, "r1");
  require_positive(r2, "r2");
  require_positive(alpha, "alpha");
  require_positive(delta, "delta");
  if (!(r1 > alpha)) throw assumption_error("population: condition (r1 > alpha) fails");
  if (!(d1 >= d2)) throw assumption_error("population: condition (d1 >= d2) fails");
  if (!(delta * (r1 + r2 - alpha) >= r1 * r2))
    throw assumption_error("population: condition (delta >= r1*r2/(r1+r2-alpha)) fails");

  // K1 solves r1*K*exp(-K) = delta*K + alpha - r1; the left side dominates
  // near 0 (since r1 > alpha) and loses for large K.
  auto root_fn = [&](double k) { return r1 * k * std::exp(-k) - (delta * k + alpha - r1); };
  const double K1 = bracket_and_bisect(root_fn, 1e-8, 1e6, 1e-12);

  PopulationParams pp{d1, d2, r1, r2, alpha, delta, K1, K1 <= 1.0};

  ModelSpec ms;
  ms.name = "population";
  ms.kind = ModelKind::population;
  ms.m = 2;
  ms.diffusion = {d1, d2};
  ms.reaction = [r1, r2, alpha, delta](std::span<const double> w, std::span<double> out) {
    out[0] = w[0] * (r1 - alpha - delta * w[0] + r1 * w[1]);
    out[1] = r2 * (1.0 + w[1]) * (-w[1] + w[0] * std::exp(-w[0]));
  };
  ms.jacobian0 = {r1 - alpha, 0.0, r2, -r2};
  ms.K = {K1, K1 * std::exp(-K1)};
  ms.state_box_upper = ms.K;
  ms.details = pp;
  ms.lipschitz_L =
      kLipschitzSafety * estimate_lipschitz(ms.reaction, ms.m, ms.state_box_upper);
  ms.validate();
  return ms;
}

EnvelopePair build_envelopes_epidemic(const ModelSpec& model) {
  const auto* ep = std::get_if<EpidemicParams>(&model.details);
  if (!ep) throw config_error("build_envelopes_epidemic: not an epidemic model");
  if (ep->cooperative)
    throw assumption_error("epidemic: model is cooperative, envelopes not needed");

  const double gmax = ep->g(ep->u_max);
  const double K1p = ep->gamma / ep->beta * gmax;
  // u_min solves g(u) = g(K1+) on the increasing branch (0, u_max].
  const double target = ep->g(K1p);
  const double u_min = bisect([&](double u) { return ep->g(u) - target; }, 1e-12,
                              ep->u_max, 1e-12);
  const double gmin = ep->g(u_min);

  const EpidemicParams p = *ep;
  const double umax = ep->u_max;
  auto gplus = [p, umax, gmax](double u) { return u <= umax ? p.g(u) : gmax; };
  auto gminus = [p, u_min, gmin](double u) { return u <= u_min ? p.g(u) : gmin; };

  EnvelopePair env;
  env.f_plus = [p, gplus](std::span<const double> u, std::span<double> out) {
    out[0] = -u[0] + p.gamma * u[1];
    out[1] = -p.beta * u[1] + gplus(u[0]);
  };
  env.f_minus = [p, gminus](std::span<const double> u, std::span<double> out) {
    out[0] = -u[0] + p.gamma * u[1];
    out[1] = -p.beta * u[1] + gminus(u[0]);
  };
  // Equilibria solve u1 = gamma*u2, beta*u2 = g+-(u1).
  env.K_plus = {ep->gamma / ep->beta * gmax, gmax / ep->beta};
  env.K_minus = {ep->gamma / ep->beta * gmin, gmin / ep->beta};
  return env;
}

EnvelopePair build_envelopes_population(const ModelSpec& model) {
  const auto* pp = std::get_if<PopulationParams>(&model.details);
  if (!pp) throw config_error("build_envelopes_population: not a population model");
  if (pp->cooperative)
    throw assumption_error("population: model is cooperative, envelopes not needed");

  const double r1 = pp->r1, r2 = pp->r2, alpha = pp->alpha, delta = pp->delta;
  auto ricker = [](double w) { return w * std::exp(-w); };
  auto hplus = [ricker](double w) { return w <= 1.0 ? ricker(w) : std::exp(-1.0); };

  // K1+ > K1 solves delta*K + alpha - r1 - r1*h+(K) = 0.
  auto fp = [&](double k) { return delta * k + alpha - r1 - r1 * hplus(k); };
  const double K1p = bisect(fp, pp->K1, pp->K1 + (r1 * std::exp(-1.0) + r1) / delta + 1.0, 1e-12);
  const double frozen = ricker(K1p);
  const double h0 = bisect([&](double h) { return ricker(h) - frozen; }, 1e-12, 1.0, 1e-12);
  auto hminus = [ricker, h0, frozen](double w) { return w <= h0 ? ricker(w) : frozen; };
  auto fm = [&](double k) { return delta * k + alpha - r1 - r1 * hminus(k); };
  const double K1m = bisect(fm, 1e-12, pp->K1, 1e-12);

  EnvelopePair env;
  env.f_plus = [r1, r2, alpha, delta, hplus](std::span<const double> w, std::span<double> out) {
    out[0] = w[0] * (r1 - alpha - delta * w[0] + r1 * w[1]);
    out[1] = r2 * (1.0 + w[1]) * (-w[1] + hplus(w[0]));
  };
  env.f_minus = [r1, r2, alpha, delta, hminus](std::span<const double> w, std::span<double> out) {
    out[0] = w[0] * (r1 - alpha - delta * w[0] + r1 * w[1]);
    out[1] = r2 * (1.0 + w[1]) * (-w[1] + hminus(w[0]));
  };
  env.K_plus = {K1p, hplus(K1p)};
  env.K_minus = {K1m, hminus(K1m)};
  return env;
}

EnvelopePair build_envelopes(const ModelSpec& model) {
  switch (model.kind) {
    case ModelKind::epidemic:
      return build_envelopes_epidemic(model);
    case ModelKind::population:
      return build_envelopes_population(model);
    default:
      throw config_error("no envelope construction for this model kind");
  }
}

namespace {
// Common constant for the three-system comparison: dominates f, f-, f+ on [0,K+].
double shared_lipschitz(const ModelSpec& parent, const EnvelopePair& env) {
  const auto& box = env.K_plus;
  double l = estimate_lipschitz(parent.reaction, parent.m, box);
  l = std::max(l, estimate_lipschitz(env.f_minus, parent.m, box));
  l = std::max(l, estimate_lipschitz(env.f_plus, parent.m, box));
  return kLipschitzSafety * l;
}

ModelSpec envelope_model(const ModelSpec& parent, const EnvelopePair& env,
                         const Reaction& f, Vec K, const char* suffix) {
  ModelSpec ms;
  ms.name = parent.name + suffix;
  ms.kind = ModelKind::custom;
  ms.m = parent.m;
  ms.diffusion = parent.diffusion;
  ms.reaction = f;
  ms.jacobian0 = parent.jacobian0;  // shared linearization at 0
  ms.K = std::move(K);
  ms.state_box_upper = env.K_plus;
  ms.lipschitz_L = shared_lipschitz(parent, env);
  ms.validate();
  return ms;
}
}  // namespace

ModelSpec EnvelopePair::lower_model(const ModelSpec& parent) const {
  return envelope_model(parent, *this, f_minus, K_minus, "-lower");
}

ModelSpec EnvelopePair::upper_model(const ModelSpec& parent) const {
  return envelope_model(parent, *this, f_plus, K_plus, "-upper");
}

ModelSpec EnvelopePair::middle_model(const ModelSpec& parent) const {
  return envelope_model(parent, *this, parent.reaction, parent.K, "-wide");
}

ModelSpec make_registry_model(const std::string& entry, double d) {
  if (entry == "fisher" || entry == "logistic" || entry == "kpp") {
    require_positive(d, "d");
    ModelSpec ms;
    ms.name = "fisher";
    ms.kind = ModelKind::custom;
    ms.m = 1;
    ms.diffusion = {d};
    ms.reaction = [](std::span<const double> u, std::span<double> out) {
      out[0] = u[0] * (1.0 - u[0]);
    };
    ms.jacobian0 = {1.0};
    ms.K = {1.0};
    ms.state_box_upper = {1.0};
    ms.lipschitz_L = kLipschitzSafety * estimate_lipschitz(ms.reaction, 1, ms.state_box_upper);
    ms.validate();
    return ms;
  }
  throw config_error("unknown registry model: " + entry);
}

}  // namespace rdfront
