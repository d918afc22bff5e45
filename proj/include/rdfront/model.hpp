#pragma once

#include <optional>
#include <string>
#include <variant>

#include "rdfront/common.hpp"

namespace rdfront {

enum class ModelKind { buffered, epidemic, population, custom };

enum class GKind { g1, g2 };  // g1(u) = w*u/(1+nu*u), g2(u) = w*u/(1+nu*u^2)

struct BufferedParams {
  double d1, d2, k1, k2, b;
};

struct EpidemicParams {
  double d1, d2, gamma, beta, omega, nu;
  GKind g_kind;
  double gprime0;  // g'(0) = omega
  double k;        // first component of K
  double u_max;    // argmax of g (infinity for g1)
  bool cooperative;
  double g(double u) const;
};

struct PopulationParams {
  double d1, d2, r1, r2, alpha, delta;
  double K1;
  bool cooperative;
};

/// An m-component reaction-diffusion model: u_t = D Lap(u) + f(u).
/// Immutable after construction; safe to share across threads.
struct ModelSpec {
  std::string name;
  ModelKind kind = ModelKind::custom;
  int m = 0;
  Vec diffusion;                 // d_1..d_m, all > 0
  Reaction reaction;             // f
  std::vector<double> jacobian0; // f'(0), row-major m x m
  Vec K;                         // positive equilibrium
  Vec state_box_upper;           // K for cooperative runs, K+ otherwise
  double lipschitz_L = 0.0;      // >= max |d_i f_i| over the state box, with safety
  std::variant<std::monostate, BufferedParams, EpidemicParams, PopulationParams> details;

  Vec eval(std::span<const double> u) const {
    Vec out(m);
    reaction(u, out);
    return out;
  }
  double max_diffusion() const;

  /// Construction-time invariants: positive diffusion, f(0)=0, |f(K)| small,
  /// jacobian0 close to the finite-difference Jacobian at 0.
  void validate(double eps_eq = 1e-10) const;
};

/// Cooperative envelopes f- <= f <= f+ for a non-cooperative model,
/// with equilibria 0 << K- <= K <= K+.
struct EnvelopePair {
  Reaction f_minus;
  Reaction f_plus;
  Vec K_minus;
  Vec K_plus;

  /// The auxiliary cooperative systems as standalone models. All three share
  /// the parent's linearization at 0, the state box [0, K+] and a common
  /// Lipschitz constant taken over f, f-, f+ on [0, K+].
  ModelSpec lower_model(const ModelSpec& parent) const;
  ModelSpec upper_model(const ModelSpec& parent) const;
  /// The parent reaction with the state box widened to [0, K+].
  ModelSpec middle_model(const ModelSpec& parent) const;
};

// ---- builtin models (section-4 applications) -------------------------------

/// Buffered system in transformed coordinates (w1, w2); cooperative.
ModelSpec make_buffered(double d1, double d2, double k1, double k2, double b);

/// Epidemic model (-u1 + gamma*u2, -beta*u2 + g(u1)).
ModelSpec make_epidemic(double d1, double d2, double gamma, double beta,
                        GKind g_kind, double omega, double nu);

/// Ungulate/grass population model in shifted coordinates.
ModelSpec make_population(double d1, double d2, double r1, double r2,
                          double alpha, double delta);

/// Envelope constructions for the non-cooperative regimes.
EnvelopePair build_envelopes_epidemic(const ModelSpec& model);
EnvelopePair build_envelopes_population(const ModelSpec& model);
EnvelopePair build_envelopes(const ModelSpec& model);

/// Named registry of custom (non-section-4) models compiled into the binary.
/// Currently: "fisher" (scalar logistic / KPP, parameter d).
ModelSpec make_registry_model(const std::string& entry, double d = 1.0);

/// Sampled estimate of max |d_i f_i(u)| over [0, box]; no safety factor.
double estimate_lipschitz(const Reaction& f, int m, std::span<const double> box);

}  // namespace rdfront
