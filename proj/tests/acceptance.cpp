// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rdfront/checker.hpp"
#include "rdfront/entire.hpp"
#include "rdfront/front.hpp"
#include "rdfront/pde.hpp"
#include "rdfront/sis.hpp"

using namespace rdfront;

namespace {

int g_failures = 0;

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Criterion {
  int id;
  std::string label;
  double started = now();
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
  ~Criterion() {
    const double secs = now() - started;
    std::printf("[criterion %2d] %s  %-52s (%.1f s%s%s)\n", id,
                passed ? "PASS" : "FAIL", label.c_str(), secs,
                detail.empty() ? "" : "; ", detail.c_str());
    std::fflush(stdout);
    if (!passed) ++g_failures;
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const double kSqrt6 = std::sqrt(6.0);
double fisher_exact(double xi) {
  return std::pow(1.0 + std::exp(-std::min(xi / kSqrt6, 300.0)), -2.0);
}

// ---------------------------------------------------------------------------

void criterion_1_spectral_oracle() {
  Criterion cr{1, "spectral oracle: population (c*, lambda*) = (2, 1)"};
  ModelSpec ms = make_population(1, 1, 2, 1, 1, 1);
  SpectralData sp = compute_cstar(ms);
  cr.require(std::abs(sp.c_star() - 2.0) <= 1e-8,
             fmt("c* off by %.2e", std::abs(sp.c_star() - 2.0)));
  cr.require(std::abs(sp.lambda_star() - 1.0) <= 1e-8,
             fmt("lambda* off by %.2e", std::abs(sp.lambda_star() - 1.0)));
  cr.require(now() - cr.started < 1.0, "runtime over 1 s");
}

void criterion_2_logistic_sis() {
  Criterion cr{2, "closed-form SIS: logistic Gamma and the e^t bound"};
  ModelSpec ms = make_registry_model("fisher");
  SpectralData sp = compute_cstar(ms);
  GammaOptions opts;
  opts.dt = 2.5e-4;
  opts.tol = 1e-11;
  Profile gamma = compute_gamma(ms, sp, opts);
  double sup = 0.0, over = -1e300;
  for (int i = 0; i < gamma.n_nodes(); ++i) {
    const double t = gamma.t_at(i);
    sup = std::max(sup, std::abs(gamma.value(i, 0) - 1.0 / (1.0 + std::exp(-t))));
    over = std::max(over, gamma.value(i, 0) - std::exp(t));
  }
  cr.require(sup <= 1e-6, fmt("sup error %.2e > 1e-6", sup));
  cr.require(over <= 1e-10, fmt("bound overshoot %.2e", over));
  cr.note(fmt("sup=%.1e", sup));
  cr.require(now() - cr.started < 10.0, "runtime over 10 s");
}

void criterion_3_fisher_front() {
  Criterion cr{3, "closed-form front: Fisher at c = 5/sqrt6"};
  ModelSpec ms = make_registry_model("fisher");
  SpectralData sp = compute_cstar(ms);
  FrontOptions opts;
  opts.dxi = 0.01;
  FrontProfile fp = compute_front(ms, sp, 5.0 / kSqrt6, opts);

  // sup distance after phase alignment (translation minimizing the distance)
  auto supdist = [&](double mu) {
    double worst = 0.0;
    Vec buf(1);
    for (double xi = -30.0; xi <= 30.0; xi += 0.01) {
      fp.profile.eval(xi + mu, buf);
      worst = std::max(worst, std::abs(buf[0] - fisher_exact(xi)));
    }
    return worst;
  };
  double lo = -0.5, hi = 0.5;
  while (hi - lo > 1e-6) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (supdist(m1) < supdist(m2))
      hi = m2;
    else
      lo = m1;
  }
  const double dist = supdist(0.5 * (lo + hi));
  cr.require(dist <= 1e-3, fmt("sup distance %.2e > 1e-3", dist));
  const double slope_err = std::abs(fp.fitted_slope - 2.0 / kSqrt6) / (2.0 / kSqrt6);
  cr.require(slope_err <= 0.01, fmt("tail slope off by %.2f%%", 100 * slope_err));
  cr.note(fmt("sup=%.1e slope_err=%.2e", dist, slope_err));
  cr.require(now() - cr.started < 60.0, "runtime over 60 s");
}

void criterion_4_decay_normalization() {
  Criterion cr{4, "decay normalization: E1 fronts at 1.1 c* and 1.5 c*"};
  ModelSpec ms = make_epidemic(1, 1, 1, 1, GKind::g1, 2, 1);
  SpectralData sp = compute_cstar(ms);
  for (double fac : {1.1, 1.5}) {
    FrontProfile fp = compute_front(ms, sp, fac * sp.c_star());
    const Profile& p = fp.profile;
    double reldev = 0.0, over = -1e300;
    for (int i = 0; i < p.n_nodes(); ++i) {
      const double e = std::exp(fp.lambda1 * p.t_at(i));
      for (int j = 0; j < 2; ++j) {
        const double bound = fp.v1[j] * e;
        over = std::max(over, p.value(i, j) - bound);
        if (p.value(i, 0) >= 1e-8 && p.value(i, 0) <= 1e-4)
          reldev = std::max(reldev, std::abs(p.value(i, j) / bound - 1.0));
      }
    }
    cr.require(reldev <= 0.02, fmt("tail ratio dev %.3f at c=%.2f c*", reldev, fac));
    cr.require(over <= 1e-9, fmt("bound overshoot %.2e at c=%.2f c*", over, fac));
  }
}

void criterion_5_comparison_principles() {
  Criterion cr{5, "discrete comparison: 100 pairs (E1) and 100 triples (population)"};
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Grid grid{-10.0, 0.1, 201};

  auto smooth = [&](int m, const Vec& cap, double t0) {
    Field f = make_field(grid, m, t0);
    for (int j = 0; j < m; ++j) {
      const double a1 = uni(rng), a2 = uni(rng), p1 = 6.28 * uni(rng),
                   p2 = 6.28 * uni(rng);
      for (int i = 0; i < grid.n_nodes; ++i) {
        const double x = grid.x_at(i);
        double s =
            0.5 + 0.25 * (a1 * std::sin(0.5 * x + p1) + a2 * std::sin(1.3 * x + p2));
        f.at(i)[j] = std::clamp(s, 0.02, 0.98) * cap[j];
      }
    }
    return f;
  };
  auto frozen = [](const Field& f, int node) {
    Vec vals(f.at(node).begin(), f.at(node).end());
    return BoundaryFn([vals](double, std::span<double> out) {
      std::copy(vals.begin(), vals.end(), out.begin());
    });
  };

  // Lemma 2.4(ii) rendering: ordered pairs under E1
  {
    ModelSpec ms = make_epidemic(1, 1, 1, 1, GKind::g1, 2, 1);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      Field lo = smooth(2, {0.6, 0.6}, 0.0);
      Field hi = lo;
      for (int i = 0; i < grid.n_nodes; ++i)
        for (int j = 0; j < 2; ++j)
          hi.at(i)[j] = std::min(ms.K[j], lo.at(i)[j] + 0.35 * uni(rng));
      IvpSolver slo(ms, grid, 0.01, frozen(lo, 0), frozen(lo, grid.n_nodes - 1));
      IvpSolver shi(ms, grid, 0.01, frozen(hi, 0), frozen(hi, grid.n_nodes - 1));
      for (int s = 0; s < 1000; ++s) {
        slo.step(lo);
        shi.step(hi);
        if (s % 50 == 49)
          for (std::size_t k = 0; k < lo.values.size(); ++k)
            worst = std::min(worst, hi.values[k] - lo.values[k]);
      }
    }
    cr.require(worst >= -1e-8, fmt("pair ordering violated by %.2e", -worst));
  }

  // Lemma 3.1 rendering: ordered triples under the population envelopes
  {
    ModelSpec pop = make_population(1, 1, 2, 1, 1, 1);
    EnvelopePair env = build_envelopes_population(pop);
    ModelSpec lower = env.lower_model(pop);
    ModelSpec middle = env.middle_model(pop);
    ModelSpec upper = env.upper_model(pop);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      Field mid = smooth(2, pop.K, 0.0);
      Field lo = mid, hi = mid;
      for (int i = 0; i < grid.n_nodes; ++i)
        for (int j = 0; j < 2; ++j) {
          lo.at(i)[j] *= 0.7 * uni(rng);
          hi.at(i)[j] = std::min(env.K_plus[j], mid.at(i)[j] + 0.2 * uni(rng));
        }
      auto rep = compare_three(lower, middle, upper, lo, mid, hi, 10.0, 0.01);
      worst = std::min(worst, rep.worst_violation);
    }
    cr.require(worst >= -1e-8, fmt("triple ordering violated by %.2e", -worst));
  }
}

// shared E1 ingredients for criteria 6, 7, 9
struct E1Setup {
  ModelSpec model = make_epidemic(1, 1, 1, 1, GKind::g1, 2, 1);
  SpectralData sp = compute_cstar(model);
  EntireProfiles profiles;

  E1Setup() {
    GammaOptions gopts;
    gopts.t0 = -40;
    gopts.t1 = 60;
    gopts.dt = 1e-3;
    gopts.tol = 1e-10;
    profiles.gamma = compute_gamma(model, sp, gopts);
    profiles.fronts.resize(2);
    profiles.fronts[0] = compute_front(model, sp, 1.5);
    profiles.fronts[1] = profiles.fronts[0];  // same speed, opposite direction
  }

  EntireConfig base_config() const {
    EntireConfig cfg;
    cfg.waves = {{1.5, 0.0, +1}};
    cfg.chi = {1, 1};
    cfg.mode = EntireMode::cooperative;
    cfg.n_schedule = {2, 4, 6, 8};
    cfg.t_end = 15.0;
    cfg.dx = 0.05;
    cfg.dt = 1e-3;
    return cfg;
  }
};

void criteria_6_and_7(const E1Setup& e1) {
  EntireResult res;
  QualitativeReport qual;
  {
    Criterion cr{6, "entire-solution sandwich (E1, chi = (1,1))"};
    EntireConfig cfg = e1.base_config();
    EntireProfiles profiles{{e1.profiles.fronts[0]}, e1.profiles.gamma};
    try {
      res = construct(cfg, e1.model, profiles, e1.sp);
      qual = verify_qualitative(res.snapshots, cfg, e1.model, e1.sp);
    } catch (const std::exception& ex) {
      cr.require(false, ex.what());
      return;
    }
    const auto& rep = res.report;
    cr.require(rep.lower_margin >= -1e-3, fmt("lower margin %.2e", rep.lower_margin));
    cr.require(rep.upper_margin >= -1e-3, fmt("upper margin %.2e", rep.upper_margin));
    cr.require(rep.worst_n_violation >= -1e-8,
               fmt("n-ordering violated by %.2e", -rep.worst_n_violation));
    bool shrinking = true;
    for (std::size_t i = 1; i < rep.n_increments.size(); ++i)
      shrinking = shrinking && rep.n_increments[i] <= rep.n_increments[i - 1];
    cr.require(shrinking, "per-n increments not monotone");
    cr.require(rep.monotone_in_t_ok,
               fmt("min forward t-difference %.2e", rep.min_time_forward_difference));
    cr.note(fmt("low=%.1e up=%.1e", rep.lower_margin, rep.upper_margin));
    cr.require(now() - cr.started < 600.0, "runtime over 10 min");
  }
  {
    Criterion cr{7, "early-time exponents (Thm 2.9 (iv) and (v))"};
    // (iv): the criterion-6 run decays like e^{s0 t}
    cr.require(qual.exponent_ok,
               fmt("fit %.4f vs s0 %.4f", qual.fitted_exponent, qual.expected_exponent));
    cr.note(fmt("sis-fit=%.4f (s0=%.4f)", qual.fitted_exponent, qual.expected_exponent));

    // (v): two fronts, no SIS, decays like min c_i lambda_1(c_i). The clean
    // exponent needs an earlier launch than criterion 6 uses: the two-front
    // initial data carries max-of-tails and the first ~2 units rebuild the
    // sum, while the nonlinear interaction grows like e^{theta t}.
    EntireConfig cfg = e1.base_config();
    cfg.waves = {{1.5, 0.0, +1}, {1.5, 0.0, -1}};
    cfg.chi = {1, 1, 0};
    cfg.n_schedule = {2, 4, 8, 12};
    cfg.t_end = 2.0;
    try {
      EntireResult res2 = construct(cfg, e1.model, e1.profiles, e1.sp);
      QualitativeReport q2 = verify_qualitative(res2.snapshots, cfg, e1.model, e1.sp);
      cr.require(q2.exponent_ok,
                 fmt("fit %.4f vs theta %.4f", q2.fitted_exponent, q2.expected_exponent));
      cr.note(fmt("front-fit=%.4f (theta=%.4f)", q2.fitted_exponent, q2.expected_exponent));
    } catch (const std::exception& ex) {
      cr.require(false, ex.what());
    }
  }
}

void criterion_8_noncooperative() {
  Criterion cr{8, "non-cooperative construction (population, Thm 3.5)"};
  ModelSpec pop = make_population(1, 1, 2, 1, 1, 1);
  EnvelopePair env = build_envelopes_population(pop);
  ModelSpec lower = env.lower_model(pop);
  ModelSpec middle = env.middle_model(pop);
  SpectralData sp = compute_cstar(pop);

  GammaOptions gopts;
  gopts.t0 = -40;
  gopts.t1 = 40;
  gopts.dt = 1e-3;
  gopts.tol = 1e-10;
  EntireProfiles profiles;
  profiles.gamma = compute_gamma(lower, sp, gopts);
  profiles.fronts.resize(1);
  profiles.fronts[0] = compute_front(lower, sp, 3.0);

  EntireConfig cfg;
  cfg.waves = {{3.0, 0.0, +1}};
  cfg.chi = {1, 1};
  cfg.mode = EntireMode::noncooperative;
  cfg.n_schedule = {2, 4, 6};
  cfg.t_end = 10.0;
  cfg.dx = 0.05;
  cfg.dt = 1e-3;
  try {
    EntireResult res = construct(cfg, middle, profiles, sp, &env.K_minus);
    const auto& rep = res.report;
    cr.require(rep.lower_margin >= -1e-3, fmt("lower margin %.2e", rep.lower_margin));
    cr.require(rep.upper_margin >= -1e-3, fmt("upper margin %.2e", rep.upper_margin));
    cr.require(rep.end_liminf_gap >= -1e-2,
               fmt("liminf gap to K- is %.2e", rep.end_liminf_gap));
    cr.note(fmt("low=%.1e up=%.1e liminf=%.1e", rep.lower_margin, rep.upper_margin,
                rep.end_liminf_gap));
  } catch (const std::exception& ex) {
    cr.require(false, ex.what());
  }
  cr.require(now() - cr.started < 600.0, "runtime over 10 min");
}

void criterion_9_diff_bound(const E1Setup& e1) {
  Criterion cr{9, "Theorem 2.10 difference bound (chi_1 on/off, h1 down)"};
  EntireProfiles profiles{{e1.profiles.fronts[0]}, e1.profiles.gamma};
  double prev_sup = 1e300;
  bool sup_decreasing = true;
  for (double h1 : {0.0, -2.0, -4.0}) {
    EntireConfig cfg = e1.base_config();
    cfg.n_schedule = {2, 4};
    cfg.t_end = 6.0;
    cfg.waves[0].h = h1;
    try {
      DiffBoundReport rep = diff_bound(cfg, e1.model, profiles, e1.sp);
      cr.require(rep.nonnegative_ok, fmt("difference negative by %.2e at h1=%g",
                                         -rep.worst_negative, h1));
      cr.require(rep.bound_ok,
                 fmt("bound exceeded by %.2e at h1=%g", rep.worst_bound_excess, h1));
      sup_decreasing = sup_decreasing && rep.sup_diff_left_halfplane < prev_sup;
      prev_sup = rep.sup_diff_left_halfplane;
    } catch (const std::exception& ex) {
      cr.require(false, ex.what());
      return;
    }
  }
  cr.require(sup_decreasing, "sup difference on x nu <= 0 not decreasing in h1");
}

void criterion_10_checkers() {
  Criterion cr{10, "assumption checkers reproduce the application claims"};
  CheckerOptions opts;
  opts.samples = 10000;

  {  // buffered: (A0)-(A3)
    ModelSpec ms = make_buffered(1, 1, 1, 0.5, 1);
    SpectralData sp = compute_cstar(ms);
    auto rep = verify_assumptions(ms, sp, nullptr, opts);
    cr.require(rep.ok(), "buffered (A0)-(A3) failed");
  }
  {  // epidemic g2, omega gamma > 2 beta: flagged non-cooperative; envelopes pass
    ModelSpec ms = make_epidemic(1, 1, 1, 1, GKind::g2, 3, 1);
    const auto& ep = std::get<EpidemicParams>(ms.details);
    cr.require(!ep.cooperative, "epidemic g2 (omega=3) not flagged non-cooperative");
    auto coop = check_cooperative(ms.reaction, 2, ms.state_box_upper, opts.samples);
    cr.require(coop.status == CheckStatus::fail,
               "epidemic g2 cooperativity check did not fail on [0,K]");
    SpectralData sp = compute_cstar(ms);
    EnvelopePair env = build_envelopes_epidemic(ms);
    auto rep = verify_assumptions(ms, sp, &env, opts);
    cr.require(rep.ok(), "epidemic envelopes (A2)'-(A5)' failed");
  }
  {  // population under (4.6): both parameter regimes
    ModelSpec coop = make_population(1, 1, 2, 1, 1.8, 2);
    SpectralData sp = compute_cstar(coop);
    auto rep = verify_assumptions(coop, sp, nullptr, opts);
    cr.require(rep.ok(), "population (cooperative regime) checks failed");

    ModelSpec nc = make_population(1, 1, 2, 1, 1, 1);
    SpectralData sp2 = compute_cstar(nc);
    EnvelopePair env = build_envelopes_population(nc);
    auto rep2 = verify_assumptions(nc, sp2, &env, opts);
    cr.require(rep2.ok(), "population (envelope regime) checks failed");
  }
  cr.require(now() - cr.started < 30.0, "runtime over 30 s");
}

}  // namespace

int main() {
  std::printf("rdfront acceptance suite\n");
  const double t0 = now();
  criterion_1_spectral_oracle();
  criterion_2_logistic_sis();
  criterion_3_fisher_front();
  criterion_4_decay_normalization();
  criterion_5_comparison_principles();
  {
    E1Setup e1;
    criteria_6_and_7(e1);
    criterion_9_diff_bound(e1);
  }
  criterion_8_noncooperative();
  criterion_10_checkers();
  std::printf("%d of 10 criteria passed (total %.1f s)\n", 10 - g_failures, now() - t0);
  return g_failures;
}
