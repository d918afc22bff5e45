#include <doctest.h>

#include <cmath>
#include <random>

#include "rdfront/pde.hpp"

using namespace rdfront;

namespace {

const double kSqrt6 = std::sqrt(6.0);
double fisher_exact(double xi) {
  return std::pow(1.0 + std::exp(-std::min(xi / kSqrt6, 300.0)), -2.0);
}

BoundaryFn constant_bc(Vec vals) {
  return [vals = std::move(vals)](double, std::span<double> out) {
    std::copy(vals.begin(), vals.end(), out.begin());
  };
}

// smooth random field in [lo, hi] per component (a few Fourier modes)
Field random_field(const Grid& grid, const Vec& lo_v, const Vec& hi_v,
                   std::mt19937_64& rng, double t0) {
  const int m = static_cast<int>(lo_v.size());
  Field f = make_field(grid, m, t0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int j = 0; j < m; ++j) {
    const double a1 = uni(rng), a2 = uni(rng), p1 = 6.28 * uni(rng), p2 = 6.28 * uni(rng);
    for (int i = 0; i < grid.n_nodes; ++i) {
      const double x = grid.x_at(i);
      double s = 0.5 + 0.25 * (a1 * std::sin(0.5 * x + p1) + a2 * std::sin(1.3 * x + p2));
      s = std::clamp(s, 0.02, 0.98);
      f.at(i)[j] = lo_v[j] + s * (hi_v[j] - lo_v[j]);
    }
  }
  return f;
}

double fisher_tracking_error(double dx, double dt, double t_end) {
  ModelSpec ms = make_registry_model("fisher");
  const double c = 5.0 / kSqrt6;
  Grid grid{-20.0, dx, static_cast<int>(std::lround(55.0 / dx)) + 1};
  Field u = make_field(grid, 1, 0.0);
  for (int i = 0; i < grid.n_nodes; ++i) u.at(i)[0] = fisher_exact(grid.x_at(i));
  BoundaryFn left = [&](double t, std::span<double> out) {
    out[0] = fisher_exact(grid.x0 + c * t);
  };
  BoundaryFn right = [&](double t, std::span<double> out) {
    out[0] = fisher_exact(grid.x_end() + c * t);
  };
  IvpSolver solver(ms, grid, dt, left, right);
  solver.solve_ivp(u, t_end);
  double err = 0.0;
  for (int i = 0; i < grid.n_nodes; ++i)
    err = std::max(err, std::abs(u.at(i)[0] - fisher_exact(grid.x_at(i) + c * t_end)));
  return err;
}

}  // namespace

TEST_CASE("0 and K are exact fixed points of the step") {
  ModelSpec ms = make_epidemic(1, 1, 1, 1, GKind::g1, 2, 1);
  Grid grid{-5.0, 0.1, 101};
  for (const Vec& eq : {Vec{0.0, 0.0}, ms.K}) {
    Field u = make_field(grid, 2, 0.0);
    for (int i = 0; i < grid.n_nodes; ++i) std::copy(eq.begin(), eq.end(), u.at(i).begin());
    IvpSolver solver(ms, grid, 0.01, constant_bc(eq), constant_bc(eq));
    for (int s = 0; s < 200; ++s) solver.step(u);
    for (int i = 0; i < grid.n_nodes; ++i)
      for (int j = 0; j < 2; ++j) CHECK(u.at(i)[j] == doctest::Approx(eq[j]).epsilon(1e-12));
  }
}

TEST_CASE("timestep above the monotonicity bound is refused") {
  ModelSpec ms = make_registry_model("fisher");  // L ~ 1.25
  Grid grid{0.0, 0.1, 11};
  CHECK_THROWS_WITH_AS(IvpSolver(ms, grid, 0.9, constant_bc({0.0}), constant_bc({0.0})),
                       doctest::Contains("timestep"), numeric_error);
}

TEST_CASE("state leaving the box is an error, not a clamp") {
  ModelSpec ms = make_registry_model("fisher");
  Grid grid{0.0, 0.1, 11};
  // boundary data outside [0, K] forces the violation
  IvpSolver solver(ms, grid, 0.01, constant_bc({1.5}), constant_bc({0.0}));
  Field u = make_field(grid, 1, 0.0);
  CHECK_THROWS_WITH_AS(solver.step(u), doctest::Contains("box"), numeric_error);
}

TEST_CASE("traveling Fisher front is tracked to 5e-3 at t=5") {
  const double err = fisher_tracking_error(0.02, 1e-3, 5.0);
  CHECK(err <= 5e-3);
  CHECK(err >= 1e-5);  // sanity: not trivially zero
}

TEST_CASE("refinement consistency along the parabolic path dt ~ dx^2") {
  // halving dx with dt quartered reduces the tracking error by >= 3x
  // (halving dt alone only halves it: the time error is first order)
  const double e0 = fisher_tracking_error(0.1, 4e-3, 2.0);
  const double e1 = fisher_tracking_error(0.05, 1e-3, 2.0);
  CHECK(e0 / e1 >= 3.0);
}

TEST_CASE("discrete comparison principle (cooperative model)") {
  ModelSpec ms = make_epidemic(1, 1, 1, 1, GKind::g1, 2, 1);
  Grid grid{-10.0, 0.1, 201};
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    Field lo = random_field(grid, {0.0, 0.0}, {0.6, 0.6}, rng, 0.0);
    Field hi = lo;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < grid.n_nodes; ++i)
      for (int j = 0; j < 2; ++j)
        hi.at(i)[j] = std::min(ms.K[j], lo.at(i)[j] + 0.3 * uni(rng));
    IvpSolver slo(ms, grid, 0.01, constant_bc({lo.at(0)[0], lo.at(0)[1]}),
                  constant_bc({lo.at(grid.n_nodes - 1)[0], lo.at(grid.n_nodes - 1)[1]}));
    IvpSolver shi(ms, grid, 0.01, constant_bc({hi.at(0)[0], hi.at(0)[1]}),
                  constant_bc({hi.at(grid.n_nodes - 1)[0], hi.at(grid.n_nodes - 1)[1]}));
    for (int s = 0; s < 300; ++s) {
      slo.step(lo);
      shi.step(hi);
    }
    for (std::size_t k = 0; k < lo.values.size(); ++k)
      CHECK(hi.values[k] >= lo.values[k] - 1e-12);
  }
}

TEST_CASE("linear-system comparison (f'(0) dynamics)") {
  // under u_t = D Lap u + f'(0) u, initial ordering is preserved
  ModelSpec epi = make_epidemic(1, 1, 1, 1, GKind::g1, 2, 1);
  ModelSpec lin = epi;
  const auto jac = epi.jacobian0;
  lin.reaction = [jac](std::span<const double> u, std::span<double> out) {
    out[0] = jac[0] * u[0] + jac[1] * u[1];
    out[1] = jac[2] * u[0] + jac[3] * u[1];
  };
  lin.K = {10.0, 10.0};
  lin.state_box_upper = {1e6, 1e6};  // linear growth is unbounded
  lin.lipschitz_L = 3.0;
  Grid grid{-10.0, 0.1, 201};
  std::mt19937_64 rng(7);
  Field lo = random_field(grid, {0.0, 0.0}, {0.5, 0.5}, rng, 0.0);
  Field hi = lo;
  for (int i = 0; i < grid.n_nodes; ++i)
    for (int j = 0; j < 2; ++j) hi.at(i)[j] += 0.2;
  IvpSolver slo(lin, grid, 0.01, constant_bc({lo.at(0)[0], lo.at(0)[1]}),
                constant_bc({lo.at(grid.n_nodes - 1)[0], lo.at(grid.n_nodes - 1)[1]}));
  IvpSolver shi(lin, grid, 0.01, constant_bc({hi.at(0)[0], hi.at(0)[1]}),
                constant_bc({hi.at(grid.n_nodes - 1)[0], hi.at(grid.n_nodes - 1)[1]}));
  for (int s = 0; s < 500; ++s) {
    slo.step(lo);
    shi.step(hi);
  }
  for (std::size_t k = 0; k < lo.values.size(); ++k)
    CHECK(hi.values[k] >= lo.values[k] - 1e-12);
}

TEST_CASE("three-system comparison") {
  ModelSpec pop = make_population(1, 1, 2, 1, 1, 1);
  EnvelopePair env = build_envelopes_population(pop);
  ModelSpec lower = env.lower_model(pop);
  ModelSpec middle = env.middle_model(pop);
  ModelSpec upper = env.upper_model(pop);
  Grid grid{-10.0, 0.1, 201};
  std::mt19937_64 rng(3);

  SUBCASE("random ordered triples stay ordered to t=10") {
    for (int trial = 0; trial < 10; ++trial) {
      Field mid = random_field(grid, {0.0, 0.0}, pop.K, rng, 0.0);
      Field lo = mid, hi = mid;
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      for (int i = 0; i < grid.n_nodes; ++i)
        for (int j = 0; j < 2; ++j) {
          lo.at(i)[j] *= 0.7 * uni(rng);
          hi.at(i)[j] = std::min(env.K_plus[j], mid.at(i)[j] + 0.2 * uni(rng));
        }
      auto rep = compare_three(lower, middle, upper, lo, mid, hi, 10.0, 0.01);
      CHECK(rep.ordered);
      CHECK(rep.worst_violation >= -1e-8);
    }
  }
  SUBCASE("u- = 0 stays zero below everything") {
    Field mid = random_field(grid, {0.0, 0.0}, pop.K, rng, 0.0);
    Field lo = make_field(grid, 2, 0.0);
    Field hi = mid;
    auto rep = compare_three(lower, middle, upper, lo, mid, hi, 2.0, 0.01);
    CHECK(rep.ordered);
  }
  SUBCASE("degenerate envelopes and equal data give identical trajectories") {
    ModelSpec coop = make_epidemic(1, 1, 1, 1, GKind::g1, 2, 1);
    Field a = random_field(grid, {0.0, 0.0}, coop.K, rng, 0.0);
    Field b = a, c = a;
    auto rep = compare_three(coop, coop, coop, a, b, c, 1.0, 0.01);
    CHECK(rep.ordered);
    CHECK(rep.worst_violation == 0.0);
  }
}
