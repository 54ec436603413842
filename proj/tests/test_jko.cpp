#include <cmath>
#include <random>

#include "doctest.h"
#include "nlpme/jko.hpp"
#include "nlpme/reference.hpp"

using namespace nlpme;

namespace {

ParticleMeasure particles(std::vector<double> xs) {
  ParticleMeasure mu;
  mu.xs = std::move(xs);
  return mu;
}

double jko_objective(const std::vector<double>& x, const ParticleMeasure& prev,
                     double tau, const InteractionEnergy& E) {
  const int N = static_cast<int>(x.size());
  double q = 0.0;
  for (int i = 0; i < N; ++i) {
    const double d = x[static_cast<size_t>(i)] - prev.xs[static_cast<size_t>(i)];
    q += d * d;
  }
  ParticleMeasure tmp;
  tmp.xs = x;
  return q / (2.0 * tau * N) + interaction_energy(tmp, E);
}

}  // namespace

TEST_CASE("armijo descent solves a quadratic exactly") {
  // f(x) = 1/2 |x - c|^2
  const std::vector<double> c = {1.0, -2.0, 0.5};
  auto f = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += 0.5 * (x[i] - c[i]) * (x[i] - c[i]);
    return s;
  };
  auto g = [&](const std::vector<double>& x, std::vector<double>& out) {
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] - c[i];
  };
  JkoConfig cfg;
  InnerResult r = minimize_armijo(f, g, {0.0, 0.0, 0.0}, 1.0, 1e-12, cfg);
  CHECK(r.converged);
  for (size_t i = 0; i < c.size(); ++i)
    CHECK(r.x[i] == doctest::Approx(c[i]).epsilon(1e-10));
}

TEST_CASE("armijo cap behaviour") {
  auto f = [](const std::vector<double>& x) { return 0.5 * x[0] * x[0]; };
  auto g = [](const std::vector<double>& x, std::vector<double>& out) {
    out[0] = x[0];
  };
  JkoConfig cfg;
  cfg.max_inner_iters = 2;
  CHECK_THROWS_AS(minimize_armijo(f, g, {100.0}, 1e-4, 1e-14, cfg), NonConvergence);
  cfg.error_on_cap = false;
  const InnerResult r = minimize_armijo(f, g, {100.0}, 1e-4, 1e-14, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.grad_inf > 1e-14);
}

TEST_CASE("single atom is a JKO fixed point") {
  const InteractionKernel W =
      InteractionKernel::self_convolve(MollifierKernel::gaussian(1.0), 0.5);
  const InteractionEnergy E{&W, 1.0, true};
  JkoConfig cfg;
  const ParticleMeasure prev = particles({0.7});
  const ParticleMeasure next = jko_step(prev, 1e-3, E, cfg);
  CHECK(next.xs[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(euler_lagrange_residual(prev, next, 1e-3, E) <= 1e-12);
}

TEST_CASE("pair repulsion and brute-force oracle") {
  const InteractionKernel W =
      InteractionKernel::self_convolve(MollifierKernel::gaussian(1.0), 0.5);
  const InteractionEnergy E{&W, 1.0, true};
  JkoConfig cfg;
  const double tau = 1e-3;
  const ParticleMeasure prev = particles({-0.1, 0.1});
  StepInfo info;
  const ParticleMeasure next = jko_step(prev, tau, E, cfg, &info);
  // gaussian W' < 0 for r > 0: descent separates the pair
  CHECK(next.xs[1] - next.xs[0] > 0.2);
  CHECK(info.objective_decrease >= 0.0);

  // brute-force 2-D grid around the warm start
  double best = 1e300, bx = 0.0, by = 0.0;
  const double span = 0.004, step = 1e-4;
  for (double a = prev.xs[0] - span; a <= prev.xs[0] + span; a += step)
    for (double b = prev.xs[1] - span; b <= prev.xs[1] + span; b += step) {
      const double v = jko_objective({a, b}, prev, tau, E);
      if (v < best) {
        best = v;
        bx = a;
        by = b;
      }
    }
  CHECK(std::abs(next.xs[0] - bx) <= 2e-4);
  CHECK(std::abs(next.xs[1] - by) <= 2e-4);
}

TEST_CASE("euler-lagrange residual bounds and negative control") {
  const InteractionKernel W =
      InteractionKernel::self_convolve(MollifierKernel::gaussian(1.0), 0.3);
  const InteractionEnergy E{&W, 1.0, true};
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ParticleMeasure prev;
  for (int i = 0; i < 5; ++i) prev.xs.push_back(U(rng));
  prev.sort_1d();
  const double tau = 1e-3;
  JkoConfig cfg;
  const ParticleMeasure next = jko_step(prev, tau, E, cfg);
  // el = N * |grad G|_inf <= N * tol
  const double tol = cfg.tol_for(prev.size());
  CHECK(euler_lagrange_residual(prev, next, tau, E) <= prev.size() * tol);

  JkoConfig trunc = cfg;
  trunc.max_inner_iters = 2;
  trunc.error_on_cap = false;
  const ParticleMeasure rough = jko_step(prev, tau, E, trunc);
  CHECK(euler_lagrange_residual(prev, rough, tau, E) > prev.size() * tol);
}

TEST_CASE("nlie trajectory inequalities") {
  const MollifierKernel V = MollifierKernel::gaussian(1.0);
  const MollifierKernel V_eps = V.scaled(0.2);
  const InteractionKernel W = InteractionKernel::self_convolve(V, 0.2);
  const InteractionEnergy E{&W, 1.0, true};
  JkoConfig cfg;
  cfg.tau = 1e-3;
  cfg.T = 0.02;
  const DiagGrid diag{-4.0, 4.0, 801};
  // uniform [-0.5, 0.5] initial data
  GridDensity rho0(-4.0, 4.0, 801);
  rho0.values.assign(801, 0.0);
  for (int k = 0; k < rho0.m; ++k)
    if (std::abs(rho0.node(k)) <= 0.5) rho0.values[static_cast<size_t>(k)] = 1.0;
  const JkoTrajectory tr = solve_nlie_jko(rho0, 100, cfg, V_eps, E, diag);
  REQUIRE(tr.ok());
  REQUIRE(tr.records.size() == 21);

  double sum_sq = 0.0;
  for (size_t n = 1; n < tr.records.size(); ++n) {
    const StepRecord& r = tr.records[n];
    // per-step inequality
    CHECK(r.dW2_increment / (2.0 * cfg.tau) + r.energy <=
          tr.records[n - 1].energy + 1e-10);
    sum_sq += r.dW2_increment / (2.0 * cfg.tau);
    // moment bound, |V1|_L1 = 1
    const double m2_0 = tr.records[0].m2;
    const double l2_0 = l2_norm_sq(rho0) / trapz_mass(rho0) / trapz_mass(rho0);
    CHECK(r.m2 <= 2.0 * m2_0 + 2.0 * cfg.T * l2_0 + 1e-10);
    CHECK(std::is_sorted(tr.snapshots[n].xs.begin(), tr.snapshots[n].xs.end()));
  }
  CHECK(sum_sq <= tr.records[0].energy + 1e-10);

  // Hoelder continuity with c = sqrt(2 W[rho0])
  const double c = std::sqrt(2.0 * tr.records[0].energy);
  for (size_t i = 0; i < tr.snapshots.size(); i += 4)
    for (size_t j = i + 1; j < tr.snapshots.size(); j += 4) {
      const double d =
          std::sqrt(wasserstein2_sq_1d(tr.snapshots[i], tr.snapshots[j]));
      const double gap = cfg.tau * static_cast<double>(j - i);
      CHECK(d <= c * (std::sqrt(gap) + std::sqrt(cfg.tau)) + 1e-12);
    }
}

TEST_CASE("semi-implicit step decouples and respects symmetry") {
  const MollifierKernel V = MollifierKernel::gaussian(1.0);
  const double eps = 0.4;
  JkoConfig cfg;
  // the default 1e-9*N tolerance (N=6 here) sits below the interpolation
  // consistency of the tabulated cross kernels; use an explicit tolerance
  cfg.inner_tol = 1e-7;
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ParticleMeasure p1, p2;
  for (int i = 0; i < 6; ++i) p1.xs.push_back(U(rng));
  p1.sort_1d();
  p2 = p1;

  SUBCASE("decoupled matrix reduces to independent single-species steps") {
    RelativeEnergy re{InteractionKernel::self_convolve(V, eps),
                      InteractionKernel::self_convolve(V, eps),
                      InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                      InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                      DiffusionMatrix(1.0, 0.0, 0.0, 1.0)};
    auto [n1, n2] = semi_implicit_jko_step(p1, p2, 1e-3, re, cfg);
    const InteractionEnergy E{&re.H1, 1.0, true};
    const ParticleMeasure single = jko_step(p1, 1e-3, E, cfg);
    for (int i = 0; i < p1.size(); ++i) {
      CHECK(n1.xs[static_cast<size_t>(i)] ==
            doctest::Approx(single.xs[static_cast<size_t>(i)]).epsilon(1e-12));
      CHECK(n2.xs[static_cast<size_t>(i)] ==
            doctest::Approx(single.xs[static_cast<size_t>(i)]).epsilon(1e-12));
    }
  }
  SUBCASE("symmetric coupled system keeps species identical") {
    RelativeEnergy re{InteractionKernel::self_convolve(V, eps),
                      InteractionKernel::self_convolve(V, eps),
                      InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                      InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                      DiffusionMatrix(1.0, 0.4, 0.4, 1.0)};
    auto [n1, n2] = semi_implicit_jko_step(p1, p2, 1e-3, re, cfg);
    for (int i = 0; i < p1.size(); ++i)
      CHECK(n1.xs[static_cast<size_t>(i)] ==
            doctest::Approx(n2.xs[static_cast<size_t>(i)]).epsilon(1e-12));
  }
  SUBCASE("two-particle species against a brute-force grid") {
    ParticleMeasure q1 = particles({-0.1, 0.15});
    ParticleMeasure q2 = particles({-0.05, 0.2});
    RelativeEnergy re{InteractionKernel::self_convolve(V, eps),
                      InteractionKernel::self_convolve(V, eps),
                      InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                      InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                      DiffusionMatrix(1.0, 0.4, 0.4, 1.0)};
    const double tau = 1e-3;
    auto [n1, n2] = semi_implicit_jko_step(q1, q2, tau, re, cfg);
    // species-1 objective with the cross potential frozen at q2
    auto obj = [&](double a, double b) {
      const double qd = (a - q1.xs[0]) * (a - q1.xs[0]) +
                        (b - q1.xs[1]) * (b - q1.xs[1]);
      double self = 0.0;
      const double xs[2] = {a, b};
      for (double xi : xs)
        for (double xj : xs) self += re.H1.value(xi - xj);
      double cross = 0.0;
      for (double xi : xs)
        for (double yj : q2.xs) cross += re.K1.value(xi - yj);
      return qd / (2.0 * tau * 2.0) + self / (2.0 * 4.0) + 0.4 * cross / 4.0;
    };
    double best = 1e300, bx = 0.0, by = 0.0;
    for (double a = q1.xs[0] - 0.003; a <= q1.xs[0] + 0.003; a += 1e-4)
      for (double b = q1.xs[1] - 0.003; b <= q1.xs[1] + 0.003; b += 1e-4) {
        const double v = obj(a, b);
        if (v < best) {
          best = v;
          bx = a;
          by = b;
        }
      }
    CHECK(std::abs(n1.xs[0] - bx) <= 2e-4);
    CHECK(std::abs(n1.xs[1] - by) <= 2e-4);
  }
}

TEST_CASE("nlis trajectory runs and records") {
  const MollifierKernel V = MollifierKernel::gaussian(1.0);
  const double eps = 0.4;
  const MollifierKernel V_eps = V.scaled(eps);
  JkoConfig cfg;
  cfg.tau = 2e-3;
  cfg.T = 0.02;
  RelativeEnergy re{InteractionKernel::self_convolve(V, eps),
                    InteractionKernel::self_convolve(V, eps),
                    InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                    InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                    DiffusionMatrix(1.0, 0.4, 0.4, 1.0)};
  const GridDensity rho0 = barenblatt_grid(0.0, 1.0, -4.0, 4.0, 801);
  const ParticleMeasure mu0 = quantiles_from_density(rho0, 50);
  const DiagGrid diag{-4.0, 4.0, 801};
  auto [t1, t2] = solve_nlis_jko(mu0, mu0, cfg, V_eps, V_eps, re, diag);
  REQUIRE(t1.ok());
  REQUIRE(t1.records.size() == 11);
  for (size_t n = 0; n < t1.snapshots.size(); ++n) {
    const double gap = std::sqrt(wasserstein2_sq_1d(t1.snapshots[n], t2.snapshots[n]));
    CHECK(gap <= 1e-10);
  }
}

TEST_CASE("solver failure keeps a partial trajectory") {
  const MollifierKernel V = MollifierKernel::gaussian(1.0);
  const MollifierKernel V_eps = V.scaled(0.2);
  const InteractionKernel W = InteractionKernel::self_convolve(V, 0.2);
  const InteractionEnergy E{&W, 1.0, true};
  JkoConfig cfg;
  cfg.tau = 1e-3;
  cfg.T = 0.01;
  cfg.max_inner_iters = 1;  // forces a cap error on the first step
  const DiagGrid diag{-4.0, 4.0, 401};
  const GridDensity rho0 = barenblatt_grid(0.0, 1.0, -4.0, 4.0, 401);
  const JkoTrajectory tr = solve_nlie_jko(rho0, 40, cfg, V_eps, E, diag);
  CHECK_FALSE(tr.ok());
  CHECK(tr.snapshots.size() == 1);
  CHECK(tr.error.find("step 1") == 0);
}
