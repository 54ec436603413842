#include <cmath>
#include <random>

#include "doctest.h"
#include "nlpme/pode.hpp"
#include "nlpme/reference.hpp"

using namespace nlpme;

namespace {

ParticleMeasure particles(std::vector<double> xs) {
  ParticleMeasure mu;
  mu.xs = std::move(xs);
  return mu;
}

}  // namespace

TEST_CASE("rhs closed relations") {
  const MollifierKernel V = MollifierKernel::gaussian(1.0);
  const InteractionKernel W = InteractionKernel::self_convolve(V, 0.5);
  const InteractionEnergy E{&W, 1.0, true};
  SUBCASE("single particle: zero velocity") {
    CHECK(nlie_rhs(particles({0.3}), E)[0] == 0.0);
  }
  SUBCASE("symmetric pair: opposite velocities") {
    const auto v = nlie_rhs(particles({-0.4, 0.4}), E);
    CHECK(v[0] == doctest::Approx(-v[1]).epsilon(1e-15));
  }
  SUBCASE("matches finite differences of N * energy") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    ParticleMeasure mu;
    for (int i = 0; i < 10; ++i) mu.xs.push_back(U(rng));
    mu.sort_1d();
    const auto v = nlie_rhs(mu, E);
    const double h = 1e-6;
    for (int i = 0; i < 10; ++i) {
      ParticleMeasure up = mu, dn = mu;
      up.xs[static_cast<size_t>(i)] += h;
      dn.xs[static_cast<size_t>(i)] -= h;
      const double fd = mu.size() *
                        (interaction_energy(up, E) - interaction_energy(dn, E)) /
                        (2.0 * h);
      CHECK(v[static_cast<size_t>(i)] == doctest::Approx(-fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("nlis rhs") {
  const MollifierKernel V = MollifierKernel::gaussian(1.0);
  const double eps = 0.5;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ParticleMeasure m1, m2;
  for (int i = 0; i < 5; ++i) {
    m1.xs.push_back(U(rng));
    m2.xs.push_back(U(rng));
  }
  m1.sort_1d();
  m2.sort_1d();
  SUBCASE("decoupled matrix gives two nlie evaluations") {
    RelativeEnergy re{InteractionKernel::self_convolve(V, eps),
                      InteractionKernel::self_convolve(V, eps),
                      InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                      InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                      DiffusionMatrix(1.0, 0.0, 0.0, 1.0)};
    const auto [v1, v2] = nlis_rhs(m1, m2, re);
    const InteractionEnergy E{&re.H1, 1.0, true};
    const auto w1 = nlie_rhs(m1, E);
    const auto w2 = nlie_rhs(m2, E);
    for (size_t i = 0; i < v1.size(); ++i) {
      CHECK(v1[i] == doctest::Approx(w1[i]).epsilon(1e-14));
      CHECK(v2[i] == doctest::Approx(w2[i]).epsilon(1e-14));
    }
  }
  SUBCASE("symmetric data gives identical species velocities") {
    RelativeEnergy re{InteractionKernel::self_convolve(V, eps),
                      InteractionKernel::self_convolve(V, eps),
                      InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                      InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                      DiffusionMatrix(1.0, 0.4, 0.4, 1.0)};
    const auto [v1, v2] = nlis_rhs(m1, m1, re);
    for (size_t i = 0; i < v1.size(); ++i)
      CHECK(v1[i] == doctest::Approx(v2[i]).epsilon(1e-14));
  }
}

TEST_CASE("integration properties") {
  const MollifierKernel V = MollifierKernel::gaussian(1.0);
  const MollifierKernel V_eps = V.scaled(0.5);
  const InteractionKernel W = InteractionKernel::self_convolve(V, 0.5);
  const InteractionEnergy E{&W, 1.0, true};
  const DiagGrid diag{-5.0, 5.0, 501};

  SUBCASE("single particle stays put") {
    OdeConfig cfg;
    cfg.dt = 1e-3;
    cfg.T = 0.05;
    const OdeTrajectory tr = integrate_nlie(particles({0.2}), E, cfg, V_eps, diag);
    REQUIRE(tr.ok());
    CHECK(tr.snapshots.back().xs[0] == doctest::Approx(0.2).epsilon(1e-14));
  }
  SUBCASE("rk4 order via Richardson") {
    const ParticleMeasure mu0 = particles({-0.3, 0.25});
    OdeConfig c1;
    c1.dt = 4e-3;
    c1.T = 0.2;
    OdeConfig c2 = c1;
    c2.dt = 2e-3;
    OdeConfig c3 = c1;
    c3.dt = 1e-3;
    const auto t1 = integrate_nlie(mu0, E, c1, V_eps, diag);
    const auto t2 = integrate_nlie(mu0, E, c2, V_eps, diag);
    const auto t3 = integrate_nlie(mu0, E, c3, V_eps, diag);
    const double e1 = std::abs(t1.snapshots.back().xs[0] - t3.snapshots.back().xs[0]);
    const double e2 = std::abs(t2.snapshots.back().xs[0] - t3.snapshots.back().xs[0]);
    // 4th order: halving dt shrinks the gap-to-fine by about 16 (15 vs 16
    // because the fine reference is not exact)
    CHECK(e2 <= e1 / 8.0);
  }
  SUBCASE("energy decreasing and center of mass conserved") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    ParticleMeasure mu0;
    for (int i = 0; i < 30; ++i) mu0.xs.push_back(U(rng));
    mu0.sort_1d();
    OdeConfig cfg;
    cfg.dt = 1e-3;
    cfg.T = 0.1;
    const OdeTrajectory tr = integrate_nlie(mu0, E, cfg, V_eps, diag);
    REQUIRE(tr.ok());
    for (size_t n = 1; n < tr.records.size(); ++n)
      CHECK(tr.records[n].energy <= tr.records[n - 1].energy + 1e-12);
    double com0 = 0.0, comT = 0.0;
    for (double x : tr.snapshots.front().xs) com0 += x;
    for (double x : tr.snapshots.back().xs) comT += x;
    CHECK(std::abs(comT - com0) / mu0.size() <= 1e-10 * cfg.T * 10.0 + 1e-12);
  }
  SUBCASE("blow-up reported with partial data") {
    // explicit Euler with an absurd dt on a stiff configuration still stays
    // finite for this kernel; instead force non-finite input detection
    ParticleMeasure mu0 = particles({-1e150, 1e150});
    OdeConfig cfg;
    cfg.dt = 1e3;
    cfg.T = 1e4;
    cfg.integrator = OdeConfig::Integrator::ExplicitEuler;
    const OdeTrajectory tr = integrate_nlie(mu0, E, cfg, V_eps, diag);
    CHECK(tr.snapshots.size() >= 1);
    CHECK_FALSE(tr.ok());
  }
}

TEST_CASE("nlis integration keeps symmetric species together") {
  const MollifierKernel V = MollifierKernel::gaussian(1.0);
  const double eps = 0.4;
  const MollifierKernel V_eps = V.scaled(eps);
  RelativeEnergy re{InteractionKernel::self_convolve(V, eps),
                    InteractionKernel::self_convolve(V, eps),
                    InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                    InteractionKernel::cross_convolve(V, CrossWeight::dirac(), V, eps),
                    DiffusionMatrix(1.0, 0.4, 0.4, 1.0)};
  const GridDensity rho0 = barenblatt_grid(0.0, 1.0, -4.0, 4.0, 401);
  const ParticleMeasure mu0 = quantiles_from_density(rho0, 40);
  OdeConfig cfg;
  cfg.dt = 1e-3;
  cfg.T = 0.02;
  const DiagGrid diag{-4.0, 4.0, 401};
  auto [t1, t2] = integrate_nlis(mu0, mu0, re, cfg, V_eps, V_eps, diag);
  REQUIRE(t1.ok());
  for (size_t n = 0; n < t1.snapshots.size(); ++n)
    CHECK(std::sqrt(wasserstein2_sq_1d(t1.snapshots[n], t2.snapshots[n])) <= 1e-12);
}

TEST_CASE("2-d integration preserves radial symmetry") {
  const MollifierKernel V = MollifierKernel::gaussian(1.0, 2);
  const InteractionKernel W = InteractionKernel::self_convolve(V, 0.5);
  ParticleMeasure mu0;
  mu0.dim = 2;
  mu0.xs = {1.0, -1.0, 0.0, 0.0};
  mu0.ys = {0.0, 0.0, 1.0, -1.0};
  OdeConfig cfg;
  cfg.dt = 1e-3;
  cfg.T = 0.05;
  cfg.dim = 2;
  const ParticleMeasure out = integrate_nlie_2d(mu0, W, cfg);
  // the four-fold symmetric cross stays symmetric and expands radially
  const double r0 = std::hypot(out.xs[0], out.ys[0]);
  for (int i = 1; i < 4; ++i)
    CHECK(std::hypot(out.xs[static_cast<size_t>(i)], out.ys[static_cast<size_t>(i)]) ==
          doctest::Approx(r0).epsilon(1e-12));
  CHECK(r0 > 1.0);
}

TEST_CASE("stiffness heuristic flag") {
  OdeConfig cfg;
  cfg.dt = 0.02;
  CHECK(cfg.dt_exceeds_heuristic(0.1));
  CHECK_FALSE(cfg.dt_exceeds_heuristic(0.3));
}

TEST_CASE("jko vs ode cross-validation at matched parameters") {
  const MollifierKernel V = MollifierKernel::gaussian(1.0);
  const double eps = 0.3;
  const MollifierKernel V_eps = V.scaled(eps);
  const InteractionKernel W = InteractionKernel::self_convolve(V, eps);
  const InteractionEnergy E{&W, 1.0, true};
  const GridDensity rho0 = barenblatt_grid(0.0, 1.0, -4.0, 4.0, 801);
  const ParticleMeasure mu0 = quantiles_from_density(rho0, 60);
  const DiagGrid diag{-4.0, 4.0, 401};

  OdeConfig oc;
  oc.dt = 5e-5;
  oc.T = 0.04;
  const OdeTrajectory ref = integrate_nlie(mu0, E, oc, V_eps, diag);
  REQUIRE(ref.ok());

  double prevC = 0.0;
  for (double tau : {2e-3, 1e-3}) {
    JkoConfig jc;
    jc.tau = tau;
    jc.T = 0.04;
    const JkoTrajectory tr = solve_nlie_jko(mu0, jc, V_eps, E, diag);
    REQUIRE(tr.ok());
    double worst = 0.0;
    for (size_t n = 0; n < tr.snapshots.size(); ++n) {
      const size_t k = static_cast<size_t>(
          std::lround(tau * static_cast<double>(n) / oc.dt));
      worst = std::max(worst, std::sqrt(wasserstein2_sq_1d(
                                  tr.snapshots[n], ref.snapshots[k])));
    }
    const double C = worst / tau;
    if (prevC > 0.0) {
      CHECK(C <= prevC * 1.25);
      CHECK(C >= prevC * 0.75);
    }
    prevC = C;
  }
}
