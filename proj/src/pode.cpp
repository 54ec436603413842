#include "nlpme/pode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nlpme {

void OdeConfig::validate() const {
  if (!(dt > 0.0) || !(T > 0.0) || !(dt < T))
    throw std::invalid_argument("OdeConfig: need 0 < dt < T");
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("OdeConfig: dimension must be 1 or 2");
}

std::vector<double> nlie_rhs(const ParticleMeasure& mu, const InteractionEnergy& E) {
  return interaction_force(mu, E);
}

std::pair<std::vector<double>, std::vector<double>> nlis_rhs(
    const ParticleMeasure& mu1, const ParticleMeasure& mu2, const RelativeEnergy& re) {
  const int N1 = mu1.size(), N2 = mu2.size();
  std::vector<double> v1(static_cast<size_t>(N1)), v2(static_cast<size_t>(N2));
  const double c1 = re.K1.cutoff(), c2 = re.K2.cutoff();
  const double h1 = re.H1.cutoff(), h2 = re.H2.cutoff();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N1; ++i) {
    double s = 0.0;
    const double xi = mu1.xs[static_cast<size_t>(i)];
    for (int j = 0; j < N1; ++j) {
      const double d = xi - mu1.xs[static_cast<size_t>(j)];
      if (d != 0.0 && std::abs(d) < h1) s += re.A.a11 * re.H1.grad(d);
    }
    double sc = 0.0;
    for (int j = 0; j < N2; ++j) {
      const double d = xi - mu2.xs[static_cast<size_t>(j)];
      if (d != 0.0 && std::abs(d) < c1) sc += re.K1.grad(d);
    }
    v1[static_cast<size_t>(i)] = -s / N1 - re.A.a12 * sc / N2;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N2; ++i) {
    double s = 0.0;
    const double xi = mu2.xs[static_cast<size_t>(i)];
    for (int j = 0; j < N2; ++j) {
      const double d = xi - mu2.xs[static_cast<size_t>(j)];
      if (d != 0.0 && std::abs(d) < h2) s += re.A.a22 * re.H2.grad(d);
    }
    double sc = 0.0;
    for (int j = 0; j < N1; ++j) {
      const double d = xi - mu1.xs[static_cast<size_t>(j)];
      if (d != 0.0 && std::abs(d) < c2) sc += re.K2.grad(d);
    }
    v2[static_cast<size_t>(i)] = -s / N2 - re.A.a21 * sc / N1;
  }
  return {std::move(v1), std::move(v2)};
}

namespace {

template <typename Rhs>
void advance(std::vector<double>& x, double dt, OdeConfig::Integrator integ, Rhs rhs) {
  const size_t n = x.size();
  std::vector<double> k1 = rhs(x);
  if (integ == OdeConfig::Integrator::ExplicitEuler) {
    for (size_t i = 0; i < n; ++i) x[i] += dt * k1[i];
    return;
  }
  std::vector<double> tmp(n);
  for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
  std::vector<double> k2 = rhs(tmp);
  for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
  std::vector<double> k3 = rhs(tmp);
  for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
  std::vector<double> k4 = rhs(tmp);
  for (size_t i = 0; i < n; ++i)
    x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

void check_blowup(const std::vector<double>& x, long step) {
  for (double v : x)
    if (!std::isfinite(v))
      throw std::runtime_error("integrate: non-finite position at step " +
                               std::to_string(step));
}

StepRecord ode_record(long step, double t, const ParticleMeasure& mu, double energy,
                      double dW2, const MollifierKernel& V_eps, const DiagGrid& diag) {
  StepRecord rec;
  rec.step = step;
  rec.t = t;
  rec.energy = energy;
  rec.dW2_increment = dW2;
  rec.inner_iters = 0;
  rec.el_residual = 0.0;
  rec.m2 = second_moment(mu);
  const GridDensity v = mollify(mu, V_eps, diag.a, diag.b, diag.m);
  rec.entropy_v = entropy(v);
  rec.h1_v = h1_seminorm_sq(v);
  return rec;
}

}  // namespace

OdeTrajectory integrate_nlie(const ParticleMeasure& mu0, const InteractionEnergy& E,
                             const OdeConfig& cfg, const MollifierKernel& V_eps,
                             const DiagGrid& diag) {
  cfg.validate();
  const long nsteps = static_cast<long>(std::floor(cfg.T / cfg.dt + 1e-9));
  OdeTrajectory traj;
  ParticleMeasure cur = mu0;
  cur.sort_1d();
  traj.snapshots.push_back(cur);
  try {
    traj.records.push_back(
        ode_record(0, 0.0, cur, interaction_energy(cur, E), 0.0, V_eps, diag));
  } catch (const std::exception& e) {
    traj.error = std::string("step 0: ") + e.what();
    return traj;
  }

  auto rhs = [&](const std::vector<double>& x) {
    ParticleMeasure tmp;
    tmp.xs = x;
    return interaction_force(tmp, E);
  };
  for (long n = 1; n <= nsteps; ++n) {
    std::vector<double> x = cur.xs;
    advance(x, cfg.dt, cfg.integrator, rhs);
    ParticleMeasure next;
    try {
      check_blowup(x, n);
      next.xs = std::move(x);
      if (!next.sorted_1d()) {
        ++traj.crossings;
        next.sort_1d();
      }
      traj.records.push_back(ode_record(n, cfg.dt * n, next,
                                        interaction_energy(next, E),
                                        wasserstein2_sq_1d(cur, next), V_eps, diag));
    } catch (const std::exception& e) {
      traj.error = "step " + std::to_string(n) + ": " + e.what();
      break;
    }
    traj.snapshots.push_back(next);
    cur = std::move(next);
  }
  return traj;
}

std::pair<OdeTrajectory, OdeTrajectory> integrate_nlis(
    const ParticleMeasure& mu0_1, const ParticleMeasure& mu0_2,
    const RelativeEnergy& re, const OdeConfig& cfg, const MollifierKernel& V1_eps,
    const MollifierKernel& V2_eps, const DiagGrid& diag) {
  cfg.validate();
  const long nsteps = static_cast<long>(std::floor(cfg.T / cfg.dt + 1e-9));
  OdeTrajectory t1, t2;
  ParticleMeasure c1 = mu0_1, c2 = mu0_2;
  c1.sort_1d();
  c2.sort_1d();
  const InteractionEnergy e1{&re.H1, re.A.a11, true};
  const InteractionEnergy e2{&re.H2, re.A.a22, true};
  t1.snapshots.push_back(c1);
  t2.snapshots.push_back(c2);
  t1.records.push_back(ode_record(0, 0.0, c1, interaction_energy(c1, e1), 0.0, V1_eps, diag));
  t2.records.push_back(ode_record(0, 0.0, c2, interaction_energy(c2, e2), 0.0, V2_eps, diag));

  const size_t n1 = c1.xs.size();
  auto joint_rhs = [&](const std::vector<double>& xy) {
    ParticleMeasure a, b;
    a.xs.assign(xy.begin(), xy.begin() + static_cast<long>(n1));
    b.xs.assign(xy.begin() + static_cast<long>(n1), xy.end());
    auto [va, vb] = nlis_rhs(a, b, re);
    std::vector<double> out;
    out.reserve(xy.size());
    out.insert(out.end(), va.begin(), va.end());
    out.insert(out.end(), vb.begin(), vb.end());
    return out;
  };
  std::vector<double> state = c1.xs;
  state.insert(state.end(), c2.xs.begin(), c2.xs.end());
  for (long n = 1; n <= nsteps; ++n) {
    advance(state, cfg.dt, cfg.integrator, joint_rhs);
    ParticleMeasure a, b;
    try {
      check_blowup(state, n);
      a.xs.assign(state.begin(), state.begin() + static_cast<long>(n1));
      b.xs.assign(state.begin() + static_cast<long>(n1), state.end());
      if (!a.sorted_1d()) { ++t1.crossings; a.sort_1d(); }
      if (!b.sorted_1d()) { ++t2.crossings; b.sort_1d(); }
      t1.records.push_back(ode_record(n, cfg.dt * n, a, interaction_energy(a, e1),
                                      wasserstein2_sq_1d(c1, a), V1_eps, diag));
      t2.records.push_back(ode_record(n, cfg.dt * n, b, interaction_energy(b, e2),
                                      wasserstein2_sq_1d(c2, b), V2_eps, diag));
    } catch (const std::exception& e) {
      t1.error = t2.error = "step " + std::to_string(n) + ": " + e.what();
      if (t1.records.size() > t2.records.size()) t1.records.pop_back();
      break;
    }
    t1.snapshots.push_back(a);
    t2.snapshots.push_back(b);
    c1 = std::move(a);
    c2 = std::move(b);
  }
  return {std::move(t1), std::move(t2)};
}

ParticleMeasure integrate_nlie_2d(const ParticleMeasure& mu0,
                                  const InteractionKernel& W, const OdeConfig& cfg) {
  cfg.validate();
  if (mu0.dim != 2 || mu0.ys.size() != mu0.xs.size())
    throw std::invalid_argument("integrate_nlie_2d: need d=2 particles");
  const long nsteps = static_cast<long>(std::floor(cfg.T / cfg.dt + 1e-9));
  const int N = mu0.size();
  auto rhs = [&](const std::vector<double>& s) {
    std::vector<double> out(s.size(), 0.0);
    for (int i = 0; i < N; ++i) {
      double fx = 0.0, fy = 0.0;
      for (int j = 0; j < N; ++j) {
        const double dx = s[2 * i] - s[2 * j];
        const double dy = s[2 * i + 1] - s[2 * j + 1];
        const auto g = W.grad2(dx, dy);
        fx -= g[0];
        fy -= g[1];
      }
      out[2 * i] = fx / N;
      out[2 * i + 1] = fy / N;
    }
    return out;
  };
  std::vector<double> state(static_cast<size_t>(2 * N));
  for (int i = 0; i < N; ++i) {
    state[2 * i] = mu0.xs[static_cast<size_t>(i)];
    state[2 * i + 1] = mu0.ys[static_cast<size_t>(i)];
  }
  for (long n = 1; n <= nsteps; ++n) {
    advance(state, cfg.dt, cfg.integrator, rhs);
    check_blowup(state, n);
  }
  ParticleMeasure out;
  out.dim = 2;
  out.xs.resize(static_cast<size_t>(N));
  out.ys.resize(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    out.xs[static_cast<size_t>(i)] = state[2 * i];
    out.ys[static_cast<size_t>(i)] = state[2 * i + 1];
  }
  return out;
}

}  // namespace nlpme
