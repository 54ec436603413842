#include "nlpme/jko.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlpme {

void JkoConfig::validate() const {
  if (!(tau > 0.0) || !(T > 0.0) || !(tau < T))
    throw std::invalid_argument("JkoConfig: need 0 < tau < T");
  if (inner_tol < 0.0 || max_inner_iters < 1 || !(armijo_c > 0.0) ||
      !(armijo_shrink > 0.0 && armijo_shrink < 1.0))
    throw std::invalid_argument("JkoConfig: invalid inner-solver parameters");
}

InnerResult minimize_armijo(
    const std::function<double(const std::vector<double>&)>& f,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& grad,
    std::vector<double> x0, double alpha0, double tol, const JkoConfig& cfg) {
  InnerResult res;
  res.x = std::move(x0);
  const size_t n = res.x.size();
  std::vector<double> g(n), trial(n);
  double alpha = alpha0;
  double fx = f(res.x);

  for (long it = 0; it < cfg.max_inner_iters; ++it) {
    grad(res.x, g);
    double ginf = 0.0, gsq = 0.0;
    for (double v : g) {
      ginf = std::max(ginf, std::abs(v));
      gsq += v * v;
    }
    res.grad_inf = ginf;
    if (ginf <= tol) {
      res.converged = true;
      res.iters = it;
      return res;
    }
    // backtracking
    double ft = 0.0;
    for (;;) {
      for (size_t i = 0; i < n; ++i) trial[i] = res.x[i] - alpha * g[i];
      ft = f(trial);
      if (ft <= fx - cfg.armijo_c * alpha * gsq) break;
      alpha *= cfg.armijo_shrink;
      if (alpha < 1e-16 * alpha0)
        throw NonConvergence("minimize_armijo: line search collapsed", ginf);
    }
    res.x.swap(trial);
    fx = ft;
    alpha = std::min(alpha * 2.0, 16.0 * alpha0);
    res.iters = it + 1;
  }
  grad(res.x, g);
  res.grad_inf = 0.0;
  for (double v : g) res.grad_inf = std::max(res.grad_inf, std::abs(v));
  res.converged = res.grad_inf <= tol;
  if (!res.converged && cfg.error_on_cap)
    throw NonConvergence("minimize_armijo: iteration cap exceeded, residual " +
                             std::to_string(res.grad_inf),
                         res.grad_inf);
  return res;
}

namespace {

// Interaction part of the objective gradient: weight (1/N^2) sum_j W'(x_i-x_j).
void interaction_grad(const std::vector<double>& x, const InteractionEnergy& E,
                      std::vector<double>& out) {
  const int N = static_cast<int>(x.size());
  const InteractionKernel& W = *E.kernel;
  const double cut = W.cutoff();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N; ++i) {
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
      const double d = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
      if (d != 0.0 && std::abs(d) < cut) s += W.grad(d);
    }
    out[static_cast<size_t>(i)] = E.weight * s / (static_cast<double>(N) * N);
  }
}

double interaction_value(const std::vector<double>& x, const InteractionEnergy& E) {
  ParticleMeasure tmp;
  tmp.xs = x;
  return interaction_energy(tmp, E);
}

}  // namespace

ParticleMeasure jko_step(const ParticleMeasure& prev, double tau,
                         const InteractionEnergy& E, const JkoConfig& cfg,
                         StepInfo* info) {
  if (!prev.sorted_1d())
    throw std::invalid_argument("jko_step: prev must be sorted (d=1)");
  const int N = prev.size();
  const double inv2tn = 1.0 / (2.0 * tau * N);

  auto f = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) {
      const double d = x[static_cast<size_t>(i)] - prev.xs[static_cast<size_t>(i)];
      s += d * d;
    }
    return inv2tn * s + interaction_value(x, E);
  };
  auto g = [&](const std::vector<double>& x, std::vector<double>& out) {
    interaction_grad(x, E, out);
    for (int i = 0; i < N; ++i)
      out[static_cast<size_t>(i)] +=
          (x[static_cast<size_t>(i)] - prev.xs[static_cast<size_t>(i)]) / (tau * N);
  };

  const double f0 = f(prev.xs);
  InnerResult r = minimize_armijo(f, g, prev.xs, tau * N, cfg.tol_for(N), cfg);

  ParticleMeasure next;
  next.dim = 1;
  next.xs = std::move(r.x);
  if (!next.sorted_1d()) {
    const char* msg =
        "jko_step: particle ordering violated; the optimal 1-D map is monotone, "
        "decrease tau relative to eps";
    if (cfg.order_policy == JkoConfig::OrderPolicy::Assert)
      throw OrderingViolation(msg);
    throw OrderingViolation(std::string("step rejected: ") + msg);
  }
  if (info) {
    info->inner_iters = r.iters;
    info->grad_inf = r.grad_inf;
    info->dW2 = wasserstein2_sq_1d(prev, next);
    info->energy = interaction_value(next.xs, E);
    info->objective_decrease = f0 - (info->dW2 / (2.0 * tau) + info->energy);
  }
  return next;
}

double euler_lagrange_residual(const ParticleMeasure& prev,
                               const ParticleMeasure& next, double tau,
                               const InteractionEnergy& E) {
  const int N = next.size();
  std::vector<double> gi(static_cast<size_t>(N));
  interaction_grad(next.xs, E, gi);
  double r = 0.0;
  for (int i = 0; i < N; ++i) {
    const double v =
        (next.xs[static_cast<size_t>(i)] - prev.xs[static_cast<size_t>(i)]) / tau +
        static_cast<double>(N) * gi[static_cast<size_t>(i)];
    r = std::max(r, std::abs(v));
  }
  return r;
}

namespace {

StepRecord make_record(long step, double t, const ParticleMeasure& mu,
                       double energy, double dW2, long iters, double el,
                       const MollifierKernel& V_eps, const DiagGrid& diag) {
  StepRecord rec;
  rec.step = step;
  rec.t = t;
  rec.energy = energy;
  rec.dW2_increment = dW2;
  rec.inner_iters = iters;
  rec.el_residual = el;
  rec.m2 = second_moment(mu);
  const GridDensity v = mollify(mu, V_eps, diag.a, diag.b, diag.m);
  rec.entropy_v = entropy(v);
  rec.h1_v = h1_seminorm_sq(v);
  return rec;
}

}  // namespace

JkoTrajectory solve_nlie_jko(const ParticleMeasure& mu0, const JkoConfig& cfg,
                             const MollifierKernel& V_eps,
                             const InteractionEnergy& E, const DiagGrid& diag) {
  cfg.validate();
  const long nsteps = static_cast<long>(std::floor(cfg.T / cfg.tau + 1e-9));
  JkoTrajectory traj;
  traj.snapshots.reserve(static_cast<size_t>(nsteps) + 1);
  traj.records.reserve(static_cast<size_t>(nsteps) + 1);

  ParticleMeasure cur = mu0;
  cur.sort_1d();
  traj.snapshots.push_back(cur);
  traj.records.push_back(make_record(0, 0.0, cur, interaction_energy(cur, E), 0.0,
                                     0, 0.0, V_eps, diag));
  for (long n = 1; n <= nsteps; ++n) {
    StepInfo info;
    try {
      ParticleMeasure next = jko_step(cur, cfg.tau, E, cfg, &info);
      const double el = euler_lagrange_residual(cur, next, cfg.tau, E);
      traj.records.push_back(make_record(n, cfg.tau * n, next, info.energy,
                                         info.dW2, info.inner_iters, el, V_eps,
                                         diag));
      traj.snapshots.push_back(next);
      cur = std::move(next);
    } catch (const std::exception& e) {
      traj.error = "step " + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  return traj;
}

JkoTrajectory solve_nlie_jko(const GridDensity& rho0, int N, const JkoConfig& cfg,
                             const MollifierKernel& V_eps,
                             const InteractionEnergy& E, const DiagGrid& diag) {
  return solve_nlie_jko(quantiles_from_density(rho0, N), cfg, V_eps, E, diag);
}

namespace {

// Single-species semi-implicit objective: self energy plus the frozen cross
// potential (A_cross/N) sum_i (K * rho_other^prev)(x_i).
ParticleMeasure species_step(const ParticleMeasure& prev,
                             const ParticleMeasure& other_prev, double tau,
                             double a_self, const InteractionKernel& H,
                             double a_cross, const InteractionKernel& K,
                             const JkoConfig& cfg, StepInfo* info) {
  const int N = prev.size();
  const int M = other_prev.size();
  const double inv2tn = 1.0 / (2.0 * tau * N);
  const InteractionEnergy self{&H, a_self, true};
  const double cutK = K.cutoff();

  auto frozen_potential = [&](double xi) {
    double s = 0.0;
    for (int j = 0; j < M; ++j) {
      const double d = xi - other_prev.xs[static_cast<size_t>(j)];
      if (std::abs(d) < cutK) s += K.value(d);
    }
    return s / M;
  };
  auto f = [&](const std::vector<double>& x) {
    double quad = 0.0, pot = 0.0;
    for (int i = 0; i < N; ++i) {
      const double d = x[static_cast<size_t>(i)] - prev.xs[static_cast<size_t>(i)];
      quad += d * d;
      pot += frozen_potential(x[static_cast<size_t>(i)]);
    }
    return inv2tn * quad + interaction_value(x, self) + a_cross * pot / N;
  };
  auto g = [&](const std::vector<double>& x, std::vector<double>& out) {
    interaction_grad(x, self, out);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N; ++i) {
      double s = 0.0;
      for (int j = 0; j < M; ++j) {
        const double d = x[static_cast<size_t>(i)] - other_prev.xs[static_cast<size_t>(j)];
        if (d != 0.0 && std::abs(d) < cutK) s += K.grad(d);
      }
      out[static_cast<size_t>(i)] +=
          a_cross * s / (static_cast<double>(N) * M) +
          (x[static_cast<size_t>(i)] - prev.xs[static_cast<size_t>(i)]) / (tau * N);
    }
  };

  InnerResult r = minimize_armijo(f, g, prev.xs, tau * N, cfg.tol_for(N), cfg);
  ParticleMeasure next;
  next.dim = 1;
  next.xs = std::move(r.x);
  if (!next.sorted_1d())
    throw OrderingViolation("semi_implicit_jko_step: species ordering violated");
  if (info) {
    info->inner_iters = r.iters;
    info->grad_inf = r.grad_inf;
    info->dW2 = wasserstein2_sq_1d(prev, next);
    info->energy = interaction_energy(next, self);
  }
  return next;
}

}  // namespace

std::pair<ParticleMeasure, ParticleMeasure> semi_implicit_jko_step(
    const ParticleMeasure& prev1, const ParticleMeasure& prev2, double tau,
    const RelativeEnergy& re, const JkoConfig& cfg, StepInfo* info1,
    StepInfo* info2) {
  ParticleMeasure n1 = species_step(prev1, prev2, tau, re.A.a11, re.H1, re.A.a12,
                                    re.K1, cfg, info1);
  ParticleMeasure n2 = species_step(prev2, prev1, tau, re.A.a22, re.H2, re.A.a21,
                                    re.K2, cfg, info2);
  return {std::move(n1), std::move(n2)};
}

std::pair<JkoTrajectory, JkoTrajectory> solve_nlis_jko(
    const ParticleMeasure& mu0_1, const ParticleMeasure& mu0_2,
    const JkoConfig& cfg, const MollifierKernel& V1_eps,
    const MollifierKernel& V2_eps, const RelativeEnergy& re, const DiagGrid& diag) {
  cfg.validate();
  const long nsteps = static_cast<long>(std::floor(cfg.T / cfg.tau + 1e-9));
  JkoTrajectory t1, t2;
  ParticleMeasure c1 = mu0_1, c2 = mu0_2;
  c1.sort_1d();
  c2.sort_1d();
  const InteractionEnergy e1{&re.H1, re.A.a11, true};
  const InteractionEnergy e2{&re.H2, re.A.a22, true};
  t1.snapshots.push_back(c1);
  t2.snapshots.push_back(c2);
  t1.records.push_back(make_record(0, 0.0, c1, interaction_energy(c1, e1), 0.0, 0,
                                   0.0, V1_eps, diag));
  t2.records.push_back(make_record(0, 0.0, c2, interaction_energy(c2, e2), 0.0, 0,
                                   0.0, V2_eps, diag));
  for (long n = 1; n <= nsteps; ++n) {
    StepInfo i1, i2;
    try {
      auto [n1, n2] = semi_implicit_jko_step(c1, c2, cfg.tau, re, cfg, &i1, &i2);
      // stationarity residual of the decoupled objective scales as N * |grad G|
      t1.records.push_back(make_record(n, cfg.tau * n, n1, i1.energy, i1.dW2,
                                       i1.inner_iters, n1.size() * i1.grad_inf,
                                       V1_eps, diag));
      t2.records.push_back(make_record(n, cfg.tau * n, n2, i2.energy, i2.dW2,
                                       i2.inner_iters, n2.size() * i2.grad_inf,
                                       V2_eps, diag));
      t1.snapshots.push_back(n1);
      t2.snapshots.push_back(n2);
      c1 = std::move(n1);
      c2 = std::move(n2);
    } catch (const std::exception& e) {
      t1.error = t2.error = "step " + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  return {std::move(t1), std::move(t2)};
}

}  // namespace nlpme
