#include "nlpme/reference.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlpme {

namespace {

// Standard m=2, d=1 Barenblatt of dt rho = Lap(rho^2):
//   rho(s,x) = s^{-1/3} (C - xi^2/12)_+ ,  xi = x / s^{1/3},
// with C fixed by unit mass: (4/3) C^{3/2} sqrt(12) = 1.
const double kBarenblattC = std::pow(3.0 / (4.0 * std::sqrt(12.0)), 2.0 / 3.0);

double dilated_time(double t, double t0) {
  const double s = 0.5 * (t + t0);
  if (!(s > 0.0))
    throw std::domain_error("barenblatt: need t + t0 > 0");
  return s;
}

}  // namespace

double barenblatt_value(double t, double x, double t0) {
  const double s = dilated_time(t, t0);
  const double sb = std::cbrt(s);
  const double xi = x / sb;
  const double v = kBarenblattC - xi * xi / 12.0;
  return v > 0.0 ? v / sb : 0.0;
}

double barenblatt_support_halfwidth(double t, double t0) {
  const double s = dilated_time(t, t0);
  return std::sqrt(12.0 * kBarenblattC) * std::cbrt(s);
}

double barenblatt_m2(double t, double t0) {
  // int xi^2 (C - xi^2/12) dxi over the support = (4/15) C xi0^3
  const double s = dilated_time(t, t0);
  const double xi0 = std::sqrt(12.0 * kBarenblattC);
  return (4.0 / 15.0) * kBarenblattC * xi0 * xi0 * xi0 * std::cbrt(s * s);
}

GridDensity barenblatt_grid(double t, double t0, double a, double b, int m) {
  const double hw = barenblatt_support_halfwidth(t, t0);
  if (-hw < a || hw > b)
    throw std::runtime_error("barenblatt_grid: support [-" + std::to_string(hw) +
                             ", " + std::to_string(hw) + "] exceeds the grid");
  GridDensity v(a, b, m);
  for (int k = 0; k < m; ++k)
    v.values[static_cast<size_t>(k)] = barenblatt_value(t, v.node(k), t0);
  const double mass = trapz_mass(v);
  for (double& x : v.values) x /= mass;
  return v;
}

WeakFormResidual weak_residual_pme(const std::vector<GridDensity>& snaps, double dt,
                                   const std::vector<TestFunction>& phis) {
  if (snaps.size() < 2) throw std::invalid_argument("weak_residual_pme: need >= 2 snapshots");
  const GridDensity& g0 = snaps.front();
  const int m = g0.m;
  const double h = g0.dx();

  WeakFormResidual out;
  out.per_fn_max.assign(phis.size(), 0.0);
  for (size_t p = 0; p < phis.size(); ++p) {
    const TestFunction& phi = phis[p];
    auto pairing = [&](const GridDensity& v) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) {
        const double w = (k == 0 || k == m - 1) ? 0.5 : 1.0;
        s += w * phi.value(v.node(k)) * v.values[static_cast<size_t>(k)];
      }
      return s * h;
    };
    auto flux = [&](const GridDensity& v) {
      // int v phi' v' dx with central differences for v'
      double s = 0.0;
      for (int k = 0; k < m; ++k) {
        double dv;
        if (k == 0)
          dv = (v.values[1] - v.values[0]) / h;
        else if (k == m - 1)
          dv = (v.values[static_cast<size_t>(m - 1)] - v.values[static_cast<size_t>(m - 2)]) / h;
        else
          dv = (v.values[static_cast<size_t>(k + 1)] - v.values[static_cast<size_t>(k - 1)]) / (2.0 * h);
        const double w = (k == 0 || k == m - 1) ? 0.5 : 1.0;
        s += w * v.values[static_cast<size_t>(k)] * phi.grad(v.node(k)) * dv;
      }
      return s * h;
    };
    const double p0 = pairing(g0);
    double acc = 0.0, worst = 0.0;
    for (size_t n = 1; n < snaps.size(); ++n) {
      if (!snaps[n].same_shape(g0))
        throw std::invalid_argument("weak_residual_pme: snapshots must share a grid");
      acc += dt * flux(snaps[n - 1]);  // left endpoint in time
      const double r = pairing(snaps[n]) - p0 + acc;
      worst = std::max(worst, std::abs(r));
    }
    out.per_fn_max[p] = worst;
    out.max_abs = std::max(out.max_abs, worst);
  }
  return out;
}

WeakFormResidual weak_residual_nlie(const std::vector<ParticleMeasure>& snaps,
                                    double tau, const InteractionEnergy& E,
                                    const std::vector<TestFunction>& phis) {
  if (snaps.size() < 2)
    throw std::invalid_argument("weak_residual_nlie: need >= 2 snapshots");
  const InteractionKernel& W = *E.kernel;
  const double cut = W.cutoff();

  WeakFormResidual out;
  out.per_fn_max.assign(phis.size(), 0.0);
  for (size_t p = 0; p < phis.size(); ++p) {
    const TestFunction& phi = phis[p];
    auto mean_phi = [&](const ParticleMeasure& mu) {
      double s = 0.0;
      for (double x : mu.xs) s += phi.value(x);
      return s / mu.size();
    };
    auto antisym = [&](const ParticleMeasure& mu) {
      const int N = mu.size();
      std::vector<double> rows(static_cast<size_t>(N));
#pragma omp parallel for schedule(static)
      for (int i = 0; i < N; ++i) {
        double s = 0.0;
        const double xi = mu.xs[static_cast<size_t>(i)];
        const double gi = phi.grad(xi);
        for (int j = 0; j < N; ++j) {
          const double d = xi - mu.xs[static_cast<size_t>(j)];
          if (d == 0.0 || std::abs(d) >= cut) continue;
          s += (gi - phi.grad(mu.xs[static_cast<size_t>(j)])) * W.grad(d);
        }
        rows[static_cast<size_t>(i)] = s;
      }
      double s = 0.0;
      for (double r : rows) s += r;
      return 0.5 * E.weight * s / (static_cast<double>(mu.size()) * mu.size());
    };
    const double p0 = mean_phi(snaps.front());
    double acc = 0.0, worst = 0.0;
    for (size_t n = 1; n < snaps.size(); ++n) {
      acc += tau * antisym(snaps[n - 1]);  // left endpoint in time
      const double r = mean_phi(snaps[n]) - p0 + acc;
      worst = std::max(worst, std::abs(r));
    }
    out.per_fn_max[p] = worst;
    out.max_abs = std::max(out.max_abs, worst);
  }
  return out;
}

}  // namespace nlpme
