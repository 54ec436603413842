#include "nlpme/particles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nlpme {

bool ParticleMeasure::sorted_1d() const {
  return std::is_sorted(xs.begin(), xs.end());
}

void ParticleMeasure::sort_1d() { std::sort(xs.begin(), xs.end()); }

void ParticleMeasure::check_finite() const {
  for (double x : xs)
    if (!std::isfinite(x)) throw std::runtime_error("particle position is not finite");
  for (double y : ys)
    if (!std::isfinite(y)) throw std::runtime_error("particle position is not finite");
}

ParticleMeasure quantiles_from_density(const GridDensity& rho0, int N) {
  if (N < 2) throw std::invalid_argument("quantiles_from_density: need N >= 2");
  const double mass = trapz_mass(rho0);
  if (!(mass > 0.0))
    throw std::invalid_argument("quantiles_from_density: zero-mass density");

  // CDF at grid nodes by trapezoid, then piecewise-linear inversion.
  const int m = rho0.m;
  const double dx = rho0.dx();
  std::vector<double> cdf(static_cast<size_t>(m), 0.0);
  for (int k = 1; k < m; ++k)
    cdf[k] = cdf[k - 1] + 0.5 * (rho0.values[k - 1] + rho0.values[k]) * dx;
  for (double& c : cdf) c /= cdf.back();

  ParticleMeasure mu;
  mu.dim = 1;
  mu.xs.resize(static_cast<size_t>(N));
  int k = 0;
  for (int i = 0; i < N; ++i) {
    const double s = (i + 0.5) / N;
    while (k + 2 < m && cdf[k + 1] <= s) ++k;
    const double c0 = cdf[k], c1 = cdf[k + 1];
    const double t = c1 > c0 ? (s - c0) / (c1 - c0) : 0.5;
    mu.xs[static_cast<size_t>(i)] = rho0.node(k) + t * dx;
  }
  mu.sort_1d();
  return mu;
}

GridDensity mollify(const ParticleMeasure& mu, const MollifierKernel& V_eps,
                    double a, double b, int m) {
  if (mu.dim != 1) throw std::invalid_argument("mollify: d=1 only");
  const auto [lo, hi] = std::minmax_element(mu.xs.begin(), mu.xs.end());
  if (mu.xs.empty() || *lo < a || *hi > b)
    throw std::runtime_error("mollify: particles outside grid coverage, extremes [" +
                             std::to_string(mu.xs.empty() ? 0.0 : *lo) + ", " +
                             std::to_string(mu.xs.empty() ? 0.0 : *hi) + "]");
  GridDensity v(a, b, m);
  const double cut = V_eps.cutoff();
  const int N = mu.size();
#pragma omp parallel for schedule(static)
  for (int k = 0; k < m; ++k) {
    const double x = v.node(k);
    double s = 0.0;
    for (int i = 0; i < N; ++i) {
      const double d = x - mu.xs[static_cast<size_t>(i)];
      if (std::abs(d) < cut) s += V_eps.value(d);
    }
    v.values[static_cast<size_t>(k)] = s / N;
  }
  return v;
}

namespace {

// Quantile functions of equal-weight atomic measures are step functions with
// breakpoints at i/N; integrate |F1^{-1}-F2^{-1}|^p exactly on the common
// refinement of both breakpoint sets.
template <typename Cost>
double quantile_integral(const ParticleMeasure& mu, const ParticleMeasure& nu,
                         Cost cost) {
  if (mu.dim != 1 || nu.dim != 1)
    throw std::invalid_argument("wasserstein: d=1 only (d=2 transport out of scope)");
  if (mu.xs.empty() || nu.xs.empty())
    throw std::invalid_argument("wasserstein: empty measure");
  std::vector<double> x = mu.xs, y = nu.xs;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const size_t n1 = x.size(), n2 = y.size();
  if (n1 == n2) {
    double s = 0.0;
    for (size_t i = 0; i < n1; ++i) s += cost(x[i] - y[i]);
    return s / static_cast<double>(n1);
  }
  double s = 0.0, prev = 0.0;
  size_t i = 0, j = 0;
  while (i < n1 && j < n2) {
    const double bi = static_cast<double>(i + 1) / n1;
    const double bj = static_cast<double>(j + 1) / n2;
    const double next = std::min(bi, bj);
    s += (next - prev) * cost(x[i] - y[j]);
    prev = next;
    if (bi <= next) ++i;
    if (bj <= next) ++j;
  }
  return s;
}

}  // namespace

double wasserstein2_sq_1d(const ParticleMeasure& mu, const ParticleMeasure& nu) {
  return quantile_integral(mu, nu, [](double d) { return d * d; });
}

double wasserstein1_1d(const ParticleMeasure& mu, const ParticleMeasure& nu) {
  return quantile_integral(mu, nu, [](double d) { return std::abs(d); });
}

double second_moment(const ParticleMeasure& mu) {
  double s = 0.0;
  for (size_t i = 0; i < mu.xs.size(); ++i) {
    s += mu.xs[i] * mu.xs[i];
    if (mu.dim == 2) s += mu.ys[i] * mu.ys[i];
  }
  return mu.xs.empty() ? 0.0 : s / static_cast<double>(mu.xs.size());
}

}  // namespace nlpme
