#include "nlpme/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace nlpme {

DiffusionMatrix::DiffusionMatrix(double a11_, double a12_, double a21_, double a22_)
    : a11(a11_), a12(a12_), a21(a21_), a22(a22_) {
  const double off = 0.5 * (a12 + a21);
  if (!(off >= 0.0) || !(std::min(a11, a22) > off))
    throw std::invalid_argument(
        "DiffusionMatrix: requires min{A11,A22} > (A12+A21)/2 >= 0");
}

namespace {

double row_energy(const ParticleMeasure& mu, const InteractionKernel& W, int i,
                  bool include_diagonal) {
  const int N = mu.size();
  const double xi = mu.xs[static_cast<size_t>(i)];
  const double cut = W.cutoff();
  double s = 0.0;
  for (int j = 0; j < N; ++j) {
    if (j == i) {
      if (include_diagonal) s += W.value(0.0);
      continue;
    }
    const double d = xi - mu.xs[static_cast<size_t>(j)];
    if (std::abs(d) < cut) s += W.value(d);
  }
  return s;
}

}  // namespace

double interaction_energy(const ParticleMeasure& mu, const InteractionEnergy& E) {
  const int N = mu.size();
  if (N == 0) return 0.0;
  std::vector<double> rows(static_cast<size_t>(N));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N; ++i)
    rows[static_cast<size_t>(i)] = row_energy(mu, *E.kernel, i, E.include_diagonal);
  // sequential combine keeps the result independent of the thread count race
  double s = 0.0;
  for (double r : rows) s += r;
  return E.weight * s / (2.0 * static_cast<double>(N) * N);
}

double interaction_energy_serial(const ParticleMeasure& mu, const InteractionEnergy& E) {
  const int N = mu.size();
  if (N == 0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < N; ++i)
    s += row_energy(mu, *E.kernel, i, E.include_diagonal);
  return E.weight * s / (2.0 * static_cast<double>(N) * N);
}

std::vector<double> interaction_force(const ParticleMeasure& mu, const InteractionEnergy& E) {
  const int N = mu.size();
  std::vector<double> f(static_cast<size_t>(N), 0.0);
  const InteractionKernel& W = *E.kernel;
  const double cut = W.cutoff();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N; ++i) {
    const double xi = mu.xs[static_cast<size_t>(i)];
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
      const double d = xi - mu.xs[static_cast<size_t>(j)];
      if (d != 0.0 && std::abs(d) < cut) s += W.grad(d);
    }
    f[static_cast<size_t>(i)] = -E.weight * s / N;
  }
  return f;
}

std::vector<double> interaction_force_serial(const ParticleMeasure& mu, const InteractionEnergy& E) {
  const int N = mu.size();
  std::vector<double> f(static_cast<size_t>(N), 0.0);
  const InteractionKernel& W = *E.kernel;
  for (int i = 0; i < N; ++i) {
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
      const double d = mu.xs[static_cast<size_t>(i)] - mu.xs[static_cast<size_t>(j)];
      if (d != 0.0) s += W.grad(d);
    }
    f[static_cast<size_t>(i)] = -E.weight * s / N;
  }
  return f;
}

namespace {

// \iint K(x-y) dnu(y) dmu(x) as a double sum over equal-weight atoms.
double pair_sum(const ParticleMeasure& mu, const ParticleMeasure& nu,
                const InteractionKernel& K) {
  const int N = mu.size(), M = nu.size();
  const double cut = K.cutoff();
  std::vector<double> rows(static_cast<size_t>(N));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N; ++i) {
    const double xi = mu.xs[static_cast<size_t>(i)];
    double s = 0.0;
    for (int j = 0; j < M; ++j) {
      const double d = xi - nu.xs[static_cast<size_t>(j)];
      if (std::abs(d) < cut) s += K.value(d);
    }
    rows[static_cast<size_t>(i)] = s;
  }
  double s = 0.0;
  for (double r : rows) s += r;
  return s / (static_cast<double>(N) * M);
}

}  // namespace

RelativeEnergyValue relative_energy(const ParticleMeasure& mu1,
                                    const ParticleMeasure& mu2,
                                    const ParticleMeasure& nu1,
                                    const ParticleMeasure& nu2,
                                    const RelativeEnergy& re) {
  RelativeEnergyValue v{};
  v.self_part = 0.5 * re.A.a11 * pair_sum(mu1, mu1, re.H1) +
                0.5 * re.A.a22 * pair_sum(mu2, mu2, re.H2);
  v.cross_part = re.A.a12 * pair_sum(mu1, nu2, re.K1) +
                 re.A.a21 * pair_sum(mu2, nu1, re.K2);
  return v;
}

namespace {

ExcessField excess_with_profile(const ParticleMeasure& mu,
                                const std::function<double(double)>& P,
                                double cut, const TestFunction& phi, double a,
                                double b, int m) {
  if (mu.dim != 1) throw std::invalid_argument("excess_term: d=1 only");
  for (double x : mu.xs)
    if (x < a || x > b)
      throw std::runtime_error("excess_term: particles outside grid coverage");
  ExcessField out;
  out.z = GridDensity(a, b, m);
  const int N = mu.size();
  std::vector<double> maj(static_cast<size_t>(m), 0.0);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < m; ++k) {
    const double x = out.z.node(k);
    const double gx = phi.grad(x);
    double conv = 0.0, v = 0.0, mk = 0.0;
    for (int i = 0; i < N; ++i) {
      const double d = x - mu.xs[static_cast<size_t>(i)];
      if (std::abs(d) >= cut) continue;
      const double p = P(d);
      const double gi = phi.grad(mu.xs[static_cast<size_t>(i)]);
      conv += p * gi;
      v += p;
      mk += p * std::abs(gi - gx);
    }
    out.z.values[static_cast<size_t>(k)] = (conv - v * gx) / N;
    maj[static_cast<size_t>(k)] = mk / N;
  }
  const double h = out.z.dx();
  double s1 = 0.0, s2 = 0.0, sm = 0.0;
  for (int k = 0; k < m; ++k) {
    const double w = (k == 0 || k == m - 1) ? 0.5 : 1.0;
    const double zk = out.z.values[static_cast<size_t>(k)];
    s1 += w * std::abs(zk);
    s2 += w * zk * zk;
    sm += w * maj[static_cast<size_t>(k)];
  }
  out.l1 = s1 * h;
  out.l2 = std::sqrt(s2 * h);
  out.l1_majorant = sm * h;
  return out;
}

}  // namespace

ExcessField excess_term(const ParticleMeasure& mu, const MollifierKernel& V_eps,
                        const TestFunction& phi, double a, double b, int m) {
  return excess_with_profile(
      mu, [&V_eps](double d) { return V_eps.value(d); }, V_eps.cutoff(), phi, a,
      b, m);
}

ExcessField cross_excess_term(const ParticleMeasure& mu1,
                              const InteractionKernel& P12,
                              const TestFunction& phi, double a, double b, int m) {
  return excess_with_profile(
      mu1, [&P12](double d) { return P12.value(d); }, P12.cutoff(), phi, a, b, m);
}

}  // namespace nlpme
