#include "nlpme/grid.hpp"

#include <cmath>

namespace nlpme {

GridDensity::GridDensity(double a_, double b_, int m_) : a(a_), b(b_), m(m_) {
  if (!(b > a)) throw std::invalid_argument("GridDensity: need b > a");
  if (m < 2) throw std::invalid_argument("GridDensity: need at least 2 nodes");
  values.assign(static_cast<size_t>(m), 0.0);
}

namespace {
double trapz(const std::vector<double>& f, double h) {
  const size_t n = f.size();
  double s = 0.5 * (f.front() + f.back());
  for (size_t k = 1; k + 1 < n; ++k) s += f[k];
  return s * h;
}
}  // namespace

double trapz_mass(const GridDensity& v) { return trapz(v.values, v.dx()); }

double entropy(const GridDensity& v) {
  std::vector<double> f(v.values.size());
  for (size_t k = 0; k < f.size(); ++k) {
    const double x = v.values[k];
    f[k] = x > 0.0 ? x * std::log(x) : 0.0;
  }
  return trapz(f, v.dx());
}

double h1_seminorm_sq(const GridDensity& v) {
  if (v.m < 3) throw std::invalid_argument("h1_seminorm_sq: need M >= 3");
  const double h = v.dx();
  const size_t n = v.values.size();
  std::vector<double> g(n);
  g[0] = (v.values[1] - v.values[0]) / h;
  g[n - 1] = (v.values[n - 1] - v.values[n - 2]) / h;
  for (size_t k = 1; k + 1 < n; ++k)
    g[k] = (v.values[k + 1] - v.values[k - 1]) / (2.0 * h);
  for (double& x : g) x *= x;
  return trapz(g, h);
}

double l2_norm_sq(const GridDensity& v) {
  std::vector<double> f(v.values.size());
  for (size_t k = 0; k < f.size(); ++k) f[k] = v.values[k] * v.values[k];
  return trapz(f, v.dx());
}

double l2_diff_sq(const GridDensity& u, const GridDensity& v) {
  if (!u.same_shape(v)) throw std::invalid_argument("l2_diff_sq: shape mismatch");
  std::vector<double> f(u.values.size());
  for (size_t k = 0; k < f.size(); ++k) {
    const double d = u.values[k] - v.values[k];
    f[k] = d * d;
  }
  return trapz(f, u.dx());
}

}  // namespace nlpme
