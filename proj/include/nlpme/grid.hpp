#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nlpme {

/// Uniform-grid density on an interval [a,b], d=1.
struct GridDensity {
  double a = 0.0;
  double b = 1.0;
  int m = 2;  // node count, >= 2
  std::vector<double> values;

  GridDensity() = default;
  GridDensity(double a_, double b_, int m_);

  double dx() const { return (b - a) / (m - 1); }
  double node(int k) const { return a + k * dx(); }
  bool same_shape(const GridDensity& o) const {
    return a == o.a && b == o.b && m == o.m;
  }
};

/// Trapezoidal integral of the values.
double trapz_mass(const GridDensity& v);

/// Trapezoidal integral of v*log(v), with 0*log(0)=0. Values must be >= 0.
double entropy(const GridDensity& v);

/// Trapezoidal integral of |v'|^2, central differences inside, one-sided ends.
double h1_seminorm_sq(const GridDensity& v);

/// Trapezoidal integral of v^2.
double l2_norm_sq(const GridDensity& v);

/// Trapezoidal integral of (u-v)^2; shapes must match.
double l2_diff_sq(const GridDensity& u, const GridDensity& v);

}  // namespace nlpme
