#pragma once

#include <vector>

#include "nlpme/grid.hpp"
#include "nlpme/kernels.hpp"

namespace nlpme {

/// N equal-weight particles (weight 1/N each). In d=1 positions are kept in
/// nondecreasing order; re-sorting is the caller's duty after mutation.
struct ParticleMeasure {
  int dim = 1;
  std::vector<double> xs;
  std::vector<double> ys;  // d=2 only

  int size() const { return static_cast<int>(xs.size()); }
  bool sorted_1d() const;
  void sort_1d();
  void check_finite() const;
};

/// Particle i at the (i-1/2)/N quantile of the piecewise-linear CDF of rho0.
ParticleMeasure quantiles_from_density(const GridDensity& rho0, int N);

/// v(x_k) = (1/N) sum_i V_eps(x_k - X_i) on a uniform grid.
/// Throws a coverage error if any particle lies outside [a,b].
GridDensity mollify(const ParticleMeasure& mu, const MollifierKernel& V_eps,
                    double a, double b, int m);

/// Exact squared 2-Wasserstein distance in d=1 (sorted pairing; common
/// refinement of the quantile functions when counts differ).
double wasserstein2_sq_1d(const ParticleMeasure& mu, const ParticleMeasure& nu);

/// Exact 1-Wasserstein distance in d=1.
double wasserstein1_1d(const ParticleMeasure& mu, const ParticleMeasure& nu);

/// (1/N) sum |X_i|^2.
double second_moment(const ParticleMeasure& mu);

}  // namespace nlpme
