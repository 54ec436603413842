#pragma once

#include <vector>

#include "nlpme/energy.hpp"
#include "nlpme/grid.hpp"
#include "nlpme/particles.hpp"
#include "nlpme/testfn.hpp"

namespace nlpme {

/// Self-similar source solution of dt rho = 1/2 Lap(rho^2) in d=1 with unit
/// mass, centered at 0. The 1/2 diffusion constant is absorbed by evaluating
/// the standard m=2 profile at dilated time s = (t + t0)/2.
double barenblatt_value(double t, double x, double t0);
double barenblatt_support_halfwidth(double t, double t0);
double barenblatt_m2(double t, double t0);

/// Sampled profile on a uniform grid, mass-renormalised on the grid.
/// Throws a coverage error if the support exceeds the grid.
GridDensity barenblatt_grid(double t, double t0, double a, double b, int m);

struct WeakFormResidual {
  std::vector<double> per_fn_max;  // one entry per test function
  double max_abs = 0.0;
};

/// Weak-form residual of the quadratic porous medium equation for snapshots
/// v_k at uniform dt: R(t) = int phi v(t) - int phi v(0)
///                         + int_0^t int v phi' v' dx ds,
/// trapezoid in space, left endpoint in time.
WeakFormResidual weak_residual_pme(const std::vector<GridDensity>& snaps, double dt,
                                   const std::vector<TestFunction>& phis);

/// Antisymmetrised weak-form residual of the nonlocal interaction equation on
/// a particle trajectory at uniform tau.
WeakFormResidual weak_residual_nlie(const std::vector<ParticleMeasure>& snaps,
                                    double tau, const InteractionEnergy& E,
                                    const std::vector<TestFunction>& phis);

}  // namespace nlpme
