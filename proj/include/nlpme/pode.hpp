#pragma once

#include <utility>
#include <vector>

#include "nlpme/energy.hpp"
#include "nlpme/jko.hpp"

namespace nlpme {

struct OdeConfig {
  double dt = 1e-3;
  double T = 0.1;
  enum class Integrator { Rk4, ExplicitEuler } integrator = Integrator::Rk4;
  int dim = 1;
  void validate() const;
  /// Stiffness heuristic: dt <= eps^2/2 recommended; recorded, not enforced.
  bool dt_exceeds_heuristic(double eps) const { return dt > 0.5 * eps * eps; }
};

/// Velocities of the particle ODE Xdot_i = -(1/N) sum_j grad W_eps(X_i - X_j);
/// identical to interaction_force.
std::vector<double> nlie_rhs(const ParticleMeasure& mu, const InteractionEnergy& E);

/// Two-species velocities with self kernels H_i and cross kernels K_i.
std::pair<std::vector<double>, std::vector<double>> nlis_rhs(
    const ParticleMeasure& mu1, const ParticleMeasure& mu2, const RelativeEnergy& re);

struct OdeTrajectory {
  std::vector<ParticleMeasure> snapshots;
  std::vector<StepRecord> records;  // el_residual fixed at 0
  long crossings = 0;               // order changes observed in d=1
  std::string error;                // nonempty: aborted, partial data kept
  bool ok() const { return error.empty(); }
};

OdeTrajectory integrate_nlie(const ParticleMeasure& mu0, const InteractionEnergy& E,
                             const OdeConfig& cfg, const MollifierKernel& V_eps,
                             const DiagGrid& diag);

std::pair<OdeTrajectory, OdeTrajectory> integrate_nlis(
    const ParticleMeasure& mu0_1, const ParticleMeasure& mu0_2,
    const RelativeEnergy& re, const OdeConfig& cfg, const MollifierKernel& V1_eps,
    const MollifierKernel& V2_eps, const DiagGrid& diag);

/// d=2 forward integration (gaussian kernels only); returns final positions.
ParticleMeasure integrate_nlie_2d(const ParticleMeasure& mu0,
                                  const InteractionKernel& W, const OdeConfig& cfg);

}  // namespace nlpme
