#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nlpme/energy.hpp"
#include "nlpme/grid.hpp"
#include "nlpme/kernels.hpp"
#include "nlpme/particles.hpp"

namespace nlpme {

struct OrderingViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergence : std::runtime_error {
  NonConvergence(const std::string& what, double residual)
      : std::runtime_error(what), last_residual(residual) {}
  double last_residual;
};

struct JkoConfig {
  double tau = 1e-3;
  double T = 0.1;
  /// Stopping rule: sup-norm of the objective gradient. 0 means the default
  /// 1e-9 * N.
  double inner_tol = 0.0;
  int max_inner_iters = 10000;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  enum class OrderPolicy { Assert, RejectStep } order_policy = OrderPolicy::Assert;
  /// When false, hitting the iteration cap returns the current iterate
  /// instead of throwing (used by negative-control fixtures).
  bool error_on_cap = true;

  double tol_for(int n) const { return inner_tol > 0.0 ? inner_tol : 1e-9 * n; }
  void validate() const;
};

struct StepRecord {
  long step = 0;
  double t = 0.0;
  double energy = 0.0;
  double dW2_increment = 0.0;
  long inner_iters = 0;
  double el_residual = 0.0;
  double m2 = 0.0;
  double entropy_v = 0.0;
  double h1_v = 0.0;
  double wall_ms = 0.0;  // written as 0: artifacts are bit-reproducible
};

struct JkoTrajectory {
  std::vector<ParticleMeasure> snapshots;  // size floor(T/tau)+1 on success
  std::vector<StepRecord> records;         // one per snapshot
  std::string error;                       // nonempty: aborted, partial data kept
  bool ok() const { return error.empty(); }
};

/// Uniform grid on which v_eps = V_eps * rho is sampled for the per-step
/// entropy / H^1 diagnostics.
struct DiagGrid {
  double a = -6.0;
  double b = 6.0;
  int m = 1201;
};

struct InnerResult {
  std::vector<double> x;
  long iters = 0;
  double grad_inf = 0.0;
  bool converged = false;
};

/// Gradient descent with Armijo backtracking on a smooth objective.
/// alpha0 is the initial trial step, adapted across iterations.
InnerResult minimize_armijo(
    const std::function<double(const std::vector<double>&)>& f,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& grad,
    std::vector<double> x0, double alpha0, double tol, const JkoConfig& cfg);

struct StepInfo {
  long inner_iters = 0;
  double grad_inf = 0.0;
  double dW2 = 0.0;
  double energy = 0.0;
  double objective_decrease = 0.0;
};

/// One minimizing-movement step in Lagrangian coordinates: minimises
/// (1/(2 tau N)) sum |x_i - p_i|^2 + interaction energy, warm-started at prev.
ParticleMeasure jko_step(const ParticleMeasure& prev, double tau,
                         const InteractionEnergy& E, const JkoConfig& cfg,
                         StepInfo* info = nullptr);

/// max_i |(x_i' - x_i)/tau + weight (1/N) sum_j grad W(x_i' - x_j')|,
/// the particle form of the discrete Euler-Lagrange identity.
double euler_lagrange_residual(const ParticleMeasure& prev,
                               const ParticleMeasure& next, double tau,
                               const InteractionEnergy& E);

JkoTrajectory solve_nlie_jko(const GridDensity& rho0, int N, const JkoConfig& cfg,
                             const MollifierKernel& V_eps,
                             const InteractionEnergy& E, const DiagGrid& diag);

JkoTrajectory solve_nlie_jko(const ParticleMeasure& mu0, const JkoConfig& cfg,
                             const MollifierKernel& V_eps,
                             const InteractionEnergy& E, const DiagGrid& diag);

/// Semi-implicit step: the cross potentials are frozen at prev, so the joint
/// minimisation decouples into two single-species problems.
std::pair<ParticleMeasure, ParticleMeasure> semi_implicit_jko_step(
    const ParticleMeasure& prev1, const ParticleMeasure& prev2, double tau,
    const RelativeEnergy& re, const JkoConfig& cfg, StepInfo* info1 = nullptr,
    StepInfo* info2 = nullptr);

std::pair<JkoTrajectory, JkoTrajectory> solve_nlis_jko(
    const ParticleMeasure& mu0_1, const ParticleMeasure& mu0_2,
    const JkoConfig& cfg, const MollifierKernel& V1_eps,
    const MollifierKernel& V2_eps, const RelativeEnergy& re, const DiagGrid& diag);

}  // namespace nlpme
