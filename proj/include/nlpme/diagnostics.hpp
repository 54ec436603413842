#pragma once

#include <string>
#include <vector>

#include "nlpme/jko.hpp"
#include "nlpme/pode.hpp"
#include "nlpme/reference.hpp"
#include "nlpme/testfn.hpp"

namespace nlpme {

struct CheckResult {
  bool pass = false;
  double worst = 0.0;  // worst violation (or margin) observed
  std::string detail;
};

/// Every check below consumes recorded trajectory data only, so re-running a
/// check never re-runs a simulation.

/// W[rho^{n+1}] <= W[rho^n] + slack at every step.
CheckResult check_energy_monotone(const std::vector<StepRecord>& recs, double slack);

/// Per-step dW^2/(2 tau) + W[rho^{n+1}] <= W[rho^n] + slack.
CheckResult check_step_inequality(const std::vector<StepRecord>& recs, double tau,
                                  double slack);

/// Cumulative sum dW^2/(2 tau) <= W[rho_0] + accumulated slack.
CheckResult check_total_square_estimate(const std::vector<StepRecord>& recs,
                                        double tau, double slack);

/// m2(t) <= 2 m2(rho_0) + 2 T |rho_0|_{L2}^2 (with |V_1|_{L1} = 1).
CheckResult check_moment_bound(const std::vector<StepRecord>& recs, double m2_0,
                               double l2_0_sq, double T);

/// d_W(rho(s), rho(t)) <= c (sqrt|t-s| + sqrt(tau)), c = sqrt(2 W[rho_0]),
/// checked on sampled snapshot pairs.
CheckResult check_holder_continuity(const std::vector<ParticleMeasure>& snaps,
                                    double tau, double energy0, int sample_count);

struct EntropyBudget {
  double integral = 0.0;      // int_0^T |grad v_eps|^2 dt, left endpoint
  double budget = 0.0;        // |rho_0|_{L2}^2 + C*
  double entropy_drop = 0.0;  // H[rho_0] - inf_t H[v_eps(t)]
  double floor_margin = 0.0;  // entropy floor from the m2 bound
  bool pass = false;
};

/// Flow-interchange H^1 budget: the dissipation integral must stay within
/// |rho_0|^2_{L2} + (H[rho_0] - inf_t H[v]) + floor margin, the latter from
/// the Gaussian maximum-entropy bound H >= -(1/2) log(2 pi e m2).
EntropyBudget check_entropy_dissipation(const std::vector<StepRecord>& recs,
                                        double tau, double l2_0_sq,
                                        double entropy_rho0, double m2_bound);

struct ExcessDecayRow {
  double eps = 0.0;
  double l1_sup = 0.0;        // sup_t of the L1 excess majorant
  double l1_bound = 0.0;      // eps |D2 phi|_inf int |z| V1 dz (worst phi)
  double l2_spacetime = 0.0;  // sqrt(int_0^T |z|^2_{L2} dt)
};

/// Passes iff every row obeys its L1 bound, consecutive L1 ratios lie in
/// [0.4, 0.6], and the L2 space-time norms decrease strictly in eps.
CheckResult check_excess_decay(const std::vector<ExcessDecayRow>& rows,
                               bool require_ratio_band = true);

struct SweepRow {
  double eps = 0.0;
  double E_l2 = 0.0;        // L2([0,T];L2) distance of v_eps to the reference
  double ratio_prev = 0.0;  // 0 for the first row
  double excess_l1_max = 0.0;
  double excess_l2 = 0.0;
  double h1_budget_used = 0.0;  // dissipation integral / budget
  bool ok = false;
  std::string verdict;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // sorted by eps descending
  bool pass = false;
};

struct SweepConfig {
  std::vector<double> eps_list;  // halving, descending
  int N = 400;
  double tau = 1e-3;
  double T = 0.5;
  double t0 = 1.0;
  KernelFamily family = KernelFamily::Gaussian;
  double shape = 1.0;
  double energy_weight = 1.0;  // effective PME coefficient
  bool use_ode = false;
  double ode_dt = 2e-4;
  std::vector<TestFunction> phis = default_test_functions();
  int excess_stride = 10;  // snapshots between excess evaluations
};

/// Runs one solver per eps against the Barenblatt reference; E(eps) must be
/// strictly decreasing along a halving eps list.
SweepReport epsilon_sweep(const SweepConfig& cfg);

struct CdsConfig {
  std::vector<double> eps_list;
  int N = 200;
  double tau = 1e-3;
  double T = 0.2;
  double t0 = 1.0;
  double a11 = 1.0, a12 = 0.4, a21 = 0.4, a22 = 1.0;
  double shape = 1.0;  // gaussian sigma for both species
};

struct CdsReport {
  std::vector<double> eps;
  std::vector<double> species_gap;  // max over steps of d_W between species
  std::vector<double> E_l2;         // error vs the effective-coefficient reference
  bool species_identical = false;
  bool error_decreasing = false;
  bool pass = false;
};

/// Symmetric two-species reduction: species stay identical and the mollified
/// trajectory approaches the PME evolution with effective coefficient
/// A11 + A12 as eps decreases.
CdsReport check_cds_reduction(const CdsConfig& cfg);

}  // namespace nlpme
