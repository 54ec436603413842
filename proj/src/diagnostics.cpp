#include "nlpme/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlpme {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

CheckResult check_energy_monotone(const std::vector<StepRecord>& recs, double slack) {
  CheckResult r;
  r.pass = true;
  for (size_t n = 1; n < recs.size(); ++n) {
    const double v = recs[n].energy - recs[n - 1].energy;
    r.worst = std::max(r.worst, v);
    if (v > slack) r.pass = false;
  }
  std::ostringstream os;
  os << "worst energy increase " << r.worst << " vs slack " << slack;
  r.detail = os.str();
  return r;
}

CheckResult check_step_inequality(const std::vector<StepRecord>& recs, double tau,
                                  double slack) {
  CheckResult r;
  r.pass = true;
  for (size_t n = 1; n < recs.size(); ++n) {
    const double v = recs[n].dW2_increment / (2.0 * tau) + recs[n].energy -
                     recs[n - 1].energy;
    r.worst = std::max(r.worst, v);
    if (v > slack) r.pass = false;
  }
  std::ostringstream os;
  os << "worst step-inequality violation " << r.worst << " vs slack " << slack;
  r.detail = os.str();
  return r;
}

CheckResult check_total_square_estimate(const std::vector<StepRecord>& recs,
                                        double tau, double slack) {
  CheckResult r;
  double acc = 0.0;
  for (size_t n = 1; n < recs.size(); ++n) acc += recs[n].dW2_increment;
  acc /= 2.0 * tau;
  const double bound = recs.empty() ? 0.0 : recs.front().energy;
  r.worst = acc - bound;
  r.pass = acc <= bound + slack * static_cast<double>(recs.size());
  std::ostringstream os;
  os << "sum dW2/(2tau) = " << acc << " vs W[rho0] = " << bound;
  r.detail = os.str();
  return r;
}

CheckResult check_moment_bound(const std::vector<StepRecord>& recs, double m2_0,
                               double l2_0_sq, double T) {
  CheckResult r;
  r.pass = true;
  const double bound = 2.0 * m2_0 + 2.0 * T * l2_0_sq;
  for (const StepRecord& rec : recs) {
    const double v = rec.m2 - bound;
    r.worst = std::max(r.worst, v);
    if (v > 0.0) r.pass = false;
  }
  std::ostringstream os;
  os << "max m2 excess over bound " << bound << " is " << r.worst;
  r.detail = os.str();
  return r;
}

CheckResult check_holder_continuity(const std::vector<ParticleMeasure>& snaps,
                                    double tau, double energy0, int sample_count) {
  CheckResult r;
  r.pass = true;
  const double c = std::sqrt(2.0 * energy0);
  const long n = static_cast<long>(snaps.size());
  const long stride = std::max<long>(1, n / std::max(sample_count, 2));
  for (long i = 0; i < n; i += stride) {
    for (long j = i + stride; j < n; j += stride) {
      const double dw = std::sqrt(wasserstein2_sq_1d(snaps[static_cast<size_t>(i)],
                                                     snaps[static_cast<size_t>(j)]));
      const double dt = static_cast<double>(j - i) * tau;
      const double bound = c * (std::sqrt(dt) + std::sqrt(tau));
      r.worst = std::max(r.worst, dw - bound);
      if (dw > bound) r.pass = false;
    }
  }
  std::ostringstream os;
  os << "Holder constant c = " << c << ", worst excess " << r.worst;
  r.detail = os.str();
  return r;
}

EntropyBudget check_entropy_dissipation(const std::vector<StepRecord>& recs,
                                        double tau, double l2_0_sq,
                                        double entropy_rho0, double m2_bound) {
  EntropyBudget b;
  double hmin = entropy_rho0;
  for (size_t n = 0; n + 1 < recs.size(); ++n) {
    b.integral += tau * recs[n].h1_v;  // left endpoint
    hmin = std::min(hmin, recs[n].entropy_v);
  }
  if (!recs.empty()) hmin = std::min(hmin, recs.back().entropy_v);
  b.entropy_drop = entropy_rho0 - hmin;
  // Gaussian maximum-entropy floor: H >= -(1/2) log(2 pi e m2)
  b.floor_margin = 0.5 * std::log(2.0 * kPi * std::exp(1.0) * std::max(m2_bound, 1e-12));
  b.budget = l2_0_sq + b.entropy_drop + b.floor_margin;
  b.pass = b.integral <= b.budget;
  return b;
}

CheckResult check_excess_decay(const std::vector<ExcessDecayRow>& rows,
                               bool require_ratio_band) {
  CheckResult r;
  r.pass = true;
  std::ostringstream os;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].l1_sup > rows[i].l1_bound) {
      r.pass = false;
      os << "L1 bound violated at eps=" << rows[i].eps << "; ";
    }
    if (i > 0) {
      const double ratio = rows[i].l1_sup / rows[i - 1].l1_sup;
      if (require_ratio_band && (ratio < 0.4 || ratio > 0.6)) {
        r.pass = false;
        os << "L1 ratio " << ratio << " outside [0.4,0.6] at eps=" << rows[i].eps << "; ";
      }
      if (!(rows[i].l2_spacetime < rows[i - 1].l2_spacetime)) {
        r.pass = false;
        os << "L2 not strictly decreasing at eps=" << rows[i].eps << "; ";
      }
      r.worst = std::max(r.worst, std::abs(ratio - 0.5));
    }
  }
  r.detail = os.str().empty() ? "excess decay holds" : os.str();
  return r;
}

namespace {

GridDensity reference_on_grid(double t, double t0, double coeff, double a, double b,
                              int m) {
  // effective-coefficient evolution is a pure time dilation
  return barenblatt_grid(coeff * t, t0, a, b, m);
}

}  // namespace

SweepReport epsilon_sweep(const SweepConfig& cfg) {
  SweepReport rep;
  if (cfg.eps_list.empty()) return rep;
  const double max_eps = *std::max_element(cfg.eps_list.begin(), cfg.eps_list.end());
  const double min_eps = *std::min_element(cfg.eps_list.begin(), cfg.eps_list.end());

  // Master comparison grid, fixed per sweep so E(eps) rows are comparable.
  const double support_T = barenblatt_support_halfwidth(cfg.energy_weight * cfg.T, cfg.t0);
  const double L = std::ceil(support_T + 8.0 * max_eps + 1.0);
  const double dx = min_eps / 5.0;
  const int m = 2 * static_cast<int>(std::ceil(L / dx)) + 1;
  const double a = -L, b = L;

  const GridDensity rho0 = barenblatt_grid(0.0, cfg.t0, a, b, m);
  const ParticleMeasure mu0 = quantiles_from_density(rho0, cfg.N);
  const double l2_0 = l2_norm_sq(rho0);
  const double h_rho0 = entropy(rho0);
  const double m2_0 = second_moment(mu0);

  double prev_E = 0.0;
  rep.pass = true;
  for (size_t row = 0; row < cfg.eps_list.size(); ++row) {
    const double eps = cfg.eps_list[row];
    SweepRow out;
    out.eps = eps;
    try {
      MollifierKernel V = cfg.family == KernelFamily::Laplace
                              ? MollifierKernel::laplace(cfg.shape)
                              : MollifierKernel::gaussian(cfg.shape);
      const MollifierKernel V_eps = V.scaled(eps);
      const InteractionKernel W = InteractionKernel::self_convolve(V, eps);
      const InteractionEnergy E{&W, cfg.energy_weight, true};
      const DiagGrid diag{a, b, m};

      std::vector<ParticleMeasure> snaps;
      std::vector<StepRecord> recs;
      double tgrid;
      if (cfg.use_ode) {
        OdeConfig oc;
        oc.dt = cfg.ode_dt;
        oc.T = cfg.T;
        OdeTrajectory tr = integrate_nlie(mu0, E, oc, V_eps, diag);
        snaps = std::move(tr.snapshots);
        recs = std::move(tr.records);
        tgrid = oc.dt;
      } else {
        JkoConfig jc;
        jc.tau = cfg.tau;
        jc.T = cfg.T;
        JkoTrajectory tr = solve_nlie_jko(mu0, jc, V_eps, E, diag);
        snaps = std::move(tr.snapshots);
        recs = std::move(tr.records);
        tgrid = cfg.tau;
      }

      double err_sq = 0.0;
      for (size_t n = 0; n + 1 < snaps.size(); ++n) {
        const GridDensity v = mollify(snaps[n], V_eps, a, b, m);
        const GridDensity ref = reference_on_grid(tgrid * static_cast<double>(n),
                                                  cfg.t0, cfg.energy_weight, a, b, m);
        err_sq += tgrid * l2_diff_sq(v, ref);
      }
      out.E_l2 = std::sqrt(err_sq);

      double l1_max = 0.0, l2_acc = 0.0;
      for (size_t n = 0; n < snaps.size();
           n += static_cast<size_t>(std::max(cfg.excess_stride, 1))) {
        double l2_here = 0.0;
        for (const TestFunction& phi : cfg.phis) {
          const ExcessField z = excess_term(snaps[n], V_eps, phi, a, b, m);
          l1_max = std::max(l1_max, z.l1_majorant);
          l2_here = std::max(l2_here, z.l2 * z.l2);
        }
        l2_acc += tgrid * static_cast<double>(std::max(cfg.excess_stride, 1)) * l2_here;
      }
      out.excess_l1_max = l1_max;
      out.excess_l2 = std::sqrt(l2_acc);

      const double m2_bound = 2.0 * m2_0 + 2.0 * cfg.T * l2_0;
      const EntropyBudget eb =
          check_entropy_dissipation(recs, tgrid, l2_0, h_rho0, m2_bound);
      out.h1_budget_used = eb.budget > 0.0 ? eb.integral / eb.budget : 0.0;

      out.ok = true;
      out.verdict = "ok";
      if (row > 0) {
        out.ratio_prev = prev_E > 0.0 ? out.E_l2 / prev_E : 0.0;
        if (!(out.E_l2 < prev_E)) {
          out.verdict = "not-decreasing";
          rep.pass = false;
        }
      }
      prev_E = out.E_l2;
    } catch (const std::exception& e) {
      out.ok = false;
      out.verdict = std::string("failed: ") + e.what();
      rep.pass = false;
    }
    rep.rows.push_back(std::move(out));
  }
  return rep;
}

CdsReport check_cds_reduction(const CdsConfig& cfg) {
  CdsReport rep;
  const DiffusionMatrix A(cfg.a11, cfg.a12, cfg.a21, cfg.a22);  // validates (A)
  const double ceff = cfg.a11 + cfg.a12;
  const double max_eps = *std::max_element(cfg.eps_list.begin(), cfg.eps_list.end());
  const double min_eps = *std::min_element(cfg.eps_list.begin(), cfg.eps_list.end());
  const double support_T = barenblatt_support_halfwidth(ceff * cfg.T, cfg.t0);
  const double L = std::ceil(support_T + 8.0 * max_eps + 1.0);
  const double dx = min_eps / 5.0;
  const int m = 2 * static_cast<int>(std::ceil(L / dx)) + 1;
  const double a = -L, b = L;

  const GridDensity rho0 = barenblatt_grid(0.0, cfg.t0, a, b, m);
  const ParticleMeasure mu0 = quantiles_from_density(rho0, cfg.N);

  rep.species_identical = true;
  rep.error_decreasing = true;
  double prev_E = 0.0;
  for (size_t row = 0; row < cfg.eps_list.size(); ++row) {
    const double eps = cfg.eps_list[row];
    const MollifierKernel V = MollifierKernel::gaussian(cfg.shape);
    const MollifierKernel V_eps = V.scaled(eps);
    const InteractionKernel H = InteractionKernel::self_convolve(V, eps);
    const RelativeEnergy re{H, H, H, H, A};
    JkoConfig jc;
    jc.tau = cfg.tau;
    jc.T = cfg.T;
    const DiagGrid diag{a, b, m};
    auto [t1, t2] = solve_nlis_jko(mu0, mu0, jc, V_eps, V_eps, re, diag);

    double gap = 0.0;
    for (size_t n = 0; n < t1.snapshots.size(); ++n)
      gap = std::max(gap, std::sqrt(wasserstein2_sq_1d(t1.snapshots[n], t2.snapshots[n])));
    rep.species_gap.push_back(gap);
    if (gap > 1e-8) rep.species_identical = false;

    double err_sq = 0.0;
    for (size_t n = 0; n + 1 < t1.snapshots.size(); ++n) {
      const GridDensity v = mollify(t1.snapshots[n], V_eps, a, b, m);
      const GridDensity ref =
          reference_on_grid(cfg.tau * static_cast<double>(n), cfg.t0, ceff, a, b, m);
      err_sq += cfg.tau * l2_diff_sq(v, ref);
    }
    const double E = std::sqrt(err_sq);
    rep.eps.push_back(eps);
    rep.E_l2.push_back(E);
    if (row > 0 && !(E < prev_E)) rep.error_decreasing = false;
    prev_E = E;
  }
  rep.pass = rep.species_identical && rep.error_decreasing;
  return rep;
}

}  // namespace nlpme
