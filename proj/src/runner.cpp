#include "nlpme/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "nlpme/io.hpp"
#include "nlpme/pode.hpp"
#include "nlpme/reference.hpp"

namespace nlpme {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

ordered_json kernel_to_json(const KernelBlock& k) {
  ordered_json j;
  j["family"] = k.family;
  j["shape"] = k.shape;
  j["epsilon"] = k.epsilon;
  if (!k.csv.empty()) j["csv"] = k.csv;
  return j;
}

ordered_json initial_to_json(const InitialBlock& b) {
  ordered_json j;
  j["type"] = b.type;
  j["t0"] = b.t0;
  j["a"] = b.a;
  j["b"] = b.b;
  if (!b.path.empty()) j["path"] = b.path;
  return j;
}

// Normalised echo of the configuration; parseable by parse_config_text, so a
// replay reconstructs the exact run parameters from run_meta.json alone.
ordered_json config_to_json(const RunConfig& c) {
  ordered_json j;
  j["problem"] = c.problem;
  j["solver"] = c.solver;
  j["kernel"] = kernel_to_json(c.kernel);
  if (c.kernel2) j["kernel2"] = kernel_to_json(*c.kernel2);
  if (c.cross_weight) {
    ordered_json u;
    u["family"] = c.cross_weight->family;
    u["shape"] = c.cross_weight->shape;
    j["cross_weight"] = u;
  }
  if (c.diffusion_matrix) j["diffusion_matrix"] = *c.diffusion_matrix;
  j["N"] = c.N;
  if (!c.epsilons.empty()) j["epsilons"] = c.epsilons;
  j["tau"] = c.tau;
  j["dt"] = c.dt;
  j["T"] = c.T;
  j["grid"] = ordered_json{{"a", c.grid_a}, {"b", c.grid_b}, {"m", c.grid_m}};
  j["initial"] = initial_to_json(c.initial);
  if (c.initial2) j["initial2"] = initial_to_json(*c.initial2);
  if (!c.test_functions.empty()) j["test_functions"] = c.test_functions;
  if (!c.snapshot_times.empty()) j["snapshot_times"] = c.snapshot_times;
  j["energy_weight"] = c.energy_weight;
  j["seed"] = c.seed;
  return j;
}

GridDensity initial_density(const InitialBlock& b, double a, double g_b, int m) {
  if (b.type == "barenblatt") return barenblatt_grid(0.0, b.t0, a, g_b, m);
  if (b.type == "csv") return read_grid_csv(b.path);
  GridDensity rho;  // uniform on [b.a, b.b]
  rho.a = a;
  rho.b = g_b;
  rho.m = m;
  rho.values.assign(static_cast<size_t>(m), 0.0);
  const double h = 1.0 / (b.b - b.a);
  for (int k = 0; k < m; ++k) {
    const double x = rho.node(k);
    if (x >= b.a && x <= b.b) rho.values[static_cast<size_t>(k)] = h;
  }
  const double mass = trapz_mass(rho);
  for (double& v : rho.values) v /= mass;
  return rho;
}

std::vector<double> snapshot_times_of(const RunConfig& cfg) {
  if (!cfg.snapshot_times.empty()) return cfg.snapshot_times;
  return {0.0, 0.5 * cfg.T, cfg.T};
}

// Effective quadratic-diffusion coefficient driving the limiting equation.
double effective_coefficient(const RunConfig& cfg) {
  if (cfg.problem == "nlis" && cfg.diffusion_matrix) {
    const auto& M = *cfg.diffusion_matrix;
    return M[0][0] + M[0][1];
  }
  return cfg.energy_weight;
}

struct MetaNumbers {
  double m2_0 = 0.0, l2_0_sq = 0.0, entropy_0 = 0.0;
};

// Scale of the L2 term entering the second-moment bound; for two species the
// self and cross coefficients both transport mass.
double moment_l2_scale(const RunConfig& cfg) {
  if (cfg.problem == "nlis" && cfg.diffusion_matrix) {
    const auto& M = *cfg.diffusion_matrix;
    return std::max(M[0][0], M[1][1]) + std::max(M[0][1], M[1][0]);
  }
  return cfg.energy_weight;
}

ordered_json check_to_json(const CheckResult& r, bool enforced) {
  ordered_json j;
  j["pass"] = r.pass;
  j["worst"] = r.worst;
  j["detail"] = r.detail;
  j["enforced"] = enforced;
  return j;
}

ordered_json species_verdicts(const RunConfig& cfg,
                              const std::vector<StepRecord>& recs,
                              const MetaNumbers& meta, double l2_scale) {
  const bool jko = cfg.solver == "jko";
  const double slack = 1e-8;
  ordered_json checks;
  bool pass = true;
  auto add = [&](const char* name, const CheckResult& r, bool enforced) {
    checks[name] = check_to_json(r, enforced);
    if (enforced && !r.pass) pass = false;
  };

  add("energy_monotone", check_energy_monotone(recs, slack), jko);
  if (jko) {
    add("step_inequality", check_step_inequality(recs, cfg.tau, slack), true);
    add("total_square_estimate",
        check_total_square_estimate(recs, cfg.tau, slack), true);
    CheckResult el;
    const double bound = 1e-9 * cfg.N * cfg.N * (1.0 + 1e-9);
    el.worst = 0.0;
    for (size_t k = 1; k < recs.size(); ++k)
      el.worst = std::max(el.worst, recs[k].el_residual);
    el.pass = el.worst <= bound;
    el.detail = "max stationarity residual " + fmt17(el.worst) + " vs bound " +
                fmt17(bound);
    add("el_residual", el, true);
  }
  const double l2_eff = l2_scale * meta.l2_0_sq;
  add("moment_bound", check_moment_bound(recs, meta.m2_0, l2_eff, cfg.T), true);
  if (jko && cfg.problem == "nlie" && cfg.energy_weight == 1.0) {
    const double m2_bound = 2.0 * meta.m2_0 + 2.0 * cfg.T * l2_eff;
    EntropyBudget eb = check_entropy_dissipation(recs, cfg.tau, meta.l2_0_sq,
                                                 meta.entropy_0, m2_bound);
    CheckResult r;
    r.pass = eb.pass;
    r.worst = eb.integral;
    r.detail = "dissipation integral " + fmt17(eb.integral) + " vs budget " +
               fmt17(eb.budget);
    add("h1_dissipation_budget", r, true);
  }
  ordered_json j;
  j["checks"] = checks;
  j["pass"] = pass;
  return j;
}

std::string compose_verdicts(const RunConfig& cfg,
                             const std::vector<StepRecord>& recs1,
                             const std::vector<StepRecord>* recs2,
                             const MetaNumbers& m1, const MetaNumbers& m2) {
  ordered_json j;
  const double scale = moment_l2_scale(cfg);
  if (recs2) {
    // conservative: the shared bound uses the larger initial L2 norm
    MetaNumbers a = m1, b = m2;
    const double l2max = std::max(m1.l2_0_sq, m2.l2_0_sq);
    a.l2_0_sq = l2max;
    b.l2_0_sq = l2max;
    ordered_json s1 = species_verdicts(cfg, recs1, a, scale);
    ordered_json s2 = species_verdicts(cfg, *recs2, b, scale);
    j["species1"] = s1;
    j["species2"] = s2;
    j["pass"] = s1.at("pass").get<bool>() && s2.at("pass").get<bool>();
  } else {
    j = species_verdicts(cfg, recs1, m1, scale);
  }
  return j.dump(2) + "\n";
}

void print_verdicts(const std::string& verdicts, bool quiet) {
  if (quiet) return;
  ordered_json j = ordered_json::parse(verdicts);
  auto print_species = [](const ordered_json& s, const std::string& prefix) {
    for (const auto& [name, c] : s.at("checks").items()) {
      std::cout << prefix << name << ": "
                << (c.at("pass").get<bool>() ? "pass" : "FAIL");
      if (!c.at("enforced").get<bool>()) std::cout << " (advisory)";
      std::cout << "  " << c.at("detail").get<std::string>() << "\n";
    }
  };
  if (j.contains("species1")) {
    print_species(j.at("species1"), "s1 ");
    print_species(j.at("species2"), "s2 ");
  } else {
    print_species(j, "");
  }
  std::cout << "overall: " << (j.at("pass").get<bool>() ? "pass" : "FAIL")
            << "\n";
}

MetaNumbers initial_numbers(const GridDensity& rho0, const ParticleMeasure& mu0) {
  MetaNumbers m;
  m.m2_0 = second_moment(mu0);
  m.l2_0_sq = l2_norm_sq(rho0);
  m.entropy_0 = entropy(rho0);
  return m;
}

// L2-in-time distance of the mollified trajectory to the Barenblatt reference
// with the effective coefficient, plus sampled excess-term norms. Only
// meaningful for Barenblatt initial data.
ordered_json trajectory_diagnostics(const RunConfig& cfg,
                                    const std::vector<ParticleMeasure>& snaps,
                                    const MollifierKernel& V_eps, double dt_step,
                                    double h1_budget_used) {
  ordered_json d;
  d["eps"] = cfg.kernel.epsilon;
  d["h1_budget_used"] = h1_budget_used;
  double E_sq = 0.0, excess_l1_max = 0.0, excess_l2_sq = 0.0;
  if (cfg.initial.type == "barenblatt") {
    const double c = effective_coefficient(cfg);
    for (size_t n = 1; n < snaps.size(); ++n) {
      const GridDensity v =
          mollify(snaps[n], V_eps, cfg.grid_a, cfg.grid_b, cfg.grid_m);
      const GridDensity ref = barenblatt_grid(c * dt_step * static_cast<double>(n),
                                              cfg.initial.t0, cfg.grid_a,
                                              cfg.grid_b, cfg.grid_m);
      E_sq += dt_step * l2_diff_sq(v, ref);
    }
    const auto phis = cfg.parsed_test_functions();
    const size_t stride =
        std::max<size_t>(1, (snaps.size() - 1) / 10);
    for (size_t n = 0; n < snaps.size(); n += stride) {
      double l1_here = 0.0, l2_here = 0.0;
      for (const TestFunction& phi : phis) {
        const ExcessField z = excess_term(snaps[n], V_eps, phi, cfg.grid_a,
                                          cfg.grid_b, cfg.grid_m);
        l1_here = std::max(l1_here, z.l1_majorant);
        l2_here = std::max(l2_here, z.l2);
      }
      excess_l1_max = std::max(excess_l1_max, l1_here);
      excess_l2_sq += static_cast<double>(stride) * dt_step * l2_here * l2_here;
    }
  }
  d["E_l2"] = std::sqrt(E_sq);
  d["excess_l1_max"] = excess_l1_max;
  d["excess_l2"] = std::sqrt(excess_l2_sq);
  return d;
}

void write_snapshots(const RunConfig& cfg,
                     const std::vector<ParticleMeasure>& snaps,
                     const MollifierKernel& V_eps, double dt_step,
                     const std::string& outdir, const std::string& suffix,
                     std::vector<std::string>& files) {
  for (double t : snapshot_times_of(cfg)) {
    const long idx = std::lround(t / dt_step);
    if (idx < 0 || idx >= static_cast<long>(snaps.size())) continue;
    const GridDensity v = mollify(snaps[static_cast<size_t>(idx)], V_eps,
                                  cfg.grid_a, cfg.grid_b, cfg.grid_m);
    const std::string name = "snapshot" + suffix + "_t" + tag(t) + ".csv";
    write_grid_csv(outdir + "/" + name, v);
    files.push_back(name);
  }
}

}  // namespace

std::string verdicts_json_from_records(const RunConfig& cfg,
                                       const std::vector<StepRecord>& recs,
                                       double m2_0, double l2_0_sq,
                                       double entropy_0) {
  MetaNumbers m;
  m.m2_0 = m2_0;
  m.l2_0_sq = l2_0_sq;
  m.entropy_0 = entropy_0;
  return compose_verdicts(cfg, recs, nullptr, m, m);
}

int run_single(const RunConfig& cfg, const std::string& outdir, bool quiet) {
  fs::create_directories(outdir);
  std::vector<std::string> files;

  const double eps = cfg.kernel.epsilon;
  const MollifierKernel V1 = cfg.kernel.build_base();
  const MollifierKernel V1_eps = V1.scaled(eps);
  const GridDensity rho0 =
      initial_density(cfg.initial, cfg.grid_a, cfg.grid_b, cfg.grid_m);
  const ParticleMeasure mu0 = quantiles_from_density(rho0, cfg.N);
  const MetaNumbers m1 = initial_numbers(rho0, mu0);
  const DiagGrid diag{cfg.grid_a, cfg.grid_b, cfg.grid_m};
  const double dt_step = cfg.solver == "jko" ? cfg.tau : cfg.dt;

  ordered_json meta;
  meta["config"] = config_to_json(cfg);
  meta["m2_0"] = m1.m2_0;
  meta["l2_0_sq"] = m1.l2_0_sq;
  meta["entropy_0"] = m1.entropy_0;

  std::string solver_error;
  std::string verdicts;
  double h1_used = 0.0;

  if (cfg.problem == "nlie") {
    const InteractionKernel W = InteractionKernel::self_convolve(V1, eps);
    const InteractionEnergy E{&W, cfg.energy_weight, true};
    std::vector<ParticleMeasure> snaps;
    std::vector<StepRecord> recs;
    if (cfg.solver == "jko") {
      JkoConfig jc;
      jc.tau = cfg.tau;
      jc.T = cfg.T;
      JkoTrajectory tr = solve_nlie_jko(mu0, jc, V1_eps, E, diag);
      snaps = std::move(tr.snapshots);
      recs = std::move(tr.records);
      solver_error = tr.error;
    } else {
      OdeConfig oc;
      oc.dt = cfg.dt;
      oc.T = cfg.T;
      OdeTrajectory tr = integrate_nlie(mu0, E, oc, V1_eps, diag);
      snaps = std::move(tr.snapshots);
      recs = std::move(tr.records);
      solver_error = tr.error;
      meta["crossings"] = tr.crossings;
      meta["dt_exceeds_heuristic"] = oc.dt_exceeds_heuristic(eps);
    }
    meta["solver_error"] = solver_error;
    write_step_records_csv(outdir + "/steps.csv", recs);
    files.push_back("steps.csv");
    if (!snaps.empty()) {
      write_particles_csv(outdir + "/final_particles.csv", snaps.back());
      files.push_back("final_particles.csv");
      write_snapshots(cfg, snaps, V1_eps, dt_step, outdir, "", files);
    }
    verdicts = compose_verdicts(cfg, recs, nullptr, m1, m1);
    if (solver_error.empty()) {
      if (cfg.solver == "jko" && cfg.energy_weight == 1.0) {
        const EntropyBudget eb = check_entropy_dissipation(
            recs, cfg.tau, m1.l2_0_sq, m1.entropy_0,
            2.0 * m1.m2_0 + 2.0 * cfg.T * m1.l2_0_sq);
        h1_used = eb.budget > 0.0 ? eb.integral / eb.budget : 0.0;
      }
      const ordered_json d =
          trajectory_diagnostics(cfg, snaps, V1_eps, dt_step, h1_used);
      write_text(outdir + "/diagnostics.json", d.dump(2) + "\n");
      files.push_back("diagnostics.json");
    }
  } else if (cfg.problem == "nlis") {
    const MollifierKernel V2 = cfg.kernel2->build_base();
    const MollifierKernel V2_eps = V2.scaled(eps);
    const CrossWeight U =
        cfg.cross_weight ? cfg.cross_weight->build() : CrossWeight::dirac();
    const auto& M = *cfg.diffusion_matrix;
    const InitialBlock init2 = cfg.initial2 ? *cfg.initial2 : cfg.initial;
    const GridDensity rho0_2 =
        initial_density(init2, cfg.grid_a, cfg.grid_b, cfg.grid_m);
    const ParticleMeasure nu0 = quantiles_from_density(rho0_2, cfg.N);
    const MetaNumbers m2 = initial_numbers(rho0_2, nu0);
    meta["m2_0_s2"] = m2.m2_0;
    meta["l2_0_sq_s2"] = m2.l2_0_sq;
    meta["entropy_0_s2"] = m2.entropy_0;

    RelativeEnergy re{InteractionKernel::self_convolve(V1, eps),
                      InteractionKernel::self_convolve(V2, eps),
                      InteractionKernel::cross_convolve(V1, U, V2, eps),
                      InteractionKernel::cross_convolve(V2, U, V1, eps),
                      DiffusionMatrix(M[0][0], M[0][1], M[1][0], M[1][1])};
    std::vector<ParticleMeasure> s1, s2;
    std::vector<StepRecord> r1, r2;
    if (cfg.solver == "jko") {
      JkoConfig jc;
      jc.tau = cfg.tau;
      jc.T = cfg.T;
      auto [t1, t2] = solve_nlis_jko(mu0, nu0, jc, V1_eps, V2_eps, re, diag);
      s1 = std::move(t1.snapshots);
      s2 = std::move(t2.snapshots);
      r1 = std::move(t1.records);
      r2 = std::move(t2.records);
      solver_error = t1.error;
    } else {
      OdeConfig oc;
      oc.dt = cfg.dt;
      oc.T = cfg.T;
      auto [t1, t2] = integrate_nlis(mu0, nu0, re, oc, V1_eps, V2_eps, diag);
      s1 = std::move(t1.snapshots);
      s2 = std::move(t2.snapshots);
      r1 = std::move(t1.records);
      r2 = std::move(t2.records);
      solver_error = t1.error;
    }
    meta["solver_error"] = solver_error;
    write_step_records_csv(outdir + "/steps_s1.csv", r1);
    write_step_records_csv(outdir + "/steps_s2.csv", r2);
    files.push_back("steps_s1.csv");
    files.push_back("steps_s2.csv");
    if (!s1.empty()) {
      write_particles_csv(outdir + "/final_particles_s1.csv", s1.back());
      write_particles_csv(outdir + "/final_particles_s2.csv", s2.back());
      files.push_back("final_particles_s1.csv");
      files.push_back("final_particles_s2.csv");
      write_snapshots(cfg, s1, V1_eps, dt_step, outdir, "_s1", files);
      write_snapshots(cfg, s2, V2_eps, dt_step, outdir, "_s2", files);
    }
    verdicts = compose_verdicts(cfg, r1, &r2, m1, m2);
  } else {
    return run_reference(cfg, outdir, quiet);
  }

  write_text(outdir + "/run_meta.json", meta.dump(2) + "\n");
  files.push_back("run_meta.json");
  write_text(outdir + "/verdicts.json", verdicts);
  files.push_back("verdicts.json");

  std::ostringstream man;
  for (const std::string& f : files) man << f << "\n";
  man << (solver_error.empty() ? "status: ok"
                               : "status: failed\nerror: " + solver_error)
      << "\n";
  write_text(outdir + "/MANIFEST", man.str());

  print_verdicts(verdicts, quiet);
  if (!solver_error.empty()) {
    if (!quiet)
      std::cerr << "solver aborted, partial trajectory kept: " << solver_error
                << "\n";
    return 1;
  }
  const bool pass = ordered_json::parse(verdicts).at("pass").get<bool>();
  return pass ? 0 : 1;
}

int run_check(const std::string& outdir, bool quiet) {
  ordered_json meta;
  std::string stored;
  try {
    meta = ordered_json::parse(read_text(outdir + "/run_meta.json"));
    stored = read_text(outdir + "/verdicts.json");
  } catch (const std::exception& e) {
    std::cerr << "check: missing or unreadable artifacts: " << e.what() << "\n";
    return 2;
  }
  RunConfig cfg;
  try {
    cfg = parse_config_text(meta.at("config").dump());
  } catch (const std::exception& e) {
    std::cerr << "check: bad configuration echo: " << e.what() << "\n";
    return 2;
  }

  std::string replay;
  try {
    if (cfg.problem == "nlis") {
      const auto r1 = read_step_records_csv(outdir + "/steps_s1.csv");
      const auto r2 = read_step_records_csv(outdir + "/steps_s2.csv");
      MetaNumbers a{meta.at("m2_0").get<double>(),
                    meta.at("l2_0_sq").get<double>(),
                    meta.at("entropy_0").get<double>()};
      MetaNumbers b{meta.at("m2_0_s2").get<double>(),
                    meta.at("l2_0_sq_s2").get<double>(),
                    meta.at("entropy_0_s2").get<double>()};
      replay = compose_verdicts(cfg, r1, &r2, a, b);
    } else {
      const auto recs = read_step_records_csv(outdir + "/steps.csv");
      replay = verdicts_json_from_records(cfg, recs,
                                          meta.at("m2_0").get<double>(),
                                          meta.at("l2_0_sq").get<double>(),
                                          meta.at("entropy_0").get<double>());
    }
  } catch (const std::exception& e) {
    std::cerr << "check: replay failed: " << e.what() << "\n";
    return 2;
  }
  if (replay != stored) {
    std::cerr << "check: replayed verdicts differ from the recorded ones\n";
    return 2;
  }
  print_verdicts(replay, quiet);
  const bool solver_ok = meta.value("solver_error", std::string()).empty();
  const bool pass = ordered_json::parse(replay).at("pass").get<bool>();
  return (solver_ok && pass) ? 0 : 1;
}

int run_sweep(const RunConfig& cfg, const std::vector<double>& eps_override,
              const std::string& outdir, int jobs, bool quiet) {
  std::vector<double> eps_list = eps_override.empty() ? cfg.epsilons : eps_override;
  if (eps_list.empty()) eps_list = {cfg.kernel.epsilon};
  std::sort(eps_list.begin(), eps_list.end(), std::greater<double>());
  fs::create_directories(outdir);

  struct Row {
    double eps;
    std::string dir;
    int rc = 1;
    std::string error;
  };
  std::vector<Row> rows;
  for (double e : eps_list)
    rows.push_back({e, outdir + "/eps_" + tag(e), 1, ""});

  auto run_row = [&](Row& row) {
    RunConfig c = cfg;
    c.kernel.epsilon = row.eps;
    c.epsilons.clear();
    try {
      row.rc = run_single(c, row.dir, true);
    } catch (const std::exception& e) {
      row.rc = 1;
      row.error = e.what();
    }
  };
  if (jobs <= 1) {
    for (Row& r : rows) run_row(r);
  } else {
    for (size_t base = 0; base < rows.size(); base += static_cast<size_t>(jobs)) {
      std::vector<std::future<void>> fut;
      for (size_t k = base;
           k < rows.size() && k < base + static_cast<size_t>(jobs); ++k)
        fut.push_back(std::async(std::launch::async, run_row, std::ref(rows[k])));
      for (auto& f : fut) f.get();
    }
  }

  SweepReport rep;
  double prev_E = 0.0;
  bool have_prev = false;
  bool all_ok = true, decreasing = true;
  for (const Row& row : rows) {
    SweepRow r;
    r.eps = row.eps;
    if (row.rc == 0) {
      try {
        const ordered_json d =
            ordered_json::parse(read_text(row.dir + "/diagnostics.json"));
        r.E_l2 = d.at("E_l2").get<double>();
        r.excess_l1_max = d.at("excess_l1_max").get<double>();
        r.excess_l2 = d.at("excess_l2").get<double>();
        r.h1_budget_used = d.at("h1_budget_used").get<double>();
        r.ok = true;
        r.verdict = "ok";
      } catch (const std::exception& e) {
        r.verdict = std::string("failed: ") + e.what();
      }
    } else {
      std::string why = row.error;
      if (why.empty()) {
        try {
          const ordered_json m =
              ordered_json::parse(read_text(row.dir + "/run_meta.json"));
          why = m.value("solver_error", std::string());
        } catch (...) {
        }
      }
      if (why.empty()) why = "checks failed";
      r.verdict = "failed: " + why;
    }
    if (r.ok && have_prev) {
      r.ratio_prev = prev_E > 0.0 ? r.E_l2 / prev_E : 0.0;
      if (!(r.E_l2 < prev_E)) decreasing = false;
    }
    if (r.ok) {
      prev_E = r.E_l2;
      have_prev = true;
    } else {
      all_ok = false;
    }
    rep.rows.push_back(r);
  }
  rep.pass = all_ok && decreasing && rep.rows.size() >= 2;
  if (rep.rows.size() == 1) rep.pass = all_ok;
  write_sweep_report_csv(outdir + "/report.csv", rep);
  write_sweep_report_json(outdir + "/report.json", rep);
  if (!quiet) {
    for (const SweepRow& r : rep.rows)
      std::cout << "eps " << tag(r.eps) << ": E = " << fmt17(r.E_l2) << "  "
                << r.verdict << "\n";
    std::cout << "sweep: " << (rep.pass ? "pass" : "FAIL") << "\n";
  }
  return rep.pass ? 0 : 1;
}

int run_reference(const RunConfig& cfg, const std::string& outdir, bool quiet) {
  fs::create_directories(outdir);
  std::vector<std::string> files;
  const double c = effective_coefficient(cfg);
  for (double t : snapshot_times_of(cfg)) {
    const GridDensity v = barenblatt_grid(c * t, cfg.initial.t0, cfg.grid_a,
                                          cfg.grid_b, cfg.grid_m);
    const std::string name = "reference_t" + tag(t) + ".csv";
    write_grid_csv(outdir + "/" + name, v);
    files.push_back(name);
    if (!quiet)
      std::cout << name << ": mass " << fmt17(trapz_mass(v)) << ", m2 "
                << fmt17(barenblatt_m2(c * t, cfg.initial.t0)) << "\n";
  }
  std::ostringstream man;
  for (const std::string& f : files) man << f << "\n";
  man << "status: ok\n";
  write_text(outdir + "/MANIFEST", man.str());
  return 0;
}

}  // namespace nlpme
