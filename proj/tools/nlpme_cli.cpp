// Command-line front end: run / sweep / cds / check / reference.
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nlpme/config.hpp"
#include "nlpme/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"particle solvers for nonlocal interaction equations"};
  app.require_subcommand(1);

  std::string config_path, outdir = "out";
  std::vector<double> eps_override;
  int jobs = 1;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "configuration JSON");
    if (needs_config) opt->required();
    sub->add_option("--out", outdir, "output directory");
    sub->add_flag("--quiet", quiet, "suppress per-check output");
  };

  CLI::App* run = app.add_subcommand("run", "single run with recorded checks");
  add_common(run, true);
  CLI::App* sweep = app.add_subcommand("sweep", "one run per epsilon plus a report");
  add_common(sweep, true);
  sweep->add_option("--epsilons", eps_override, "override the epsilon list")
      ->delimiter(',');
  sweep->add_option("--jobs", jobs, "concurrent rows");
  CLI::App* cds = app.add_subcommand("cds", "two-species run (problem forced to nlis)");
  add_common(cds, true);
  CLI::App* check = app.add_subcommand("check", "replay recorded checks from artifacts");
  check->add_option("--out", outdir, "directory of a previous run")->required();
  check->add_flag("--quiet", quiet, "suppress per-check output");
  CLI::App* ref = app.add_subcommand("reference", "emit self-similar reference profiles");
  add_common(ref, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return nlpme::run_check(outdir, quiet);
    nlpme::RunConfig cfg = nlpme::parse_config_file(config_path);
    if (run->parsed()) return nlpme::run_single(cfg, outdir, quiet);
    if (sweep->parsed()) return nlpme::run_sweep(cfg, eps_override, outdir, jobs, quiet);
    if (cds->parsed()) {
      if (cfg.problem != "nlis")
        throw nlpme::ConfigError("cds: configuration must set problem=nlis");
      return nlpme::run_single(cfg, outdir, quiet);
    }
    if (ref->parsed()) return nlpme::run_reference(cfg, outdir, quiet);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
