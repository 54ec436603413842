// End-to-end exercises of the command-line binary: artifact layout, replay
// determinism, tamper detection, and validation failures.
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAIL: " << what << "\n";
  }
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  f << s;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: test_cli_roundtrip <cli-binary>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path top = fs::temp_directory_path() / "nlpme_cli_test";
  fs::remove_all(top);
  fs::create_directories(top);

  const fs::path cfg = top / "smoke.json";
  write(cfg, R"({
    "problem": "nlie", "solver": "jko",
    "kernel": {"family": "gaussian", "shape": 1.0, "epsilon": 0.2},
    "N": 50, "tau": 0.002, "T": 0.1,
    "grid": {"a": -6, "b": 6, "m": 601},
    "initial": {"type": "barenblatt", "t0": 1.0}
  })");

  const fs::path out1 = top / "run1";
  const fs::path out2 = top / "run2";
  expect(run(cli + " run --config " + cfg.string() + " --out " + out1.string() +
             " --quiet") == 0,
         "smoke run exits 0");
  for (const char* f : {"steps.csv", "final_particles.csv", "run_meta.json",
                        "verdicts.json", "MANIFEST", "snapshot_t0.csv",
                        "snapshot_t0.05.csv", "snapshot_t0.1.csv",
                        "diagnostics.json"})
    expect(fs::exists(out1 / f), std::string("artifact present: ") + f);

  expect(run(cli + " run --config " + cfg.string() + " --out " + out2.string() +
             " --quiet") == 0,
         "second run exits 0");
  for (const char* f : {"steps.csv", "final_particles.csv", "verdicts.json",
                        "snapshot_t0.1.csv"})
    expect(slurp(out1 / f) == slurp(out2 / f),
           std::string("byte-identical artifact: ") + f);

  expect(run(cli + " check --out " + out1.string() + " --quiet") == 0,
         "check replays and passes");

  // tampering with the recorded energies must be caught
  const fs::path out3 = top / "tampered";
  fs::create_directories(out3);
  for (const char* f : {"steps.csv", "run_meta.json", "verdicts.json"})
    fs::copy_file(out1 / f, out3 / f);
  {
    std::ifstream in(out3 / "steps.csv");
    std::ostringstream edited;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      if (n == 5) {
        // bump the energy column (third field) far upward
        const size_t c1 = line.find(',');
        const size_t c2 = line.find(',', c1 + 1);
        const size_t c3 = line.find(',', c2 + 1);
        line = line.substr(0, c2 + 1) + "99.0" + line.substr(c3);
      }
      edited << line << "\n";
      ++n;
    }
    in.close();
    write(out3 / "steps.csv", edited.str());
  }
  expect(run(cli + " check --out " + out3.string() + " --quiet 2>/dev/null") != 0,
         "tampered energy column rejected");

  const fs::path empty = top / "empty";
  fs::create_directories(empty);
  expect(run(cli + " check --out " + empty.string() + " 2>/dev/null") == 2,
         "empty directory is an integrity error");

  // (A)-violating configuration: nonzero exit, message names the inequality
  const fs::path badcfg = top / "bad_matrix.json";
  write(badcfg, R"({
    "problem": "nlis", "solver": "jko",
    "kernel": {"family": "gaussian", "shape": 1.0, "epsilon": 0.2},
    "kernel2": {"family": "gaussian", "shape": 1.0, "epsilon": 0.2},
    "diffusion_matrix": [[1.0, 1.2], [1.2, 1.0]],
    "N": 50, "tau": 0.002, "T": 0.1,
    "grid": {"a": -6, "b": 6, "m": 601},
    "initial": {"type": "barenblatt", "t0": 1.0}
  })");
  const fs::path errlog = top / "bad_matrix.err";
  expect(run(cli + " run --config " + badcfg.string() + " --out " +
             (top / "bad_out").string() + " 2>" + errlog.string()) != 0,
         "matrix violating the coupling constraint is rejected");
  expect(slurp(errlog).find("min{A11,A22} > (A12+A21)/2 >= 0") != std::string::npos,
         "rejection message names the inequality");

  // unknown configuration key
  const fs::path unk = top / "unknown.json";
  write(unk, R"({"problem": "nlie", "tua": 0.001})");
  expect(run(cli + " run --config " + unk.string() + " --out " +
             (top / "unk_out").string() + " 2>/dev/null") == 2,
         "unknown key is a hard error");

  // reference emission
  const fs::path refdir = top / "ref";
  expect(run(cli + " reference --config " + cfg.string() + " --out " +
             refdir.string() + " --quiet") == 0,
         "reference emission exits 0");
  expect(fs::exists(refdir / "reference_t0.csv") &&
             fs::exists(refdir / "reference_t0.1.csv"),
         "reference CSVs written");

  // pme-reference problem behaves like the reference subcommand via run
  const fs::path pcfg = top / "pmeref.json";
  write(pcfg, R"({
    "problem": "pme-reference", "solver": "jko",
    "kernel": {"family": "gaussian", "shape": 1.0, "epsilon": 0.2},
    "N": 50, "tau": 0.002, "T": 0.1,
    "grid": {"a": -6, "b": 6, "m": 601},
    "initial": {"type": "barenblatt", "t0": 1.0}
  })");
  expect(run(cli + " run --config " + pcfg.string() + " --out " +
             (top / "pmeref_out").string() + " --quiet") == 0,
         "pme-reference run exits 0");

  // single-eps sweep equals run plus a one-row report
  const fs::path sweepdir = top / "sweep1";
  expect(run(cli + " sweep --config " + cfg.string() + " --out " +
             sweepdir.string() + " --quiet") == 0,
         "single-eps sweep exits 0");
  const std::string report = slurp(sweepdir / "report.csv");
  expect(report.find("eps,E_l2,ratio_prev") == 0, "sweep report header");
  expect(std::count(report.begin(), report.end(), '\n') == 2,
         "one data row for a single eps");
  expect(fs::exists(sweepdir / "eps_0.2" / "steps.csv"), "sweep row artifacts");
  expect(slurp(sweepdir / "eps_0.2" / "steps.csv") == slurp(out1 / "steps.csv"),
         "sweep row equals the plain run");

  if (failures == 0) std::cout << "cli round trip: all checks passed\n";
  return failures == 0 ? 0 : 1;
}
