#include "nlpme/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "nlpme/energy.hpp"

namespace nlpme {

using nlohmann::json;

MollifierKernel KernelBlock::build_base() const {
  if (family == "gaussian") return MollifierKernel::gaussian(shape);
  if (family == "laplace") return MollifierKernel::laplace(shape);
  if (family == "custom") return MollifierKernel::from_csv(csv);
  throw ConfigError("kernel.family: unknown family '" + family + "'");
}

CrossWeight CrossWeightBlock::build() const {
  if (family == "dirac") return CrossWeight::dirac();
  if (family == "gaussian") return CrossWeight::gaussian(shape);
  if (family == "laplace") return CrossWeight::laplace(shape);
  throw ConfigError("cross_weight.family: unknown family '" + family + "'");
}

std::vector<TestFunction> RunConfig::parsed_test_functions() const {
  if (test_functions.empty()) return default_test_functions();
  std::vector<TestFunction> out;
  for (const std::string& s : test_functions) out.push_back(TestFunction::parse(s));
  return out;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (problem != "nlie" && problem != "nlis" && problem != "pme-reference")
    fail("problem: must be nlie, nlis or pme-reference, got '" + problem + "'");
  if (solver != "jko" && solver != "ode")
    fail("solver: must be jko or ode, got '" + solver + "'");
  if (N < 1) fail("N: must be >= 1");
  if (!(T > 0.0)) fail("T: must be positive");
  if (solver == "jko" && !(tau > 0.0 && tau < T)) fail("tau: need 0 < tau < T");
  if (solver == "ode" && !(dt > 0.0 && dt < T)) fail("dt: need 0 < dt < T");
  if (!(grid_b > grid_a) || grid_m < 3) fail("grid: need b > a and m >= 3");
  if (!(kernel.epsilon > 0.0)) fail("kernel.epsilon: must be positive");
  for (double e : epsilons)
    if (!(e > 0.0)) fail("epsilons: entries must be positive");

  if (problem == "nlis") {
    if (!kernel2) fail("kernel2: required for problem=nlis");
    if (!diffusion_matrix) fail("diffusion_matrix: required for problem=nlis");
  }
  if (diffusion_matrix) {
    const auto& M = *diffusion_matrix;
    if (M.size() != 2 || M[0].size() != 2 || M[1].size() != 2)
      fail("diffusion_matrix: must be 2x2");
    // throws with the (A) inequality spelled out
    try {
      DiffusionMatrix check(M[0][0], M[0][1], M[1][0], M[1][1]);
    } catch (const std::exception& e) {
      fail(std::string("diffusion_matrix: ") + e.what());
    }
  }
  if (initial.type != "barenblatt" && initial.type != "uniform" && initial.type != "csv")
    fail("initial.type: must be barenblatt, uniform or csv");
  if (initial.type == "uniform" && !(initial.b > initial.a))
    fail("initial: need b > a for uniform");
  if (initial.type == "barenblatt" && !(initial.t0 > 0.0))
    fail("initial.t0: must be positive");

  // Grid must cover the initial support plus 8 * max eps of mollifier padding.
  double max_eps = kernel.epsilon;
  for (double e : epsilons) max_eps = std::max(max_eps, e);
  double lo = initial.a, hi = initial.b;
  if (initial.type == "barenblatt") {
    // support half-width at t0, conservatively dilated over the run
    const double s = 0.5 * (energy_weight * T + initial.t0);
    const double hw = std::sqrt(12.0 * std::pow(3.0 / (4.0 * std::sqrt(12.0)), 2.0 / 3.0)) *
                      std::cbrt(s);
    lo = -hw;
    hi = hw;
  }
  if (initial.type != "csv" &&
      (lo - 8.0 * max_eps < grid_a || hi + 8.0 * max_eps > grid_b))
    fail("grid: must cover the initial support plus 8*max(eps) padding");
  for (const std::string& s : test_functions) {
    try {
      TestFunction::parse(s);
    } catch (const std::exception& e) {
      fail(std::string("test_functions: ") + e.what());
    }
  }
}

namespace {

void require_keys(const json& j, const std::string& path,
                  const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key))
      throw ConfigError("unknown configuration key '" +
                        (path.empty() ? key : path + "." + key) + "'");
}

KernelBlock parse_kernel(const json& j, const std::string& path) {
  require_keys(j, path, {"family", "shape", "epsilon", "csv"});
  KernelBlock k;
  if (j.contains("family")) k.family = j.at("family").get<std::string>();
  if (j.contains("shape")) k.shape = j.at("shape").get<double>();
  if (j.contains("epsilon")) k.epsilon = j.at("epsilon").get<double>();
  if (j.contains("csv")) k.csv = j.at("csv").get<std::string>();
  return k;
}

InitialBlock parse_initial(const json& j, const std::string& path) {
  require_keys(j, path, {"type", "t0", "a", "b", "path"});
  InitialBlock b;
  if (j.contains("type")) b.type = j.at("type").get<std::string>();
  if (j.contains("t0")) b.t0 = j.at("t0").get<double>();
  if (j.contains("a")) b.a = j.at("a").get<double>();
  if (j.contains("b")) b.b = j.at("b").get<double>();
  if (j.contains("path")) b.path = j.at("path").get<std::string>();
  return b;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  require_keys(j, "",
               {"problem", "solver", "kernel", "kernel2", "cross_weight",
                "diffusion_matrix", "N", "epsilons", "tau", "dt", "T", "grid",
                "initial", "initial2", "test_functions", "snapshot_times",
                "energy_weight", "seed"});
  RunConfig c;
  if (j.contains("problem")) c.problem = j.at("problem").get<std::string>();
  if (j.contains("solver")) c.solver = j.at("solver").get<std::string>();
  if (j.contains("kernel")) c.kernel = parse_kernel(j.at("kernel"), "kernel");
  if (j.contains("kernel2")) c.kernel2 = parse_kernel(j.at("kernel2"), "kernel2");
  if (j.contains("cross_weight")) {
    const json& u = j.at("cross_weight");
    require_keys(u, "cross_weight", {"family", "shape"});
    CrossWeightBlock w;
    if (u.contains("family")) w.family = u.at("family").get<std::string>();
    if (u.contains("shape")) w.shape = u.at("shape").get<double>();
    c.cross_weight = w;
  }
  if (j.contains("diffusion_matrix"))
    c.diffusion_matrix = j.at("diffusion_matrix").get<std::vector<std::vector<double>>>();
  if (j.contains("N")) c.N = j.at("N").get<int>();
  if (j.contains("epsilons")) c.epsilons = j.at("epsilons").get<std::vector<double>>();
  if (j.contains("tau")) c.tau = j.at("tau").get<double>();
  if (j.contains("dt")) c.dt = j.at("dt").get<double>();
  if (j.contains("T")) c.T = j.at("T").get<double>();
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    require_keys(g, "grid", {"a", "b", "m"});
    if (g.contains("a")) c.grid_a = g.at("a").get<double>();
    if (g.contains("b")) c.grid_b = g.at("b").get<double>();
    if (g.contains("m")) c.grid_m = g.at("m").get<int>();
  }
  if (j.contains("initial")) c.initial = parse_initial(j.at("initial"), "initial");
  if (j.contains("initial2")) c.initial2 = parse_initial(j.at("initial2"), "initial2");
  if (j.contains("test_functions"))
    c.test_functions = j.at("test_functions").get<std::vector<std::string>>();
  if (j.contains("snapshot_times"))
    c.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
  if (j.contains("energy_weight")) c.energy_weight = j.at("energy_weight").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<long>();
  c.validate();
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open configuration file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace nlpme
