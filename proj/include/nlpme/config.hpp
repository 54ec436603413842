#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlpme/kernels.hpp"
#include "nlpme/testfn.hpp"

namespace nlpme {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KernelBlock {
  std::string family = "gaussian";  // gaussian | laplace | custom
  double shape = 1.0;
  double epsilon = 0.2;
  std::string csv;  // custom family: two-column "x,value" samples

  MollifierKernel build_base() const;  // unscaled V_1
};

struct CrossWeightBlock {
  std::string family = "dirac";  // dirac | gaussian | laplace
  double shape = 0.0;
  CrossWeight build() const;
};

struct InitialBlock {
  std::string type = "barenblatt";  // barenblatt | uniform | csv
  double t0 = 1.0;
  double a = -0.5, b = 0.5;
  std::string path;
};

struct RunConfig {
  std::string problem = "nlie";  // nlie | nlis | pme-reference
  std::string solver = "jko";    // jko | ode
  KernelBlock kernel;
  std::optional<KernelBlock> kernel2;
  std::optional<CrossWeightBlock> cross_weight;
  std::optional<std::vector<std::vector<double>>> diffusion_matrix;
  int N = 200;
  std::vector<double> epsilons;  // optional sweep list; empty = use kernel.epsilon
  double tau = 1e-3;
  double dt = 2e-4;
  double T = 0.1;
  double grid_a = -6.0, grid_b = 6.0;
  int grid_m = 1201;
  InitialBlock initial;
  std::optional<InitialBlock> initial2;
  std::vector<std::string> test_functions;
  std::vector<double> snapshot_times;
  double energy_weight = 1.0;
  long seed = 0;  // fixture generation only; the solvers are deterministic

  std::vector<TestFunction> parsed_test_functions() const;
  /// Cross-field consistency; throws ConfigError with the offending field path.
  void validate() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace nlpme
