// Benchmark: OpenMP pairwise energy/force against the serial reference.
// Prints timings and the max deviation (expected exactly 0: both orderings
// combine row partials sequentially).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "nlpme/energy.hpp"
#include "nlpme/kernels.hpp"

using namespace nlpme;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  int N = argc > 1 ? std::atoi(argv[1]) : 4000;
  int reps = argc > 2 ? std::atoi(argv[2]) : 5;

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> dist(0.0, 1.0);
  ParticleMeasure mu;
  mu.xs.resize(static_cast<size_t>(N));
  for (double& x : mu.xs) x = dist(rng);
  mu.sort_1d();

  const MollifierKernel V = MollifierKernel::gaussian(1.0);
  const InteractionKernel W = InteractionKernel::self_convolve(V, 0.25);
  const InteractionEnergy E{&W, 1.0, true};

  double e_par = 0.0, e_ser = 0.0;
  std::vector<double> f_par, f_ser;

  double t0 = now_ms();
  for (int r = 0; r < reps; ++r) e_par = interaction_energy(mu, E);
  double t1 = now_ms();
  for (int r = 0; r < reps; ++r) e_ser = interaction_energy_serial(mu, E);
  double t2 = now_ms();
  for (int r = 0; r < reps; ++r) f_par = interaction_force(mu, E);
  double t3 = now_ms();
  for (int r = 0; r < reps; ++r) f_ser = interaction_force_serial(mu, E);
  double t4 = now_ms();

  double fdev = 0.0;
  for (size_t i = 0; i < f_par.size(); ++i)
    fdev = std::max(fdev, std::abs(f_par[i] - f_ser[i]));

  std::printf("N = %d, %d reps\n", N, reps);
  std::printf("energy   parallel %8.2f ms   serial %8.2f ms   speedup %.2fx\n",
              (t1 - t0) / reps, (t2 - t1) / reps, (t2 - t1) / (t1 - t0));
  std::printf("force    parallel %8.2f ms   serial %8.2f ms   speedup %.2fx\n",
              (t3 - t2) / reps, (t4 - t3) / reps, (t4 - t3) / (t3 - t2));
  std::printf("energy deviation %.3g, force deviation %.3g\n",
              std::abs(e_par - e_ser), fdev);
  return (e_par == e_ser && fdev == 0.0) ? 0 : 1;
}
