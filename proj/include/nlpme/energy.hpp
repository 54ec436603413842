#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "nlpme/grid.hpp"
#include "nlpme/kernels.hpp"
#include "nlpme/particles.hpp"
#include "nlpme/testfn.hpp"

namespace nlpme {

/// Cross-diffusion coefficient matrix; construction enforces
/// min{A11,A22} > (A12+A21)/2 >= 0.
struct DiffusionMatrix {
  double a11, a12, a21, a22;
  DiffusionMatrix(double a11_, double a12_, double a21_, double a22_);
};

/// Interaction energy (weight/2) \iint W_eps d(mu x mu) as a particle double
/// sum. The diagonal i=j is included by default: the continuum double
/// integral over a product of atomic measures carries it, and it is constant
/// in the positions so forces are unaffected.
struct InteractionEnergy {
  const InteractionKernel* kernel = nullptr;
  double weight = 1.0;
  bool include_diagonal = true;
};

/// (weight/(2N^2)) sum_ij W(X_i - X_j). OpenMP over rows, deterministic
/// sequential combine.
double interaction_energy(const ParticleMeasure& mu, const InteractionEnergy& E);
/// Plain-loop reference implementation, kept for testing and benchmarks.
double interaction_energy_serial(const ParticleMeasure& mu, const InteractionEnergy& E);

/// F_i = -weight (1/N) sum_j grad W(X_i - X_j); the particle ODE reads
/// Xdot_i = F_i, and F_i = -d/dX_i [N * interaction_energy].
std::vector<double> interaction_force(const ParticleMeasure& mu, const InteractionEnergy& E);
std::vector<double> interaction_force_serial(const ParticleMeasure& mu, const InteractionEnergy& E);

/// Kernels and matrix of the two-species relative energy
/// F = H + K with H the self part and K the cross part frozen at nu.
struct RelativeEnergy {
  InteractionKernel H1, H2, K1, K2;
  DiffusionMatrix A;
};

struct RelativeEnergyValue {
  double self_part;   // (A11/2)∬H1 dmu1 dmu1 + (A22/2)∬H2 dmu2 dmu2
  double cross_part;  // A12 ∬K1 dnu2 dmu1 + A21 ∬K2 dnu1 dmu2
  double total() const { return self_part + cross_part; }
};

RelativeEnergyValue relative_energy(const ParticleMeasure& mu1,
                                    const ParticleMeasure& mu2,
                                    const ParticleMeasure& nu1,
                                    const ParticleMeasure& nu2,
                                    const RelativeEnergy& re);

/// Excess field z(x) = (1/N) sum_i P(x - X_i) grad_phi(X_i)
///                   - [(1/N) sum_i P(x - X_i)] grad_phi(x)
/// for a kernel profile P, with companion L1 and L2 norms by trapezoid.
struct ExcessField {
  GridDensity z;  // signed values
  double l1 = 0.0;
  double l2 = 0.0;  // sqrt of trapezoid of z^2
  /// int (1/N) sum_i P(x - X_i) |grad_phi(X_i) - grad_phi(x)| dx: the
  /// cancellation-free estimate that majorises l1 and decays linearly in the
  /// kernel width (the signed l1 decays faster on smooth configurations).
  double l1_majorant = 0.0;
};

ExcessField excess_term(const ParticleMeasure& mu, const MollifierKernel& V_eps,
                        const TestFunction& phi, double a, double b, int m);

/// Cross excess z12 computed with P12 = V_i^eps * U12^eps in place of V_eps.
ExcessField cross_excess_term(const ParticleMeasure& mu1,
                              const InteractionKernel& P12,
                              const TestFunction& phi, double a, double b, int m);

}  // namespace nlpme
