#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace nlpme {

enum class KernelFamily { Gaussian, Laplace, CustomGrid };
enum class CrossWeightFamily { Dirac, Gaussian, Laplace };

/// Even profile tabulated on a uniform one-sided grid [0, halfwidth],
/// evaluated by cubic (Catmull-Rom) interpolation. Zero outside the domain.
class TabulatedProfile {
 public:
  TabulatedProfile(double halfwidth, std::vector<double> values);

  double value(double x) const;  // even in x
  double deriv(double x) const;  // odd in x, exactly 0 at x=0
  double halfwidth() const { return halfwidth_; }
  int nodes() const { return static_cast<int>(values_.size()); }

  /// Integral over the real line (trapezoid on the table, even extension).
  double mass() const;
  double abs_first_moment() const;

 private:
  double node_value(long j) const;  // even reflection at 0, zero beyond the end
  double halfwidth_;
  double h_;
  std::vector<double> values_;
};

/// Cross-weight measure U_ij: an even probability measure with finite first
/// moment, entering the kernels K_i = V_i * U_ij * V_j.
struct CrossWeight {
  CrossWeightFamily family = CrossWeightFamily::Dirac;
  double shape = 0.0;  // sigma (gaussian) or ell (laplace); unused for dirac

  static CrossWeight dirac() { return {CrossWeightFamily::Dirac, 0.0}; }
  static CrossWeight gaussian(double sigma);
  static CrossWeight laplace(double ell);

  double length_scale() const;
};

/// Even, nonnegative, unit-mass mollifier with bounded gradient growth.
/// Immutable after construction; scaling produces a new kernel.
class MollifierKernel {
 public:
  static MollifierKernel gaussian(double sigma, int dim = 1);
  static MollifierKernel laplace(double ell);  // d=1 only
  /// Custom even profile from samples (x strictly increasing). Validates
  /// nonnegativity, evenness and unit mass; rejects violators. d=1 only.
  static MollifierKernel from_samples(const std::vector<double>& x,
                                      const std::vector<double>& v);
  static MollifierKernel from_csv(const std::string& path);

  /// V_eps(x) = eps^{-d} V(x/eps).
  MollifierKernel scaled(double eps) const;

  double value(double x) const;               // d=1 (or radial slice)
  double value2(double x, double y) const;    // d=2 gaussian
  double grad(double x) const;                // d=1 derivative, 0 at x=0
  std::array<double, 2> grad2(double x, double y) const;

  KernelFamily family() const { return family_; }
  int dim() const { return dim_; }
  double shape() const { return shape_; }
  double eps() const { return eps_; }
  /// Characteristic width of the scaled kernel.
  double length_scale() const;
  /// Radius beyond which the kernel is treated as exactly 0.
  double cutoff() const;
  /// Integral of |z| V(z) dz for the scaled kernel.
  double abs_first_moment() const;
  /// Stored constant C with |V'(x)| <= C(1+|x|).
  double grad_growth_const() const { return grad_growth_const_; }
  bool lipschitz_at_origin() const { return lipschitz_at_origin_; }
  const TabulatedProfile* table() const { return table_.get(); }

 private:
  MollifierKernel() = default;
  KernelFamily family_ = KernelFamily::Gaussian;
  int dim_ = 1;
  double shape_ = 1.0;
  double eps_ = 1.0;
  double grad_growth_const_ = 0.0;
  bool lipschitz_at_origin_ = true;
  std::shared_ptr<const TabulatedProfile> table_;  // CustomGrid backend
};

/// Interaction kernel W_eps = V_eps * V_eps or cross kernel
/// K_eps = V_i^eps * U^eps * V_j^eps. Even, nonnegative, C^1 away from 0;
/// the gradient at exactly 0 is the zero vector.
class InteractionKernel {
 public:
  static InteractionKernel self_convolve(const MollifierKernel& V, double eps = 1.0);
  static InteractionKernel cross_convolve(const MollifierKernel& Vi,
                                          const CrossWeight& U,
                                          const MollifierKernel& Vj, double eps);

  double value(double x) const;
  /// Signed derivative in d=1; exactly 0 at x=0.
  double grad(double x) const;
  double value2(double x, double y) const;  // d=2 gaussian backend
  std::array<double, 2> grad2(double x, double y) const;

  double eps() const { return eps_; }
  int dim() const { return dim_; }
  double cutoff() const;
  double length_scale() const;
  bool closed_form() const { return backend_ != Backend::Tabulated; }

 private:
  enum class Backend { GaussianClosed, LaplaceClosed, Tabulated };
  InteractionKernel() = default;
  Backend backend_ = Backend::GaussianClosed;
  int dim_ = 1;
  double eps_ = 1.0;
  double sigma_ = 1.0;  // total std dev of the base (eps=1) gaussian
  double ell_ = 1.0;    // laplace scale of the base
  std::shared_ptr<const TabulatedProfile> table_;
};

/// Tabulate the convolution of two even 1-D profiles by quadrature.
/// Throws if the estimated tabulation error exceeds 1e-6.
TabulatedProfile convolve_profiles(const std::function<double(double)>& f,
                                   double scale_f,
                                   const std::function<double(double)>& g,
                                   double scale_g);

}  // namespace nlpme
