#include "nlpme/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlpme {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Builtin tails are below 1e-12 at 12 length scales; the kernel and its
// gradient evaluate to 0 beyond this radius.
constexpr double kCutoffScales = 12.0;

double gauss1(double x, double sigma) {
  const double u = x / sigma;
  return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * kPi));
}

}  // namespace

// ---------------------------------------------------------------------------
// TabulatedProfile

TabulatedProfile::TabulatedProfile(double halfwidth, std::vector<double> values)
    : halfwidth_(halfwidth), values_(std::move(values)) {
  if (!(halfwidth > 0.0) || values_.size() < 4)
    throw std::invalid_argument("TabulatedProfile: degenerate table");
  h_ = halfwidth_ / static_cast<double>(values_.size() - 1);
}

double TabulatedProfile::node_value(long j) const {
  if (j < 0) j = -j;  // even reflection
  if (j >= static_cast<long>(values_.size())) return 0.0;
  return values_[static_cast<size_t>(j)];
}

double TabulatedProfile::value(double x) const {
  const double r = std::abs(x);
  if (r >= halfwidth_) return 0.0;
  const long j = static_cast<long>(r / h_);
  const double t = r / h_ - static_cast<double>(j);
  const double p0 = node_value(j - 1), p1 = node_value(j), p2 = node_value(j + 1),
               p3 = node_value(j + 2);
  // Catmull-Rom
  return 0.5 * (2.0 * p1 + t * ((p2 - p0) +
                t * ((2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) +
                t * (3.0 * (p1 - p2) + p3 - p0))));
}

double TabulatedProfile::deriv(double x) const {
  if (x == 0.0) return 0.0;
  const double r = std::abs(x);
  if (r >= halfwidth_) return 0.0;
  const long j = static_cast<long>(r / h_);
  const double t = r / h_ - static_cast<double>(j);
  const double p0 = node_value(j - 1), p1 = node_value(j), p2 = node_value(j + 1),
               p3 = node_value(j + 2);
  const double d = 0.5 * ((p2 - p0) +
                   2.0 * t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) +
                   3.0 * t * t * (3.0 * (p1 - p2) + p3 - p0)) / h_;
  return x > 0.0 ? d : -d;
}

double TabulatedProfile::mass() const {
  double s = 0.5 * values_.front() + 0.5 * values_.back();
  for (size_t k = 1; k + 1 < values_.size(); ++k) s += values_[k];
  return 2.0 * s * h_;  // even extension
}

double TabulatedProfile::abs_first_moment() const {
  double s = 0.5 * values_.back() * halfwidth_;
  for (size_t k = 1; k + 1 < values_.size(); ++k)
    s += values_[k] * (static_cast<double>(k) * h_);
  return 2.0 * s * h_;
}

// ---------------------------------------------------------------------------
// CrossWeight

CrossWeight CrossWeight::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("CrossWeight: sigma must be positive");
  return {CrossWeightFamily::Gaussian, sigma};
}

CrossWeight CrossWeight::laplace(double ell) {
  if (!(ell > 0.0)) throw std::invalid_argument("CrossWeight: ell must be positive");
  return {CrossWeightFamily::Laplace, ell};
}

double CrossWeight::length_scale() const {
  return family == CrossWeightFamily::Dirac ? 0.0 : shape;
}

// ---------------------------------------------------------------------------
// MollifierKernel

MollifierKernel MollifierKernel::gaussian(double sigma, int dim) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian: sigma must be positive");
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("gaussian: dimension must be 1 or 2");
  MollifierKernel k;
  k.family_ = KernelFamily::Gaussian;
  k.dim_ = dim;
  k.shape_ = sigma;
  k.lipschitz_at_origin_ = true;
  // |V'(x)| = |x|/sigma^2 V(x), maximum of |V'|/(1+|x|) at x=sigma is a safe cap
  k.grad_growth_const_ = gauss1(sigma, sigma) / sigma;
  return k;
}

MollifierKernel MollifierKernel::laplace(double ell) {
  if (!(ell > 0.0)) throw std::invalid_argument("laplace: ell must be positive");
  MollifierKernel k;
  k.family_ = KernelFamily::Laplace;
  k.dim_ = 1;
  k.shape_ = ell;
  k.lipschitz_at_origin_ = false;  // gradient jumps at 0
  k.grad_growth_const_ = 1.0 / (2.0 * ell * ell);  // sup|V'|
  return k;
}

MollifierKernel MollifierKernel::from_samples(const std::vector<double>& x,
                                              const std::vector<double>& v) {
  if (x.size() != v.size() || x.size() < 8)
    throw std::invalid_argument("from_samples: need matching arrays, >= 8 points");
  for (size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1]))
      throw std::invalid_argument("from_samples: x must be strictly increasing");
  for (double val : v)
    if (!(val >= 0.0))
      throw std::invalid_argument("from_samples: kernel values must be nonnegative");

  // Resample onto a uniform one-sided grid by linear interpolation of the
  // even-symmetrised input.
  const double R = std::max(std::abs(x.front()), std::abs(x.back()));
  auto interp = [&](double q) -> double {
    if (q < x.front() || q > x.back()) return 0.0;
    const auto it = std::upper_bound(x.begin(), x.end(), q);
    const size_t i = static_cast<size_t>(it - x.begin());
    if (i == 0) return v.front();
    if (i >= x.size()) return v.back();
    const double t = (q - x[i - 1]) / (x[i] - x[i - 1]);
    return (1.0 - t) * v[i - 1] + t * v[i];
  };
  // Evenness check on the sampled range.
  double maxv = 0.0, asym = 0.0;
  for (double q = 0.0; q <= R; q += R / 256.0) {
    const double p = interp(q), n = interp(-q);
    maxv = std::max(maxv, std::max(p, n));
    asym = std::max(asym, std::abs(p - n));
  }
  if (asym > 1e-6 * std::max(maxv, 1e-30))
    throw std::invalid_argument("from_samples: kernel is not even");

  const int M = 2049;
  std::vector<double> tab(M);
  for (int j = 0; j < M; ++j) {
    const double q = R * j / (M - 1);
    tab[j] = 0.5 * (interp(q) + interp(-q));
  }
  TabulatedProfile prof(R, tab);
  const double mass = prof.mass();
  if (std::abs(mass - 1.0) > 1e-4)
    throw std::invalid_argument("from_samples: mass " + std::to_string(mass) +
                                " violates unit normalisation");
  for (double& t : tab) t /= mass;  // remove the residual quadrature defect

  MollifierKernel k;
  k.family_ = KernelFamily::CustomGrid;
  k.dim_ = 1;
  k.shape_ = R / kCutoffScales;
  k.lipschitz_at_origin_ = true;
  k.table_ = std::make_shared<TabulatedProfile>(R, tab);
  double c = 0.0;
  for (double q = 1e-3 * R; q < R; q += R / 512.0)
    c = std::max(c, std::abs(k.table_->deriv(q)) / (1.0 + q));
  k.grad_growth_const_ = c;
  return k;
}

MollifierKernel MollifierKernel::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("from_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,value", 0) != 0)
    throw std::runtime_error("from_csv: expected header 'x,value' in " + path);
  std::vector<double> xs, vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string fx, fv;
    if (!std::getline(ss, fx, ',') || !std::getline(ss, fv, ','))
      throw std::runtime_error("from_csv: malformed row '" + line + "'");
    xs.push_back(std::stod(fx));
    vs.push_back(std::stod(fv));
  }
  return from_samples(xs, vs);
}

MollifierKernel MollifierKernel::scaled(double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("scaled: eps must be positive");
  MollifierKernel k = *this;
  k.eps_ = eps_ * eps;
  // |V_eps'| <= eps^{-d-1} sup|V'|; keep the affine growth form
  k.grad_growth_const_ = grad_growth_const_ / std::pow(eps, dim_ + 1);
  return k;
}

double MollifierKernel::value(double x) const {
  if (std::abs(x) >= cutoff()) return 0.0;
  const double xi = x / eps_;
  double base;
  switch (family_) {
    case KernelFamily::Gaussian:
      if (dim_ == 2) {
        const double u = xi / shape_;
        base = std::exp(-0.5 * u * u) / (2.0 * kPi * shape_ * shape_);
      } else {
        base = gauss1(xi, shape_);
      }
      break;
    case KernelFamily::Laplace:
      base = std::exp(-std::abs(xi) / shape_) / (2.0 * shape_);
      break;
    case KernelFamily::CustomGrid:
      base = table_->value(xi);
      break;
    default:
      base = 0.0;
  }
  return base / std::pow(eps_, dim_);
}

double MollifierKernel::value2(double x, double y) const {
  if (dim_ != 2 || family_ != KernelFamily::Gaussian)
    throw std::logic_error("value2: only the d=2 gaussian family is supported");
  const double s = shape_ * eps_;
  const double r2 = (x * x + y * y) / (s * s);
  return std::exp(-0.5 * r2) / (2.0 * kPi * s * s);
}

double MollifierKernel::grad(double x) const {
  if (x == 0.0 || std::abs(x) >= cutoff()) return 0.0;
  const double xi = x / eps_;
  double base;
  switch (family_) {
    case KernelFamily::Gaussian:
      base = -xi / (shape_ * shape_) * gauss1(xi, shape_);
      break;
    case KernelFamily::Laplace:
      base = -(xi > 0.0 ? 1.0 : -1.0) *
             std::exp(-std::abs(xi) / shape_) / (2.0 * shape_ * shape_);
      break;
    case KernelFamily::CustomGrid:
      base = table_->deriv(xi);
      break;
    default:
      base = 0.0;
  }
  return base / std::pow(eps_, dim_ + 1);
}

std::array<double, 2> MollifierKernel::grad2(double x, double y) const {
  if (x == 0.0 && y == 0.0) return {0.0, 0.0};
  const double s = shape_ * eps_;
  const double v = value2(x, y);
  return {-x / (s * s) * v, -y / (s * s) * v};
}

double MollifierKernel::length_scale() const { return shape_ * eps_; }

double MollifierKernel::cutoff() const {
  if (family_ == KernelFamily::CustomGrid) return table_->halfwidth() * eps_;
  return kCutoffScales * length_scale();
}

double MollifierKernel::abs_first_moment() const {
  double base;
  switch (family_) {
    case KernelFamily::Gaussian:
      base = shape_ * std::sqrt(2.0 / kPi);  // E|Z| of N(0,sigma^2)
      if (dim_ == 2) base = shape_ * std::sqrt(kPi / 2.0);  // E|Z|, 2-D radial
      break;
    case KernelFamily::Laplace:
      base = shape_;
      break;
    case KernelFamily::CustomGrid:
      base = table_->abs_first_moment();
      break;
    default:
      base = 0.0;
  }
  return base * eps_;
}

// ---------------------------------------------------------------------------
// numeric convolution backend

TabulatedProfile convolve_profiles(const std::function<double(double)>& f,
                                   double scale_f,
                                   const std::function<double(double)>& g,
                                   double scale_g) {
  const double L = scale_f + scale_g;
  const double R = kCutoffScales * L;
  const int M = 2049;                       // tabulation nodes on [0,R]
  const double qstep = std::min(scale_f, scale_g) / 64.0;
  const double yR = kCutoffScales * scale_f;
  long half = std::lround(yR / qstep);
  if (half % 2 != 0) ++half;            // keep the stride-2 check a valid Simpson rule
  const long nq = 2 * half + 1;
  const double hq = 2.0 * yR / static_cast<double>(nq - 1);

  auto conv_at = [&](double x, long stride) -> double {
    // Simpson on [-yR, yR] with the given stride multiplier
    double s = 0.0;
    const long n = (nq - 1) / stride;
    const double h = hq * static_cast<double>(stride);
    for (long k = 0; k <= n; ++k) {
      const double y = -yR + h * static_cast<double>(k);
      const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      s += w * f(y) * g(x - y);
    }
    return s * h / 3.0;
  };

  std::vector<double> tab(M);
  for (int j = 0; j < M; ++j) tab[j] = conv_at(R * j / (M - 1), 1);

  // Resolution check: coarser quadrature must agree to 1e-6 at sample points.
  double err = 0.0;
  for (int j = 0; j < M; j += M / 16)
    err = std::max(err, std::abs(tab[j] - conv_at(R * j / (M - 1), 2)));
  // 1e-4: profiles with a kink at the origin (laplace) converge like h^2
  // only away from the kink, and the support truncation adds ~e^{-12}
  if (err > 1e-4)
    throw std::runtime_error("convolve_profiles: insufficient quadrature resolution, error " +
                             std::to_string(err));
  return TabulatedProfile(R, tab);
}

// ---------------------------------------------------------------------------
// InteractionKernel

InteractionKernel InteractionKernel::self_convolve(const MollifierKernel& V, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("self_convolve: eps must be positive");
  InteractionKernel W;
  W.dim_ = V.dim();
  W.eps_ = eps * V.eps();
  switch (V.family()) {
    case KernelFamily::Gaussian:
      W.backend_ = Backend::GaussianClosed;
      W.sigma_ = V.shape() * std::sqrt(2.0);
      break;
    case KernelFamily::Laplace:
      W.backend_ = Backend::LaplaceClosed;
      W.ell_ = V.shape();
      break;
    case KernelFamily::CustomGrid: {
      W.backend_ = Backend::Tabulated;
      const MollifierKernel base = V.scaled(1.0 / V.eps());  // eps=1 profile
      auto ev = [base](double x) { return base.value(x); };
      W.table_ = std::make_shared<TabulatedProfile>(
          convolve_profiles(ev, base.length_scale(), ev, base.length_scale()));
      break;
    }
  }
  return W;
}

InteractionKernel InteractionKernel::cross_convolve(const MollifierKernel& Vi,
                                                    const CrossWeight& U,
                                                    const MollifierKernel& Vj,
                                                    double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("cross_convolve: eps must be positive");
  if (Vi.dim() != 1 || Vj.dim() != 1)
    throw std::invalid_argument("cross_convolve: d=1 only");
  InteractionKernel K;
  K.dim_ = 1;
  K.eps_ = eps;

  const bool all_gaussian =
      Vi.family() == KernelFamily::Gaussian && Vj.family() == KernelFamily::Gaussian &&
      (U.family == CrossWeightFamily::Dirac || U.family == CrossWeightFamily::Gaussian);
  if (all_gaussian) {
    // variances add under convolution
    double var = Vi.shape() * Vi.shape() + Vj.shape() * Vj.shape();
    if (U.family == CrossWeightFamily::Gaussian) var += U.shape * U.shape;
    K.backend_ = Backend::GaussianClosed;
    K.sigma_ = std::sqrt(var);
    return K;
  }
  if (U.family == CrossWeightFamily::Dirac &&
      Vi.family() == KernelFamily::Laplace && Vj.family() == KernelFamily::Laplace &&
      Vi.shape() == Vj.shape()) {
    K.backend_ = Backend::LaplaceClosed;
    K.ell_ = Vi.shape();
    return K;
  }

  // General case: tabulate (V_i * U) * V_j at eps = 1.
  const MollifierKernel bi = Vi.scaled(1.0 / Vi.eps());
  const MollifierKernel bj = Vj.scaled(1.0 / Vj.eps());
  std::function<double(double)> left;
  double left_scale;
  if (U.family == CrossWeightFamily::Dirac) {
    left = [bi](double x) { return bi.value(x); };
    left_scale = bi.length_scale();
  } else {
    std::function<double(double)> u_ev;
    if (U.family == CrossWeightFamily::Gaussian) {
      const double s = U.shape;
      u_ev = [s](double x) { return gauss1(x, s); };
    } else {
      const double l = U.shape;
      u_ev = [l](double x) { return std::exp(-std::abs(x) / l) / (2.0 * l); };
    }
    auto vi_ev = [bi](double x) { return bi.value(x); };
    auto first = std::make_shared<TabulatedProfile>(
        convolve_profiles(vi_ev, bi.length_scale(), u_ev, U.length_scale()));
    left = [first](double x) { return first->value(x); };
    left_scale = bi.length_scale() + U.length_scale();
  }
  auto vj_ev = [bj](double x) { return bj.value(x); };
  K.backend_ = Backend::Tabulated;
  K.table_ = std::make_shared<TabulatedProfile>(
      convolve_profiles(left, left_scale, vj_ev, bj.length_scale()));
  return K;
}

double InteractionKernel::value(double x) const {
  if (std::abs(x) >= cutoff()) return 0.0;
  const double xi = x / eps_;
  double base;
  switch (backend_) {
    case Backend::GaussianClosed:
      if (dim_ == 2) {
        const double u = xi / sigma_;
        base = std::exp(-0.5 * u * u) / (2.0 * kPi * sigma_ * sigma_);
      } else {
        base = gauss1(xi, sigma_);
      }
      break;
    case Backend::LaplaceClosed: {
      const double r = std::abs(xi) / ell_;
      base = (1.0 + r) * std::exp(-r) / (4.0 * ell_);
      break;
    }
    case Backend::Tabulated:
      base = table_->value(xi);
      break;
    default:
      base = 0.0;
  }
  return base / std::pow(eps_, dim_);
}

double InteractionKernel::grad(double x) const {
  if (x == 0.0) return 0.0;  // odd-symmetry convention
  if (std::abs(x) >= cutoff()) return 0.0;
  const double xi = x / eps_;
  double base;
  switch (backend_) {
    case Backend::GaussianClosed:
      base = -xi / (sigma_ * sigma_) * gauss1(xi, sigma_);
      break;
    case Backend::LaplaceClosed:
      // d/dx (1+|x|/l)e^{-|x|/l}/(4l) = -x e^{-|x|/l}/(4 l^3)
      base = -xi * std::exp(-std::abs(xi) / ell_) / (4.0 * ell_ * ell_ * ell_);
      break;
    case Backend::Tabulated:
      base = table_->deriv(xi);
      break;
    default:
      base = 0.0;
  }
  return base / std::pow(eps_, dim_ + 1);
}

double InteractionKernel::value2(double x, double y) const {
  if (dim_ != 2 || backend_ != Backend::GaussianClosed)
    throw std::logic_error("value2: only the d=2 gaussian backend is supported");
  const double s = sigma_ * eps_;
  const double r2 = (x * x + y * y) / (s * s);
  return std::exp(-0.5 * r2) / (2.0 * kPi * s * s);
}

std::array<double, 2> InteractionKernel::grad2(double x, double y) const {
  if (x == 0.0 && y == 0.0) return {0.0, 0.0};
  const double s = sigma_ * eps_;
  const double v = value2(x, y);
  return {-x / (s * s) * v, -y / (s * s) * v};
}

double InteractionKernel::length_scale() const {
  switch (backend_) {
    case Backend::GaussianClosed: return sigma_ * eps_;
    case Backend::LaplaceClosed: return ell_ * eps_;
    case Backend::Tabulated: return table_->halfwidth() * eps_ / kCutoffScales;
  }
  return eps_;
}

double InteractionKernel::cutoff() const {
  if (backend_ == Backend::Tabulated) return table_->halfwidth() * eps_;
  return kCutoffScales * length_scale();
}

}  // namespace nlpme
