#pragma once

#include <string>
#include <vector>

namespace nlpme {

/// Compactly supported C^2 (bump) or C^1 (quadratic window) test function,
/// supplied with gradient and Hessian evaluators. Evaluations clamp to 0
/// outside the declared support.
struct TestFunction {
  enum class Kind { Bump, QuadraticWindow, Linear };
  Kind kind = Kind::Bump;
  double center = 0.0;
  double width = 1.0;  // support is [center-width, center+width]

  /// bump:             (1-u^2)^3 on |u|<1, u=(x-c)/w
  /// quadratic_window: (1-u^2)^2 on |u|<1
  /// linear:           x (unbounded support; excess terms vanish identically)
  double value(double x) const;
  double grad(double x) const;
  double hess(double x) const;
  /// Essential sup of |phi''|.
  double hess_inf_norm() const;
  double support_lo() const;
  double support_hi() const;
  std::string name() const;

  static TestFunction bump(double center, double width);
  static TestFunction quadratic_window(double center, double width);
  static TestFunction linear();
  /// Parses "bump(c,w)" / "quadratic_window(c,w)" / "linear".
  static TestFunction parse(const std::string& s);
};

/// The default family used by excess diagnostics: bumps at staggered
/// centers and widths.
std::vector<TestFunction> default_test_functions();

}  // namespace nlpme
