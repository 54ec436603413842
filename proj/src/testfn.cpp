#include "nlpme/testfn.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nlpme {

double TestFunction::value(double x) const {
  if (kind == Kind::Linear) return x;
  const double u = (x - center) / width;
  if (std::abs(u) >= 1.0) return 0.0;
  const double q = 1.0 - u * u;
  return kind == Kind::Bump ? q * q * q : q * q;
}

double TestFunction::grad(double x) const {
  if (kind == Kind::Linear) return 1.0;
  const double u = (x - center) / width;
  if (std::abs(u) >= 1.0) return 0.0;
  const double q = 1.0 - u * u;
  return kind == Kind::Bump ? -6.0 * u * q * q / width : -4.0 * u * q / width;
}

double TestFunction::hess(double x) const {
  if (kind == Kind::Linear) return 0.0;
  const double u = (x - center) / width;
  if (std::abs(u) >= 1.0) return 0.0;
  const double u2 = u * u;
  if (kind == Kind::Bump) return (1.0 - u2) * (30.0 * u2 - 6.0) / (width * width);
  return (12.0 * u2 - 4.0) / (width * width);
}

double TestFunction::hess_inf_norm() const {
  switch (kind) {
    case Kind::Bump: return 6.0 / (width * width);
    case Kind::QuadraticWindow: return 8.0 / (width * width);
    case Kind::Linear: return 0.0;
  }
  return 0.0;
}

double TestFunction::support_lo() const {
  return kind == Kind::Linear ? -std::numeric_limits<double>::infinity()
                              : center - width;
}

double TestFunction::support_hi() const {
  return kind == Kind::Linear ? std::numeric_limits<double>::infinity()
                              : center + width;
}

std::string TestFunction::name() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Bump: os << "bump(" << center << "," << width << ")"; break;
    case Kind::QuadraticWindow:
      os << "quadratic_window(" << center << "," << width << ")";
      break;
    case Kind::Linear: os << "linear"; break;
  }
  return os.str();
}

TestFunction TestFunction::bump(double center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("bump: width must be positive");
  return {Kind::Bump, center, width};
}

TestFunction TestFunction::quadratic_window(double center, double width) {
  if (!(width > 0.0))
    throw std::invalid_argument("quadratic_window: width must be positive");
  return {Kind::QuadraticWindow, center, width};
}

TestFunction TestFunction::linear() { return {Kind::Linear, 0.0, 1.0}; }

TestFunction TestFunction::parse(const std::string& s) {
  if (s == "linear") return linear();
  const auto open = s.find('(');
  const auto comma = s.find(',', open);
  const auto close = s.find(')', comma);
  if (open == std::string::npos || comma == std::string::npos ||
      close == std::string::npos)
    throw std::invalid_argument("test function: cannot parse '" + s + "'");
  const std::string head = s.substr(0, open);
  const double c = std::stod(s.substr(open + 1, comma - open - 1));
  const double w = std::stod(s.substr(comma + 1, close - comma - 1));
  if (head == "bump") return bump(c, w);
  if (head == "quadratic_window") return quadratic_window(c, w);
  throw std::invalid_argument("test function: unknown family '" + head + "'");
}

std::vector<TestFunction> default_test_functions() {
  return {TestFunction::bump(0.0, 1.5), TestFunction::bump(0.5, 1.0),
          TestFunction::bump(-0.5, 1.0), TestFunction::bump(0.0, 2.5),
          TestFunction::bump(1.0, 2.0)};
}

}  // namespace nlpme
