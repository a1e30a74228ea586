#include "revcurv/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "revcurv/errors.hpp"

namespace revcurv {
namespace {

// log of the smallest exp(h) worth computing; exp(-700) is already subnormal
// territory and the polynomial prefactor cannot rescue it.
constexpr double kMinExponent = -700.0;

// d^n/du^n of h(u) = -1/(1-u^2) = -(1/(1-u) + 1/(1+u))/2.
double exponent_derivative(double u, int n) {
  double fact = 1, a = 1 / (1 - u), b = 1 / (1 + u);
  const double a1 = a, b1 = b;
  for (int i = 1; i <= n; ++i) {
    fact *= i;
    a *= a1;
    b *= b1;
  }
  return -0.5 * fact * (a + ((n % 2) ? -b : b));
}

// Raw bump exp(-1/(1-u^2)) and its u-derivatives via Faa di Bruno.
double raw_bump(double u, int k) {
  if (std::abs(u) >= 1) return 0;
  const double h = -1 / (1 - u * u);
  if (h < kMinExponent) return 0;
  const double e = std::exp(h);
  if (k == 0) return e;
  const double h1 = exponent_derivative(u, 1);
  if (k == 1) return e * h1;
  const double h2 = exponent_derivative(u, 2);
  if (k == 2) return e * (h2 + h1 * h1);
  const double h3 = exponent_derivative(u, 3);
  if (k == 3) return e * (h3 + 3 * h1 * h2 + h1 * h1 * h1);
  const double h4 = exponent_derivative(u, 4);
  return e * (h4 + 4 * h1 * h3 + 3 * h2 * h2 + 6 * h1 * h1 * h2 + h1 * h1 * h1 * h1);
}

std::vector<double> default_panels(double delta) {
  std::vector<double> b(2 * kKernelPanels + 1);
  for (int i = 0; i <= 2 * kKernelPanels; ++i)
    b[i] = -delta + delta * static_cast<double>(i) / kKernelPanels;
  b.back() = delta;
  return b;
}

// \int_{-1}^{1} exp(-1/(1-u^2)) du
double raw_bump_mass() {
  static const double mass = [] {
    const GaussLegendred rule(128);
    const auto b = default_panels(1.0);
    return rule.integrate([](double u) { return raw_bump(u, 0); }, std::span<const double>(b));
  }();
  return mass;
}

// \int_{-1}^{1} cos(delta u) exp(-1/(1-u^2)) du
double raw_cos_moment(double delta, int order) {
  const GaussLegendred rule(order);
  const auto b = default_panels(1.0);
  return rule.integrate([delta](double u) { return std::cos(delta * u) * raw_bump(u, 0); },
                        std::span<const double>(b));
}

void check_delta(double delta) {
  if (!(delta > 0 && delta < std::numbers::pi / 4))
    throw DomainError("kernel half-width must satisfy 0 < delta < pi/4, got " + std::to_string(delta));
}

}  // namespace

double unit_bump(double x, double delta, int derivative_order) {
  if (derivative_order < 0 || derivative_order > kMaxKernelOrder)
    throw DomainError("bump derivative order " + std::to_string(derivative_order) + " unsupported (max 4)");
  if (std::abs(x) >= delta) return 0;
  return raw_bump(x / delta, derivative_order) / (std::pow(delta, derivative_order + 1) * raw_bump_mass());
}

double kernel_normalization(double delta, int quad_order) {
  check_delta(delta);
  if (quad_order < 1) throw PreconditionError("quad_order must be positive");
  const double alpha = raw_bump_mass() / raw_cos_moment(delta, quad_order);
  const double alpha_check = raw_bump_mass() / raw_cos_moment(delta, 2 * quad_order);
  const double residual = std::abs(alpha - alpha_check);
  if (!(residual <= 1e-10)) throw NumericError("kernel normalization did not converge", residual);
  return alpha;
}

SmoothingKernel::SmoothingKernel(double delta, int quad_order)
    : delta_(delta), alpha0_(kernel_normalization(delta, quad_order)), rule_(quad_order) {}

double SmoothingKernel::operator()(double x, int derivative_order) const {
  return alpha0_ * unit_bump(x, delta_, derivative_order);
}

std::array<double, 3> SmoothingKernel::low_jet(double x) const {
  if (std::abs(x) >= delta_) return {0, 0, 0};
  const double u = x / delta_;
  const double h = -1 / (1 - u * u);
  if (h < kMinExponent) return {0, 0, 0};
  const double scale = alpha0_ * std::exp(h) / (delta_ * raw_bump_mass());
  const double h1 = exponent_derivative(u, 1), h2 = exponent_derivative(u, 2);
  return {scale, scale * h1 / delta_, scale * (h2 + h1 * h1) / (delta_ * delta_)};
}

std::vector<double> SmoothingKernel::panels(std::initializer_list<double> cuts) const {
  auto b = default_panels(delta_);
  for (double c : cuts)
    if (c > -delta_ && c < delta_) b.push_back(c);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double bump_kernel_value(double x, const SmoothingKernel& kernel, int derivative_order) {
  return kernel(x, derivative_order);
}

}  // namespace revcurv
