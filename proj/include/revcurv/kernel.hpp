#pragma once

#include <array>
#include <vector>

#include "revcurv/quadrature.hpp"

namespace revcurv {

/// Highest kernel derivative that bump_kernel_value evaluates.
inline constexpr int kMaxKernelOrder = 4;

/// Panels per half-width used for every integral against the kernel.
inline constexpr int kKernelPanels = 2;

/// Unit-mass standard bump exp(-1/(1-(x/delta)^2)) on (-delta, delta) and its
/// derivatives. Exactly zero on |x| >= delta.
double unit_bump(double x, double delta, int derivative_order = 0);

/// alpha0 = ( \int cos(y) phi0(y) dy )^{-1} for the unit-mass bump phi0.
/// Throws NumericError when the doubled-order rule disagrees by more than 1e-10.
double kernel_normalization(double delta, int quad_order);

/// phi = alpha0 * phi0 on [-delta, delta]; normalized so that
/// \int sin(pi/2 - y) phi(y) dy = 1.
class SmoothingKernel {
 public:
  SmoothingKernel(double delta, int quad_order);

  double delta() const { return delta_; }
  double alpha0() const { return alpha0_; }
  const GaussLegendred& rule() const { return rule_; }

  /// phi^(k)(x)
  double operator()(double x, int derivative_order = 0) const;

  /// (phi, phi', phi'') at x, sharing one exponential.
  std::array<double, 3> low_jet(double x) const;

  /// Panel boundaries partitioning [-delta, delta]; extra cut points inside the
  /// support are merged in sorted order.
  std::vector<double> panels(std::initializer_list<double> cuts = {}) const;

  /// \int_{-delta}^{delta} g(y) phi^(k)(y) dy over the default panels.
  template <typename G>
  double integrate(G&& g, int derivative_order = 0) const {
    const auto breaks = panels();
    return rule_.integrate([&](double y) { return g(y) * (*this)(y, derivative_order); },
                           std::span<const double>(breaks));
  }

 private:
  double delta_;
  double alpha0_;
  GaussLegendred rule_;
};

/// phi^(k)(x). Throws DomainError for k > kMaxKernelOrder.
double bump_kernel_value(double x, const SmoothingKernel& kernel, int derivative_order = 0);

}  // namespace revcurv
