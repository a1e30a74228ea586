#include <doctest.h>

#include <cmath>
#include <vector>

#include "revcurv/quadrature.hpp"

using revcurv::GaussLegendred;

TEST_CASE("gauss-legendre rule is exact for polynomials of degree 2n-1") {
  for (int n : {1, 2, 3, 5, 16, 64}) {
    const GaussLegendred rule(n);
    CHECK(rule.weights().sum() == doctest::Approx(2.0).epsilon(1e-14));
    const int deg = 2 * n - 1;
    const double exact = 1.0 / (deg + 1);  // \int_0^1 x^deg
    CHECK(rule.integrate([deg](double x) { return std::pow(x, deg); }, 0.0, 1.0) ==
          doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("nodes are symmetric and sorted") {
  const GaussLegendred rule(64);
  for (int i = 0; i < 64; ++i) {
    CHECK(rule.nodes()[i] == -rule.nodes()[63 - i]);
    if (i > 0) CHECK(rule.nodes()[i] > rule.nodes()[i - 1]);
  }
}

TEST_CASE("composite integration over breakpoints") {
  const GaussLegendred rule(8);
  std::vector<double> breaks{0.0, 0.5, 0.5, 2.0, 3.0};
  const double v = rule.integrate([](double x) { return std::exp(x); }, std::span<const double>(breaks));
  CHECK(v == doctest::Approx(std::exp(3.0) - 1).epsilon(1e-14));
  // |x - 1| has a kink at 1: splitting there restores exactness
  std::vector<double> split{0.0, 1.0, 2.0};
  CHECK(GaussLegendred(2).integrate([](double x) { return std::abs(x - 1); }, std::span<const double>(split)) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("order must be positive") { CHECK_THROWS_AS(GaussLegendred(0), std::invalid_argument); }
