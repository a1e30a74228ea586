#include <doctest.h>

#include <cmath>

#include "revcurv/errors.hpp"
#include "revcurv/metric.hpp"

using namespace revcurv;

namespace {

const ProfileCurve& barbell() {
  static const ProfileCurve p = build_profile(ConstructionParams{});
  return p;
}

}  // namespace

TEST_CASE("curvature on the round baseline") {
  const auto p = round_profile();
  for (double t : {-1.5, -0.3, 0.0, 1.2}) CHECK(gauss_curvature(p, t) == 1.0);
  const auto ext = curvature_extrema(p, 512);
  CHECK(ext.k_max == 1.0);
  CHECK(ext.k_min == 1.0);
  CHECK_THROWS_AS(gauss_curvature(p, kHalfPi), PoleError);
  CHECK_THROWS_AS(gauss_curvature(p, 2.0), DomainError);
}

TEST_CASE("barbell curvature values") {
  const auto& p = barbell();
  CHECK(gauss_curvature(p, -kPi / 4) == 1.0);
  CHECK(gauss_curvature(p, kPi + kPi / 4) == 1.0);
  CHECK(std::abs(gauss_curvature(p, kHalfPi)) <= 1e-6);
  CHECK_THROWS_AS(gauss_curvature(p, -kHalfPi), PoleError);
  CHECK_THROWS_AS(gauss_curvature(p, 3 * kHalfPi), PoleError);
  // mirror symmetry
  for (double t : {0.3, 0.9, 1.4})
    CHECK(gauss_curvature(p, kPi - t) == doctest::Approx(gauss_curvature(p, t)).epsilon(1e-12));
}

TEST_CASE("curvature field invariants") {
  const auto& p = barbell();
  const auto field = curvature_field(p);
  REQUIRE(field.k.size() == p.samples().size());
  int unity = 0;
  for (std::size_t i = 0; i < field.k.size(); ++i) {
    CHECK(field.k[i] <= 1 + 1e-9);
    if (field.exact_unity[i]) {
      CHECK(field.k[i] == 1.0);
      ++unity;
    }
  }
  CHECK(unity > 0);
}

TEST_CASE("curvature agrees with finite differences of f") {
  const auto& p = barbell();
  const double h = 1e-3;
  for (double t = -1.4; t < 4.6; t += 0.0731) {
    const double fm2 = p.f(t - 2 * h), fm = p.f(t - h), f0 = p.f(t), fp = p.f(t + h), fp2 = p.f(t + 2 * h);
    const double fpp = (-fp2 + 16 * fp - 30 * f0 + 16 * fm - fm2) / (12 * h * h);
    CHECK(std::abs(gauss_curvature(p, t) + fpp / f0) <= 2e-5);
  }
}

TEST_CASE("barbell curvature extrema") {
  const auto& p = barbell();
  const auto ext = curvature_extrema(p, 4096);
  CHECK(ext.k_max <= 1 + 1e-9);
  CHECK(ext.k_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.unperturbed(ext.t_at_max));
  CHECK(ext.k_min < -1e-3);
  CHECK(ext.k_min == doctest::Approx(-0.5528400592598226).epsilon(1e-8));
  CHECK(ext.t_at_min > 0.1);
  CHECK(ext.t_at_min < kPi - 0.1);
  // refinement never does worse than the grid
  const double h = p.length() / 4096;
  for (int i = 1; i < 4096; ++i) CHECK(gauss_curvature(p, p.start() + i * h) >= ext.k_min - 1e-14);
  CHECK_THROWS_AS(curvature_extrema(p, 100), PreconditionError);
}

TEST_CASE("surface area") {
  CHECK(surface_area(round_profile()) == doctest::Approx(4 * kPi).epsilon(1e-12));
  CHECK(surface_area(cylinder_profile(0.7, 3.0, 64)) == doctest::Approx(2 * kPi * 0.7 * 3.0).epsilon(1e-13));
  const double a = surface_area(barbell());
  CHECK(a > 4 * kPi);
  // each half is a unit hemisphere plus eps
  const auto& pert = *barbell().perturbation();
  GaussLegendred rule(32);
  std::vector<double> cuts;
  for (int i = 0; i <= 64; ++i) cuts.push_back(-kHalfPi + i * kPi / 64);
  const double eps_mass = rule.integrate([&](double t) { return pert.jet(t)[0]; }, std::span<const double>(cuts));
  CHECK(a == doctest::Approx(8 * kPi + 4 * kPi * eps_mass).epsilon(1e-9));
}

TEST_CASE("total curvature") {
  const auto round = total_curvature(round_profile());
  CHECK(std::abs(round.quadrature - 4 * kPi) <= 1e-6);
  CHECK(std::abs(round.telescoped - 4 * kPi) <= 1e-12);

  const auto bar = total_curvature(barbell());
  CHECK(std::abs(bar.quadrature - 4 * kPi) <= 1e-6);
  CHECK(std::abs(bar.quadrature - bar.telescoped) <= 1e-6);

  const auto cap = cap_profile();
  const auto half = total_curvature(cap);
  CHECK(half.telescoped == doctest::Approx(2 * kPi * (1 - cap.f(cap.end(), 1))).epsilon(1e-14));
  CHECK(half.quadrature == doctest::Approx(2 * kPi).epsilon(1e-10));
}

TEST_CASE("minimal sphere bound") {
  const auto round = minimal_sphere_bound_check(round_profile());
  CHECK(round.holds);
  CHECK(std::abs(round.margin) <= 1e-8);

  const auto bar = minimal_sphere_bound_check(barbell());
  CHECK(bar.holds);
  CHECK(bar.margin > 0);
  CHECK(bar.k_max == doctest::Approx(1.0));

  CHECK_THROWS_AS(minimal_sphere_bound_check(cylinder_profile(1, 2, 64)), PreconditionError);
}
