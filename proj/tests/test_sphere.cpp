#include <doctest.h>

#include <cmath>
#include <random>

#include "revcurv/errors.hpp"
#include "revcurv/sphere.hpp"

using namespace revcurv;

namespace {

const SphericalPoint kX = SphericalPoint::UnitX(), kY = SphericalPoint::UnitY(), kZ = SphericalPoint::UnitZ();

// Triangle with a vertex at the north pole, sides eps and R there and R
// opposite: bisect the opening angle until the far side has length R, then
// read the angle from the tangent vectors.
double measured_cos_angle(double R, double eps) {
  auto at = [](double dist, double az) {
    return SphericalPoint(std::sin(dist) * std::cos(az), std::sin(dist) * std::sin(az), std::cos(dist));
  };
  const SphericalPoint a = at(R, 0);
  double lo = 0, hi = kPi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::acos(std::clamp(a.dot(at(eps, mid)), -1.0, 1.0)) < R ? lo : hi) = mid;
  }
  const SphericalPoint b = at(eps, 0.5 * (lo + hi));
  const SphericalPoint ta = (a - a.dot(kZ) * kZ).normalized(), tb = (b - b.dot(kZ) * kZ).normalized();
  return ta.dot(tb);
}

}  // namespace

TEST_CASE("distances and arcs") {
  CHECK(sph_distance(kX, kX) == 0.0);
  CHECK(sph_distance(kX, SphericalPoint(-kX)) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(sph_distance(kX, kY) == doctest::Approx(kHalfPi).epsilon(1e-15));
  CHECK(sph_distance(kX, (kX + 1e-9 * kY).normalized()) == doctest::Approx(1e-9).epsilon(1e-6));

  CHECK((geodesic_point(kX, kY, 0) - kX).norm() <= 1e-15);
  CHECK((geodesic_point(kX, kY, 1) - kY).norm() <= 1e-15);
  CHECK((geodesic_point(kX, kY, 0.5) - (kX + kY).normalized()).norm() <= 1e-15);
  CHECK_THROWS_AS(geodesic_point(kX, -kX, 0.5), NonUniqueGeodesicError);

  const auto fam = minimizing_geodesics(kZ, -kZ, 8);
  REQUIRE(fam.tangents.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    const SphericalPoint m = fam.point(i, 0.5);
    CHECK(sph_distance(m, kZ) == doctest::Approx(kHalfPi).epsilon(1e-14));
    CHECK(sph_distance(m, SphericalPoint(-kZ)) == doctest::Approx(kHalfPi).epsilon(1e-14));
    for (std::size_t j = 0; j < i; ++j) CHECK(sph_distance(m, fam.point(j, 0.5)) > 0.1);
    CHECK((fam.point(i, 1) + kZ).norm() <= 1e-15);
  }
  CHECK(minimizing_geodesics(kX, kY).tangents.size() == 1);
}

TEST_CASE("angle bound") {
  CHECK(std::abs(lemma_angle_bound(1.0, 1e-7)) <= 1e-6);
  CHECK(std::abs(lemma_angle_bound(kHalfPi - 1e-9, 5e-10)) <= 1e-8);
  CHECK(lemma_angle_bound(kPi / 4, 0.1) == doctest::Approx(measured_cos_angle(kPi / 4, 0.1)).epsilon(1e-10));
  // approaches 0 monotonically as eps shrinks
  double prev = lemma_angle_bound(0.7, 0.5);
  for (double eps = 0.25; eps > 1e-4; eps /= 2) {
    const double v = lemma_angle_bound(0.7, eps);
    CHECK(v < prev);
    CHECK(v > 0);
    prev = v;
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 50; ++i) {
    const double R = 0.05 + 1.4 * u(rng);
    // sides eps, R, R close up only when eps < 2R
    const double eps = std::min(kHalfPi - R, 2 * R) * (0.01 + 0.98 * u(rng));
    CHECK(std::abs(lemma_angle_bound(R, eps) - measured_cos_angle(R, eps)) <= 1e-8);
  }
  CHECK_THROWS_AS(lemma_angle_bound(kHalfPi, 0.1), DomainError);
  CHECK_THROWS_AS(lemma_angle_bound(1.0, 0.6), DomainError);
  CHECK_THROWS_AS(lemma_angle_bound(1.0, 0.0), DomainError);
}

TEST_CASE("region membership and boundary") {
  const auto cap = SphericalRegion::cap(kZ, 0.5);
  CHECK(cap.contains(kZ));
  CHECK(!cap.contains(kX));
  CHECK(cap.margin(kZ) == doctest::Approx(0.5));
  const auto edge = SphericalPoint(std::sin(0.5), 0, std::cos(0.5));
  CHECK(cap.contains(edge));
  CHECK(!SphericalRegion::cap(kZ, 0.5, true).contains(SphericalPoint(std::sin(0.5 + 1e-12), 0, std::cos(0.5 + 1e-12))));

  std::mt19937_64 rng(11);
  for (auto family : {RegionFamily::cap, RegionFamily::cap_intersection, RegionFamily::hemisphere_intersection,
                      RegionFamily::polygon}) {
    const auto g = random_region(family, rng);
    REQUIRE(g.region.boundary().cols() > 0);
    for (Eigen::Index i = 0; i < g.region.boundary().cols(); ++i)
      CHECK(std::abs(g.region.margin(g.region.boundary().col(i))) <= 1e-9);
    for (const auto& x : sample_region(g.region, 200, rng)) CHECK(g.region.contains(x));
  }

  CHECK_THROWS_AS(SphericalRegion::cap(kZ, 0), PreconditionError);
  CHECK_THROWS_AS(SphericalRegion::polygon({kX, kY}), PreconditionError);
  // clockwise
  CHECK_THROWS_AS(SphericalRegion::polygon({kX, SphericalPoint(0, -1, 0.2), SphericalPoint(-1, 0, 0.2)}),
                  PreconditionError);
}

TEST_CASE("region spec round trip") {
  for (std::string spec : {"cap:0,0,2,0.5", "inter:cap:0,0,1,1;cap:1,0,1,1", "open:cap:1,0,0,1.5707963267948966",
                           "poly:1,0,0.5;0,1,0.5;-1,0,0.5;0,-1,0.5", "union:cap:1,0,0,0.3;cap:-1,0,0,0.3"}) {
    const auto r = parse_region(spec);
    const auto again = parse_region(r.describe());
    CHECK(again.describe() == r.describe());
    CHECK(again.kind() == r.kind());
    CHECK(again.open() == r.open());
  }
  CHECK(parse_region("cap:0,0,2,0.5").caps()[0].center == kZ);
  for (std::string bad : {"cap:1,2,3", "square:1", "poly:1,0,0;0,1,0", "inter:cap:0,0,1,x", "cap:0,0,0,1"})
    CHECK_THROWS_AS(parse_region(bad), PreconditionError);
}

TEST_CASE("region distance") {
  const auto cap = SphericalRegion::cap(kZ, 0.5);
  for (double d : {0.6, 1.0, 2.0, 3.0}) {
    const SphericalPoint z(std::sin(d), 0, std::cos(d));
    CHECK(cap.distance(z) == doctest::Approx(d - 0.5).epsilon(1e-12));
  }
  // nearest point of a square is a vertex
  const auto sq = parse_region("poly:1,0,1;0,1,1;-1,0,1;0,-1,1");
  const SphericalPoint v = SphericalPoint(1, 0, 1).normalized();
  const SphericalPoint far = SphericalPoint(1, 0, -0.3).normalized();
  CHECK(sq.distance(far) == doctest::Approx(sph_distance(far, v)).epsilon(1e-12));
}

TEST_CASE("farthest distance") {
  for (double r : {0.3, 0.6, 1.0, 1.4}) {
    const auto fp = farthest_distance(SphericalRegion::cap(kZ, r), 2048);
    CHECK(std::abs(fp.R - (kPi - r)) <= 2 * fp.spacing);
    CHECK(std::abs(fp.R - (kPi - r)) <= 1e-9);
    CHECK((fp.argmax + kZ).norm() <= 1e-6);
  }
  const auto pi4 = farthest_distance(SphericalRegion::cap(kY, kPi / 4), 1024);
  CHECK(pi4.R == doctest::Approx(3 * kPi / 4).epsilon(1e-10));
  CHECK(farthest_distance(SphericalRegion::cap(kZ, kPi), 256).R == 0.0);
  CHECK(farthest_distance(SphericalRegion::cap(kX, kHalfPi), 1024).R == doctest::Approx(kHalfPi).epsilon(1e-10));

  std::mt19937_64 rng(5);
  for (auto family : {RegionFamily::cap_intersection, RegionFamily::polygon}) {
    const auto g = random_region(family, rng);
    double prev = 0;
    for (int n : {64, 256, 1024, 4096}) {
      const double R = farthest_distance(g.region, n).R;
      CHECK(R >= prev - 1e-10);
      prev = R;
    }
  }
}

TEST_CASE("convexity verdicts") {
  const auto cap = SphericalRegion::cap(kZ, 0.6);
  const auto s = convexity_check(cap, ConvexityMode::s, 256, 64, 1);
  CHECK(s.passed);
  CHECK(!s.witness);
  CHECK(s.pairs == 256);
  CHECK(s.samples_used >= 256 * 64);

  const auto hemi = SphericalRegion::cap(kZ, kHalfPi);
  const auto hw = convexity_check(hemi, ConvexityMode::w, 256, 64, 1);
  CHECK(hw.passed);
  CHECK(hw.antipodal_pairs > 0);
  const auto hs = convexity_check(hemi, ConvexityMode::s, 256, 64, 1);
  CHECK(!hs.passed);
  REQUIRE(hs.witness);
  CHECK(revalidate(hemi, *hs.witness));
  CHECK(std::abs(hemi.margin(hs.witness->p)) <= 1e-9);
  CHECK(sph_distance(hs.witness->p, hs.witness->q) == doctest::Approx(kPi));
  CHECK(convexity_check(hemi, ConvexityMode::l, 256, 64, 1).passed);

  const auto two = parse_region("union:cap:1,0,0,0.3;cap:-1,0,0.3,0.3");
  const auto uw = convexity_check(two, ConvexityMode::w, 256, 64, 2);
  CHECK(!uw.passed);
  REQUIRE(uw.witness);
  CHECK(revalidate(two, *uw.witness));
  CHECK(uw.witness->p.dot(uw.witness->q) < 0);

  const auto crescent = parse_region("union:cap:0,0,1,0.8;cap:1,0,1,0.8");
  CHECK(!convexity_check(crescent, ConvexityMode::l, 256, 64, 3).passed);
  CHECK_THROWS_AS(convexity_check(cap, ConvexityMode::s, 10, 64), PreconditionError);
}

TEST_CASE("hemisphere certificates") {
  const auto c = hemisphere_certificate(SphericalRegion::cap(kZ, 1.0));
  REQUIRE(c.pole);
  CHECK(c.closed);
  CHECK(c.open);
  CHECK(c.R == doctest::Approx(kPi - 1.0).epsilon(1e-10));
  CHECK(c.validated > 2000);

  const auto h = hemisphere_certificate(SphericalRegion::cap(kZ, kHalfPi));
  REQUIRE(h.pole);
  CHECK(h.closed);
  CHECK(!h.open);

  std::mt19937_64 rng(9);
  for (int i = 0; i < 5; ++i) {
    const auto g = random_region(RegionFamily::hemisphere_intersection, rng);
    const auto cert = hemisphere_certificate(g.region, 2048, 500, i);
    REQUIRE(cert.pole);
    CHECK(cert.closed);
    CHECK(cert.validated >= 500);
  }
  CHECK(!hemisphere_certificate(parse_region("union:cap:1,0,0,0.3;cap:-1,0,0,0.3")).pole);
}
