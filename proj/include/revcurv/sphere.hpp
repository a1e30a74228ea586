#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "revcurv/profile.hpp"

namespace revcurv {

using SphericalPoint = Eigen::Vector3d;

inline constexpr double kAntipodalTol = 1e-9;
inline constexpr double kMembershipTol = 1e-9;
inline constexpr int kFamilyDirections = 64;

/// Angle between two unit vectors, in [0, pi].
template <typename A, typename B>
double sph_distance(const Eigen::MatrixBase<A>& p, const Eigen::MatrixBase<B>& q) {
  return std::atan2(p.cross(q).norm(), p.dot(q));
}

/// Some unit vector orthogonal to p.
template <typename A>
SphericalPoint orthogonal(const Eigen::MatrixBase<A>& p) {
  return p.unitOrthogonal();
}

/// Point at fraction s along the minimizing arc from p to q. Throws
/// NonUniqueGeodesicError for (nearly) antipodal endpoints.
SphericalPoint geodesic_point(const SphericalPoint& p, const SphericalPoint& q, double s);

/// All minimizing arcs from p to q: one, or `directions` evenly spaced ones when
/// q is within kAntipodalTol of -p.
struct GeodesicFamily {
  SphericalPoint p;
  double length;
  std::vector<SphericalPoint> tangents;  ///< unit initial directions at p

  SphericalPoint point(std::size_t k, double s) const {
    return std::cos(s * length) * p + std::sin(s * length) * tangents[k];
  }
  bool antipodal() const { return tangents.size() > 1; }
};

GeodesicFamily minimizing_geodesics(const SphericalPoint& p, const SphericalPoint& q,
                                    int directions = kFamilyDirections);

/// (cos R - cos eps cos R) / (sin eps sin R), the cosine of the angle opposite
/// a side R in the triangle with sides eps, R, R. Requires 0 < R < pi/2 and
/// 0 < eps < pi/2 - R.
double lemma_angle_bound(double R, double eps);

/// Convexity radius of the round unit sphere.
inline double convexity_radius(const SphericalPoint&) { return kHalfPi; }

struct Cap {
  SphericalPoint center;
  double radius;
};

enum class RegionKind { cap, intersection, polygon, union_of_caps };

/// Caps, finite intersections of caps, convex geodesic polygons and unions of
/// caps. Closed unless `open` is set.
class SphericalRegion {
 public:
  static SphericalRegion cap(const SphericalPoint& center, double radius, bool open = false);
  static SphericalRegion intersection(std::vector<Cap> caps, bool open = false);
  /// Vertices in counter-clockwise order seen from outside the sphere.
  static SphericalRegion polygon(std::vector<SphericalPoint> vertices, bool open = false);
  static SphericalRegion union_of(std::vector<Cap> caps, bool open = false);

  RegionKind kind() const { return kind_; }
  bool open() const { return open_; }
  /// Constraint caps (polygon edges are hemispheres).
  const std::vector<Cap>& caps() const { return caps_; }
  const std::vector<SphericalPoint>& vertices() const { return vertices_; }

  /// Signed angular distance to the boundary, positive inside. Exact for caps
  /// and unions; for intersections a lower bound on the true distance outside.
  double margin(const SphericalPoint& x) const;
  /// margin >= 0, or > 0 when open.
  bool contains(const SphericalPoint& x) const;

  /// Points on the topological boundary, about `boundary_resolution` per circle.
  const Eigen::Matrix3Xd& boundary() const { return boundary_; }

  /// d(z, region): 0 inside, otherwise the nearest boundary sample refined along
  /// its circle by golden-section search.
  double distance(const SphericalPoint& z) const;

  /// A cap containing the region (radius pi when no better one is known).
  Cap bounding_cap() const;

  /// Region specification string accepted by parse_region.
  std::string describe() const;

  static constexpr int boundary_resolution = 1024;

 private:
  struct Piece {
    SphericalPoint axis, e1, e2;
    double rho, phi0, phi1;
    bool periodic;
    SphericalPoint at(double phi) const {
      return std::cos(rho) * axis + std::sin(rho) * (std::cos(phi) * e1 + std::sin(phi) * e2);
    }
  };

  SphericalRegion() = default;
  void build_boundary();
  bool on_boundary(const SphericalPoint& x, std::size_t piece) const;

  RegionKind kind_ = RegionKind::cap;
  bool open_ = false;
  std::vector<Cap> caps_;
  std::vector<SphericalPoint> vertices_;
  std::vector<Piece> pieces_;
  Eigen::Matrix3Xd boundary_;
  std::vector<std::pair<std::size_t, double>> boundary_param_;
  std::vector<double> piece_step_;
};

/// cap:cx,cy,cz,r | inter:cap:...;cap:... | poly:x,y,z;x,y,z;... |
/// union:cap:...;cap:... with an optional leading "open:". Vectors are
/// normalized. Throws PreconditionError on malformed input.
SphericalRegion parse_region(const std::string& spec);

/// Uniform point in a cap.
SphericalPoint sample_cap(const Cap& cap, std::mt19937_64& rng);

/// Uniform samples from the region by rejection from its bounding cap. Throws
/// PreconditionError when the region looks empty.
std::vector<SphericalPoint> sample_region(const SphericalRegion& region, int n, std::mt19937_64& rng);

/// Points of the spherical Fibonacci lattice with n points.
Eigen::Matrix3Xd fibonacci_lattice(int n);

struct FarthestPoint {
  double R;
  SphericalPoint argmax;
  double spacing;  ///< sqrt(4 pi / resolution)
};

/// sup_z d(z, region): maximum over a Fibonacci lattice, refined by pattern
/// search from the best lattice point down to 1e-12 steps.
FarthestPoint farthest_distance(const SphericalRegion& region, int resolution);

enum class ConvexityMode { w, s, l };
std::string to_string(ConvexityMode mode);

struct ConvexityWitness {
  SphericalPoint p, q;
  SphericalPoint tangent;  ///< initial direction of the offending arc at p
  double length;           ///< arc length
  double s;                ///< fraction along the arc
  SphericalPoint point;
  double margin;           ///< region margin at point (< -kMembershipTol)
};

struct ConvexityVerdict {
  ConvexityMode mode;
  bool passed;
  std::optional<ConvexityWitness> witness;
  int pairs = 0;
  int antipodal_pairs = 0;
  int arc_samples = 0;
  long samples_used = 0;
};

/// Sampled convexity test. Mode w needs one minimizing arc inside the region,
/// mode s every minimizing arc (antipodal pairs enumerate their whole family),
/// mode l repeats the s test on pairs within pi/4 of sampled boundary points.
/// A pass only certifies the sampling density recorded in the verdict.
ConvexityVerdict convexity_check(const SphericalRegion& region, ConvexityMode mode, int pair_samples,
                                 int arc_samples, std::uint64_t seed = 0);

/// Recomputes the witness point from (p, tangent, length, s) and confirms it
/// lies outside the region by more than kMembershipTol.
bool revalidate(const SphericalRegion& region, const ConvexityWitness& witness);

struct HemisphereCertificate {
  std::optional<SphericalPoint> pole;  ///< region lies in {x : d(x, pole) >= pi/2}
  bool closed = false;
  bool open = false;  ///< strict: d(x, pole) > pi/2 on the region
  double R = 0;
  int validated = 0;  ///< region samples checked against the certificate
};

HemisphereCertificate hemisphere_certificate(const SphericalRegion& region, int resolution = 4096,
                                             int validation_samples = 2000, std::uint64_t seed = 0);

enum class RegionFamily { cap, hemisphere, cap_intersection, hemisphere_intersection, polygon };

struct GeneratedRegion {
  SphericalRegion region;
  RegionFamily family;
  bool s_convex;  ///< known by construction to lie in an open hemisphere
};

/// Random closed convex region of the given family.
GeneratedRegion random_region(RegionFamily family, std::mt19937_64& rng);

}  // namespace revcurv
