#pragma once

#include <vector>

#include "revcurv/profile.hpp"

namespace revcurv {

/// Distance from a pole inside which K takes its analytic limit 1 on round and
/// barbell profiles.
inline constexpr double kPoleBand = 1e-6;

/// K = -f''/f. On round and barbell profiles this is evaluated as
/// (cos - eps'')/(cos + eps) at the reflection-reduced parameter and is exactly
/// 1 wherever eps vanishes. Throws PoleError at a pole, DomainError outside.
double gauss_curvature(const ProfileCurve& profile, double t);

/// gauss_curvature, except that the poles of round and barbell profiles take
/// the limit value 1.
double curvature_or_limit(const ProfileCurve& profile, double t);

struct CurvatureField {
  std::vector<double> t;
  std::vector<double> k;
  std::vector<bool> exact_unity;  ///< sample lies where eps vanishes identically
};

/// K at every profile sample (poles take the limit value on closed profiles).
CurvatureField curvature_field(const ProfileCurve& profile);

struct CurvatureExtrema {
  double k_max, t_at_max;
  double k_min, t_at_min;
};

/// Grid scan with grid_n intervals, refined by golden-section search between
/// the neighbours of each extremal sample. Requires grid_n >= 512.
CurvatureExtrema curvature_extrema(const ProfileCurve& profile, int grid_n);

/// 2 pi \int f dt, composite Gauss-Legendre on the sample intervals. Throws
/// NumericError when doubling the order changes the result by more than 1e-8
/// relative.
double surface_area(const ProfileCurve& profile);

struct TotalCurvature {
  double quadrature;  ///< 2 pi \int K f dt
  double telescoped;  ///< 2 pi (f'(start) - f'(end)), since K f = -f''
};

/// Both evaluations of \int K dA. Throws NumericError when they disagree by more
/// than 1e-6.
TotalCurvature total_curvature(const ProfileCurve& profile);

struct MinimalSphereBound {
  bool holds;     ///< K_max * area >= 4 pi (to 1e-8)
  double margin;  ///< K_max * area - 4 pi
  double k_max;
  double area;
};

/// Gauss-Bonnet forces K >= 4 pi / area somewhere on a closed surface.
/// Throws PreconditionError for profiles that are not closed.
MinimalSphereBound minimal_sphere_bound_check(const ProfileCurve& profile);

}  // namespace revcurv
