#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "revcurv/ode.hpp"
#include "revcurv/profile.hpp"

namespace revcurv {

inline constexpr double kDefaultStepTol = 1e-10;

struct GeodesicState {
  double t = 0;
  double theta = 0;
  double dt_ds = 0;
  double dtheta_ds = 0;

  Eigen::Vector4d vec() const { return {t, theta, dt_ds, dtheta_ds}; }
  static GeodesicState from(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
};

/// Unit-speed state at (t, theta) leaving at `angle` from the meridian direction
/// of increasing t. Angles within 1e-14 of a meridian give an exact meridian.
GeodesicState unit_state(const ProfileCurve& profile, double t, double theta, double angle);

/// dt_ds^2 + f^2 dtheta_ds^2 - 1
double speed_defect(const ProfileCurve& profile, const GeodesicState& x);

/// f(t)^2 dtheta_ds
double clairaut_constant(const ProfileCurve& profile, const GeodesicState& x);

struct TrajectorySample {
  double s;
  GeodesicState state;
  double speed_drift;     ///< |unit-speed defect|
  double clairaut_drift;  ///< |f^2 theta' - c0|
};

struct Trajectory {
  GeodesicState initial;
  double length = 0;
  double step_tol = kDefaultStepTol;
  /// theta' == 0: integrated in closed form along the meridian, passing the
  /// poles with theta += pi.
  bool meridian = false;
  double clairaut0 = 0;
  StepStats stats;
  std::vector<TrajectorySample> samples;
};

/// Integrates t'' = f f' theta'^2, theta'' = -2 (f'/f) t' theta' over arclength
/// `length`. Throws PreconditionError unless `initial` has unit speed to 1e-8,
/// IntegrationError if the step underflows or the path leaves the Clairaut band
/// f >= |c|.
Trajectory geodesic_flow(const ProfileCurve& profile, const GeodesicState& initial, double length,
                         double step_tol = kDefaultStepTol);

/// Same equations with `steps` equal steps; used to check the integration order.
Trajectory geodesic_flow_fixed(const ProfileCurve& profile, const GeodesicState& initial, double length,
                               int steps);

/// max |f^2 theta' - c0| over the samples.
double clairaut_drift(const Trajectory& traj);

/// max |dt_ds^2 + f^2 dtheta_ds^2 - 1| over the samples.
double speed_drift(const Trajectory& traj);

struct ParallelGeodesic {
  double t;
  double length;     ///< 2 pi f(t)
  bool degenerate;   ///< centre of a run of f' == 0 spanning over 10% of the domain
};

struct ParallelSearch {
  std::vector<ParallelGeodesic> parallels;
  bool degenerate = false;  ///< some parallel is degenerate: a whole family of geodesics
};

/// Roots of f' in the open domain: sign changes of the sampled f' refined by
/// bisection to 1e-12, runs of |f'| <= 1e-12 merged to their centre.
ParallelSearch geodesic_parallels(const ProfileCurve& profile);

/// Arclength after which the parallel through t (f'(t) = 0) returns to theta = 2 pi,
/// found by integrating the geodesic equations and locating the crossing.
double parallel_closure_length(const ProfileCurve& profile, double t, double step_tol = kDefaultStepTol);

enum class ClosedGeodesicKind { parallel, meridian_loop, tie };
std::string to_string(ClosedGeodesicKind kind);

struct ClosedGeodesic {
  double length;
  ClosedGeodesicKind kind;
  double t;  ///< parameter of the winning parallel (NaN for the meridian loop)
};

/// Minimum over parallel geodesics and the meridian loop (twice the profile
/// length). Throws PreconditionError unless the profile is closed.
ClosedGeodesic shortest_closed_geodesic(const ProfileCurve& profile);

struct JacobiSample {
  double s, y, yp;
};

struct JacobiSolution {
  std::vector<JacobiSample> samples;
  std::optional<double> first_zero;
  /// No zero up to `searched`; a conjugate point may lie beyond.
  bool inconclusive = false;
  double searched = 0;
};

/// Solves y'' + K(gamma(s)) y = 0, y(0) = 0, y'(0) = 1, integrating the geodesic
/// alongside so that K is evaluated at the current t. The first positive zero is
/// bracketed by a sign change and bisected to 1e-12.
JacobiSolution first_conjugate_time(const ProfileCurve& profile, const Trajectory& traj);

}  // namespace revcurv
