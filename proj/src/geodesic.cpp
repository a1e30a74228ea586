#include "revcurv/geodesic.hpp"

#include <cmath>
#include <limits>

#include "revcurv/errors.hpp"
#include "revcurv/metric.hpp"

namespace revcurv {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kFlatSlope = 1e-12;

bool inside(const ProfileCurve& p, double t) { return t >= p.start() && t <= p.end(); }

Eigen::Vector4d geodesic_rhs(const ProfileCurve& p, const Eigen::Vector4d& y) {
  if (!inside(p, y[0])) return Eigen::Vector4d::Constant(kNaN);
  const Jet j = p.jet(y[0]);
  if (!(j[0] > 0)) return Eigen::Vector4d::Constant(kNaN);
  return {y[2], y[3], j[0] * j[1] * y[3] * y[3], -2 * j[1] / j[0] * y[2] * y[3]};
}

// Position along a meridian after arclength s. The meridian is unfolded onto a
// circle of length 2L; each pole passage adds pi to theta.
GeodesicState meridian_state(const ProfileCurve& p, const GeodesicState& x0, double s) {
  const double L = p.length();
  const double u0 = x0.dt_ds > 0 ? x0.t - p.start() : 2 * L - (x0.t - p.start());
  const double u = u0 + s;
  if (!p.closed() && std::floor(u / L) != std::floor(u0 / L) && u != L)
    throw IntegrationError("meridian leaves the open profile at s = " + format_number(s));
  const double passages = std::floor(u / L) - std::floor(u0 / L);
  const double w = std::fmod(u, 2 * L);
  GeodesicState x;
  x.theta = x0.theta + kPi * passages;
  if (w <= L) {
    x.t = p.start() + w;
    x.dt_ds = 1;
  } else {
    x.t = p.start() + 2 * L - w;
    x.dt_ds = -1;
  }
  return x;
}

TrajectorySample make_sample(const ProfileCurve& p, double s, const GeodesicState& x, double c0) {
  return {s, x, std::abs(speed_defect(p, x)), std::abs(clairaut_constant(p, x) - c0)};
}

void check_initial(const ProfileCurve& p, const GeodesicState& x, double length) {
  if (!(length > 0)) throw PreconditionError("geodesic length must be positive");
  if (!inside(p, x.t)) throw PreconditionError("initial t outside the profile domain");
  if (!(std::abs(speed_defect(p, x)) <= 1e-8)) throw PreconditionError("initial state is not unit speed");
}

Trajectory meridian_trajectory(const ProfileCurve& p, const GeodesicState& x0, double length) {
  Trajectory tr;
  tr.initial = x0;
  tr.length = length;
  tr.meridian = true;
  const int n = std::max(1, static_cast<int>(std::ceil(length / 0.01)));
  for (int i = 0; i <= n; ++i) {
    const double s = i == n ? length : length * i / n;
    tr.samples.push_back({s, meridian_state(p, x0, s), 0.0, 0.0});
  }
  tr.stats.accepted = n;
  tr.stats.h_min = tr.stats.h_max = length / n;
  return tr;
}

template <typename Integrate>
Trajectory integrate_geodesic(const ProfileCurve& p, const GeodesicState& x0, double length,
                              Integrate&& run) {
  check_initial(p, x0, length);
  if (x0.dtheta_ds == 0) return meridian_trajectory(p, x0, length);
  Trajectory tr;
  tr.initial = x0;
  tr.length = length;
  tr.clairaut0 = clairaut_constant(p, x0);
  auto rhs = [&](double, const Eigen::Vector4d& y) { return geodesic_rhs(p, y); };
  auto observe = [&](double s, const Eigen::Vector4d& y) {
    const auto x = GeodesicState::from(y);
    if (p.f(x.t) < std::abs(tr.clairaut0) - 1e-8)
      throw IntegrationError("geodesic crossed the Clairaut barrier at s = " + format_number(s));
    tr.samples.push_back(make_sample(p, s, x, tr.clairaut0));
  };
  tr.stats = run(rhs, x0.vec(), observe);
  return tr;
}

// Smallest h in [0, hmax] with g(step(h)) changing sign relative to g(start),
// by bisection on single steps from the left end of a bracket.
template <typename Step, typename G>
double bisect_step(Step&& step, G&& g, double hmax) {
  const double g0 = g(step(0.0));
  double lo = 0, hi = hmax;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(step(mid));
    if (gm == 0) return mid;
    if ((gm > 0) == (g0 > 0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GeodesicState unit_state(const ProfileCurve& profile, double t, double theta, double angle) {
  const double f = profile.f(t);
  const double sn = std::sin(angle);
  if (std::abs(sn) <= 1e-14) return {t, theta, std::cos(angle) > 0 ? 1.0 : -1.0, 0.0};
  return {t, theta, std::cos(angle), sn / f};
}

double speed_defect(const ProfileCurve& profile, const GeodesicState& x) {
  if (x.dtheta_ds == 0) return x.dt_ds * x.dt_ds - 1;
  const double f = profile.f(x.t);
  return x.dt_ds * x.dt_ds + f * f * x.dtheta_ds * x.dtheta_ds - 1;
}

double clairaut_constant(const ProfileCurve& profile, const GeodesicState& x) {
  if (x.dtheta_ds == 0) return 0;
  const double f = profile.f(x.t);
  return f * f * x.dtheta_ds;
}

Trajectory geodesic_flow(const ProfileCurve& profile, const GeodesicState& initial, double length,
                         double step_tol) {
  if (!(step_tol > 0)) throw PreconditionError("step_tol must be positive");
  auto tr = integrate_geodesic(profile, initial, length, [&](auto& rhs, Eigen::Vector4d y, auto& obs) {
    return integrate_adaptive(rhs, 0.0, length, y, step_tol, obs);
  });
  tr.step_tol = step_tol;
  return tr;
}

Trajectory geodesic_flow_fixed(const ProfileCurve& profile, const GeodesicState& initial, double length,
                               int steps) {
  if (steps < 1) throw PreconditionError("need at least one step");
  return integrate_geodesic(profile, initial, length, [&](auto& rhs, Eigen::Vector4d y, auto& obs) {
    integrate_fixed(rhs, 0.0, length, y, steps, obs);
    StepStats st;
    st.accepted = steps;
    st.h_min = st.h_max = length / steps;
    return st;
  });
}

double clairaut_drift(const Trajectory& traj) {
  if (traj.samples.empty()) throw PreconditionError("empty trajectory");
  double m = 0;
  for (const auto& s : traj.samples) m = std::max(m, s.clairaut_drift);
  return m;
}

double speed_drift(const Trajectory& traj) {
  if (traj.samples.empty()) throw PreconditionError("empty trajectory");
  double m = 0;
  for (const auto& s : traj.samples) m = std::max(m, s.speed_drift);
  return m;
}

ParallelSearch geodesic_parallels(const ProfileCurve& profile) {
  const auto smp = profile.samples();
  const std::size_t n = smp.size();
  auto flat = [&](std::size_t i) { return std::abs(smp[i].fp) <= kFlatSlope; };
  ParallelSearch out;
  auto add = [&](double t, bool degenerate) {
    out.parallels.push_back({t, 2 * kPi * profile.f(t), degenerate});
    out.degenerate = out.degenerate || degenerate;
  };

  for (std::size_t i = 0; i + 1 < n;) {
    if (i > 0 && flat(i)) {
      std::size_t j = i;
      while (j + 2 < n && flat(j + 1)) ++j;
      add(0.5 * (smp[i].t + smp[j].t), smp[j].t - smp[i].t > 0.1 * profile.length());
      i = j + 1;
      continue;
    }
    const bool opposite = (smp[i].fp > 0) != (smp[i + 1].fp > 0);
    if (!flat(i) && !flat(i + 1) && opposite) {
      double lo = smp[i].t, hi = smp[i + 1].t;
      const bool lo_positive = smp[i].fp > 0;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double d = profile.f(mid, 1);
        if (d == 0) lo = hi = mid;
        else if ((d > 0) == lo_positive) lo = mid;
        else hi = mid;
      }
      add(0.5 * (lo + hi), false);
    }
    ++i;
  }
  return out;
}

double parallel_closure_length(const ProfileCurve& profile, double t, double step_tol) {
  const double f0 = profile.f(t);
  const GeodesicState x0{t, 0, 0, 1 / f0};
  auto rhs = [&](double, const Eigen::Vector4d& y) { return geodesic_rhs(profile, y); };
  std::vector<std::pair<double, Eigen::Vector4d>> path;
  integrate_adaptive(rhs, 0.0, 1.05 * 2 * kPi * f0, x0.vec(), step_tol,
                     [&](double s, const Eigen::Vector4d& y) { path.emplace_back(s, y); });
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (path[k].second[1] < 2 * kPi) continue;
    const auto& [s0, y0] = path[k - 1];
    const double h = bisect_step([&](double h) { return dopri_step(rhs, s0, y0, h); },
                                 [](const Eigen::Vector4d& y) { return y[1] - 2 * kPi; },
                                 path[k].first - s0);
    return s0 + h;
  }
  throw IntegrationError("parallel did not close within 1.05 of its circumference");
}

std::string to_string(ClosedGeodesicKind kind) {
  switch (kind) {
    case ClosedGeodesicKind::parallel: return "parallel";
    case ClosedGeodesicKind::meridian_loop: return "meridian_loop";
    case ClosedGeodesicKind::tie: return "parallel=meridian_loop";
  }
  return "?";
}

ClosedGeodesic shortest_closed_geodesic(const ProfileCurve& profile) {
  if (!profile.closed()) throw PreconditionError("closed geodesic search needs a closed profile");
  const double loop = 2 * profile.length();
  ClosedGeodesic best{loop, ClosedGeodesicKind::meridian_loop, kNaN};
  for (const auto& par : geodesic_parallels(profile).parallels) {
    if (std::abs(par.length - loop) <= 1e-9 * loop && best.kind == ClosedGeodesicKind::meridian_loop &&
        best.length == loop)
      best = {par.length, ClosedGeodesicKind::tie, par.t};
    else if (par.length < best.length - 1e-9 * loop)
      best = {par.length, ClosedGeodesicKind::parallel, par.t};
  }
  return best;
}

JacobiSolution first_conjugate_time(const ProfileCurve& profile, const Trajectory& traj) {
  using Vec6 = Eigen::Matrix<double, 6, 1>;
  JacobiSolution out;
  out.searched = traj.length;
  std::vector<std::pair<double, Vec6>> path;
  auto observe = [&](double s, const Vec6& y) {
    path.emplace_back(s, y);
    out.samples.push_back({s, y[4], y[5]});
  };

  std::function<Vec6(double, const Vec6&)> rhs;
  Vec6 y0 = Vec6::Zero();
  y0[5] = 1;
  if (traj.meridian) {
    rhs = [&](double s, const Vec6& y) {
      const double t = meridian_state(profile, traj.initial, s).t;
      Vec6 d = Vec6::Zero();
      d[4] = y[5];
      d[5] = -curvature_or_limit(profile, t) * y[4];
      return d;
    };
  } else {
    y0.head<4>() = traj.initial.vec();
    rhs = [&](double, const Vec6& y) {
      Vec6 d;
      d.head<4>() = geodesic_rhs(profile, y.head<4>());
      if (!d.allFinite()) return Vec6::Constant(kNaN).eval();
      d[4] = y[5];
      d[5] = -curvature_or_limit(profile, y[0]) * y[4];
      return d;
    };
  }
  integrate_adaptive(rhs, 0.0, traj.length, y0, traj.step_tol, observe);

  for (std::size_t k = 1; k < path.size(); ++k) {
    const double yk = path[k].second[4];
    if (yk > 0) continue;
    if (yk == 0) {
      out.first_zero = path[k].first;
      return out;
    }
    const auto& [s0, ys] = path[k - 1];
    const double h = bisect_step([&](double h) { return dopri_step(rhs, s0, ys, h); },
                                 [](const Vec6& y) { return y[4]; }, path[k].first - s0);
    out.first_zero = s0 + h;
    return out;
  }
  out.inconclusive = true;
  return out;
}

}  // namespace revcurv
