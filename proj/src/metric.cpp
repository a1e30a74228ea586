#include "revcurv/metric.hpp"

#include <cmath>
#include <functional>

#include "revcurv/errors.hpp"

namespace revcurv {
namespace {

constexpr double kGolden = 0.6180339887498949;

// Minimizes `f` on [lo, hi] to the given parameter tolerance.
template <typename F>
double golden_section(F&& f, double lo, double hi, double tol = 1e-10) {
  double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

// \int over the profile domain using Gauss-Legendre of the given order on every
// sample interval. Barbell integrands symmetric about pi/2 integrate half.
double integrate_on_grid(const ProfileCurve& profile, int order, bool symmetric,
                         const std::function<double(double)>& f) {
  const GaussLegendred rule(order);
  const auto samples = profile.samples();
  const bool half = symmetric && profile.kind() == ProfileKind::barbell;
  std::size_t last = samples.size() - 1;
  if (half) last /= 2;
  double sum = 0;
  for (std::size_t i = 0; i < last; ++i) sum += rule.integrate(f, samples[i].t, samples[i + 1].t);
  return half ? 2 * sum : sum;
}

bool near_pole(const ProfileCurve& p, double t) {
  return p.closed() && (t - p.start() < kPoleBand || p.end() - t < kPoleBand);
}

}  // namespace

double curvature_or_limit(const ProfileCurve& p, double t) {
  if (p.closed() && p.kind() != ProfileKind::custom && near_pole(p, t)) return 1.0;
  return gauss_curvature(p, t);
}

double gauss_curvature(const ProfileCurve& profile, double t) {
  if (t < profile.start() || t > profile.end())
    throw DomainError("curvature requested outside the profile domain at t = " + format_number(t));
  if (profile.closed() && (t == profile.start() || t == profile.end()))
    throw PoleError("K = -f''/f is 0/0 at the pole t = " + format_number(t));

  switch (profile.kind()) {
    case ProfileKind::round:
      return 1.0;
    case ProfileKind::barbell: {
      if (profile.unperturbed(t) || near_pole(profile, t)) return 1.0;
      const double r = profile.reduce(t);
      const Jet e = profile.perturbation()->jet(r);
      const double c = std::cos(r);
      return (c - e[2]) / (c + e[0]);
    }
    case ProfileKind::custom: {
      const Jet j = profile.jet(t);
      if (!(j[0] > 0)) throw PoleError("f vanishes at t = " + format_number(t));
      return -j[2] / j[0];
    }
  }
  return 0;
}

CurvatureField curvature_field(const ProfileCurve& profile) {
  CurvatureField field;
  const auto samples = profile.samples();
  field.t.reserve(samples.size());
  field.k.reserve(samples.size());
  field.exact_unity.reserve(samples.size());
  for (const auto& s : samples) {
    double k;
    if (profile.closed() && (s.t == profile.start() || s.t == profile.end()))
      k = profile.kind() == ProfileKind::custom ? std::nan("") : 1.0;
    else
      k = gauss_curvature(profile, s.t);
    field.t.push_back(s.t);
    field.k.push_back(k);
    field.exact_unity.push_back(profile.unperturbed(s.t));
  }
  return field;
}

CurvatureExtrema curvature_extrema(const ProfileCurve& profile, int grid_n) {
  if (grid_n < 512) throw PreconditionError("curvature_extrema needs grid_n >= 512");
  const double h = profile.length() / grid_n;
  std::vector<double> ts, ks;
  for (int i = 0; i <= grid_n; ++i) {
    const double t = i == grid_n ? profile.end() : profile.start() + i * h;
    if (profile.kind() == ProfileKind::custom && profile.closed() && (i == 0 || i == grid_n)) continue;
    ts.push_back(t);
    ks.push_back(curvature_or_limit(profile, t));
  }
  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 1; i < ks.size(); ++i) {
    if (ks[i] < ks[imin]) imin = i;
    if (ks[i] > ks[imax]) imax = i;
  }

  auto refine = [&](std::size_t i, double sign) {
    const double lo = ts[i == 0 ? 0 : i - 1], hi = ts[std::min(i + 1, ts.size() - 1)];
    const double t = golden_section([&](double x) { return sign * curvature_or_limit(profile, x); }, lo, hi);
    const double k = curvature_or_limit(profile, t);
    return sign * k < sign * ks[i] ? std::pair{k, t} : std::pair{ks[i], ts[i]};
  };
  const auto [kmin, tmin] = refine(imin, 1.0);
  const auto [kmax, tmax] = refine(imax, -1.0);
  return {kmax, tmax, kmin, tmin};
}

double surface_area(const ProfileCurve& profile) {
  auto f = [&](double t) { return profile.f(t); };
  const double coarse = integrate_on_grid(profile, 3, true, f);
  const double fine = integrate_on_grid(profile, 6, true, f);
  const double residual = std::abs(coarse - fine) / std::abs(fine);
  if (!(residual <= 1e-8)) throw NumericError("surface area quadrature did not converge", residual);
  return 2 * kPi * fine;
}

TotalCurvature total_curvature(const ProfileCurve& profile) {
  const double quad = 2 * kPi * integrate_on_grid(profile, 6, true, [&](double t) {
                        return curvature_or_limit(profile, t) * profile.f(t);
                      });
  const double tele = 2 * kPi * (profile.f(profile.start(), 1) - profile.f(profile.end(), 1));
  const double residual = std::abs(quad - tele);
  if (!(residual <= 1e-6))
    throw NumericError("total curvature: quadrature and telescoped forms disagree", residual);
  return {quad, tele};
}

MinimalSphereBound minimal_sphere_bound_check(const ProfileCurve& profile) {
  if (!profile.closed()) throw PreconditionError("minimal sphere bound needs a closed profile");
  const auto ext = curvature_extrema(profile, static_cast<int>(profile.samples().size() - 1));
  const double area = surface_area(profile);
  const double margin = ext.k_max * area - 4 * kPi;
  return {margin >= -1e-8, margin, ext.k_max, area};
}

}  // namespace revcurv
