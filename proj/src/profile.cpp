#include "revcurv/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "revcurv/errors.hpp"

namespace revcurv {
namespace {

constexpr double kDomainSlack = 1e-12;

// (eps0, eps0', eps0'') without domain checks.
Eigen::Vector3d eps0_jet(double s, double delta) {
  if (s <= delta) return Eigen::Vector3d::Zero();
  if (s >= kHalfPi - delta) return {waist_constant(delta) - std::cos(s), std::sin(s), std::cos(s)};
  const double P = kPi - 4 * delta;
  const double P3 = P * P * P;
  const double cd = std::cos(delta), sd = std::sin(delta);
  const double x = s - delta;
  const double n = 12 * (kPi - 3 * delta - s) * cd - P * (2 * kPi - 5 * delta - 3 * s) * sd;
  const double dn = -12 * cd + 3 * P * sd;
  return {x * x * x * n / (3 * P3), x * x * (3 * n + x * dn) / (3 * P3),
          x * (24 * (kPi - 2 * delta - 2 * s) * cd - 4 * P * (kPi - delta - 3 * s) * sd) / P3};
}

void check_eps0_domain(double t, double delta) {
  if (!(t >= -kHalfPi - delta - kDomainSlack && t <= kHalfPi + delta + kDomainSlack))
    throw DomainError("eps0 is defined on [-pi/2-delta, pi/2+delta], got t = " + format_number(t));
}

Jet cos_jet(double t) {
  const double c = std::cos(t), s = std::sin(t);
  return (Jet() << c, -s, -c, s, c).finished();
}

Jet flip_odd(Jet j) {
  j[1] = -j[1];
  j[3] = -j[3];
  return j;
}

double gprime(double fp) { return std::sqrt(std::max(0.0, (1 - fp) * (1 + fp))); }

void check_slope(double fp, double t) {
  if (std::abs(fp) > 1 + 1e-12)
    throw ConstructionError("|f'| = " + format_number(std::abs(fp)) + " > 1 at t = " + format_number(t) +
                                "; the eps' bound failed",
                            t);
}

}  // namespace

void ConstructionParams::validate() const {
  if (!(delta > 0 && delta < kPi / 4))
    throw PreconditionError("delta must satisfy 0 < delta < pi/4 (eps0 >= 0), got " + format_number(delta));
  if (!(a >= 0 && a < kHalfPi - 2 * delta))
    throw PreconditionError("a must satisfy 0 <= a < pi/2 - 2 delta, got " + format_number(a));
  if (grid_n < 512 || grid_n % 4 != 0)
    throw PreconditionError("grid_n must be a multiple of 4 and >= 512, got " + std::to_string(grid_n));
  if (quad_order < 16)
    throw PreconditionError("quad_order must be >= 16, got " + std::to_string(quad_order));
  if (!(amplitude > 0)) throw PreconditionError("amplitude must be positive");
}

double waist_constant(double delta) {
  const double P = kPi - 4 * delta;
  const double x = kHalfPi - 2 * delta;
  const double s = kHalfPi - delta;
  const double n = 12 * (kPi - 3 * delta - s) * std::cos(delta) - P * (2 * kPi - 5 * delta - 3 * s) * std::sin(delta);
  return x * x * x * n / (3 * P * P * P) + std::sin(delta);
}

double eps0_value(double t, double delta) {
  check_eps0_domain(t, delta);
  return eps0_jet(t, delta)[0];
}

double eps0_derivative(double t, double delta, int order) {
  check_eps0_domain(t, delta);
  if (order < 0 || order > 2) throw DomainError("eps0 is only C^2; order " + std::to_string(order));
  return eps0_jet(t, delta)[order];
}

double eps0_second_derivative(double t, double delta) {
  if (!(t >= delta - kDomainSlack && t <= kHalfPi - delta + kDomainSlack))
    throw DomainError("polynomial piece of eps0 is [delta, pi/2-delta], got t = " + format_number(t));
  const double P = kPi - 4 * delta;
  return (t - delta) *
         (24 * (kPi - 2 * delta - 2 * t) * std::cos(delta) - 4 * P * (kPi - delta - 3 * t) * std::sin(delta)) /
         (P * P * P);
}

Perturbation::Perturbation(const ConstructionParams& params)
    : params_(params),
      kernel_((params.validate(), params.delta), params.quad_order),
      stretch_(kHalfPi / (kHalfPi - params.a)) {}

Jet Perturbation::jet(double t) const {
  if (!(std::abs(t) <= kHalfPi + kDomainSlack))
    throw DomainError("eps is defined on [-pi/2, pi/2], got t = " + format_number(t));
  const double tau = (t - params_.a) * stretch_;
  if (tau < 0) return Jet::Zero();

  const double delta = params_.delta;
  const auto breaks = kernel_.panels({tau - delta, tau - kHalfPi + delta});
  const auto& rule = kernel_.rule();
  Jet acc = Jet::Zero();
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double half = (breaks[p + 1] - breaks[p]) / 2, mid = (breaks[p + 1] + breaks[p]) / 2;
    for (int i = 0; i < rule.order(); ++i) {
      const double y = mid + half * rule.nodes()[i];
      const double w = half * rule.weights()[i];
      const auto phi = kernel_.low_jet(y);
      if (phi[0] == 0 && phi[1] == 0 && phi[2] == 0) continue;
      const Eigen::Vector3d e = eps0_jet(tau - y, delta);
      acc[0] += w * e[0] * phi[0];
      acc[1] += w * e[1] * phi[0];
      acc[2] += w * e[2] * phi[0];
      acc[3] += w * e[2] * phi[1];
      acc[4] += w * e[2] * phi[2];
    }
  }
  double scale = params_.amplitude;
  for (int k = 0; k < 5; ++k, scale *= stretch_) acc[k] *= scale;
  return acc;
}

double eps_derivative(double t, int order, const ConstructionParams& params,
                      const SmoothingKernel& kernel) {
  if (order < 0 || order > kMaxKernelOrder)
    throw DomainError("eps derivative order " + std::to_string(order) + " unsupported");
  if (std::abs(kernel.delta() - params.delta) > 0)
    throw PreconditionError("kernel was built for a different delta");
  return Perturbation(params).derivative(t, order);
}

// ---------------------------------------------------------------------------

Jet ProfileCurve::jet(double t) const {
  if (!(t >= start_ - kDomainSlack && t <= end_ + kDomainSlack))
    throw DomainError("t = " + format_number(t) + " outside profile domain [" + format_number(start_) +
                      ", " + format_number(end_) + "]");
  t = std::clamp(t, start_, end_);
  switch (kind_) {
    case ProfileKind::round:
      return cos_jet(t);
    case ProfileKind::barbell: {
      const double r = reduce(t);
      const Jet j = cos_jet(r) + perturbation_->jet(r);
      return reflected(t) ? flip_odd(j) : j;
    }
    case ProfileKind::custom:
      return custom_(t);
  }
  return Jet::Zero();
}

double ProfileCurve::reduce(double t) const { return reflected(t) ? kPi - t : t; }

bool ProfileCurve::unperturbed(double t) const {
  switch (kind_) {
    case ProfileKind::round: return true;
    case ProfileKind::barbell: return reduce(t) <= params_.a;
    case ProfileKind::custom: return false;
  }
  return false;
}

double ProfileCurve::g(double t) const {
  const double h = spacing();
  const auto i = static_cast<std::size_t>(
      std::clamp(std::floor((t - start_) / h), 0.0, static_cast<double>(samples_.size() - 2)));
  static const GaussLegendred rule(3);
  return samples_[i].g + rule.integrate([this](double x) { return gprime(f(x, 1)); }, samples_[i].t, t);
}

void ProfileCurve::sample() {
  const int n = params_.grid_n;
  const double h = length() / n;
  samples_.resize(static_cast<std::size_t>(n) + 1);
  auto t_at = [&](int i) { return i == n ? end_ : start_ + i * h; };

  // Barbell samples past pi/2 are mirror images; only the first half is computed.
  const bool mirror = kind_ == ProfileKind::barbell;
  const int last = mirror ? n / 2 : n;
  for (int i = 0; i <= last; ++i) {
    const double t = t_at(i);
    const Jet j = jet(t);
    check_slope(j[1], t);
    samples_[i] = {t, j[0], j[1], j[2], j[3], 0.0};
  }

  const GaussLegendred rule(3);
  for (int i = 0; i < last; ++i) {
    const double lo = samples_[i].t, hi = samples_[i + 1].t;
    samples_[i + 1].g = samples_[i].g + rule.integrate(
                                            [&](double x) {
                                              const double fp = f(x, 1);
                                              check_slope(fp, x);
                                              return gprime(fp);
                                            },
                                            lo, hi);
  }

  if (mirror) {
    const double g_mid = samples_[last].g;
    for (int i = last + 1; i <= n; ++i) {
      const ProfileSample& m = samples_[n - i];
      samples_[i] = {t_at(i), m.f, -m.fp, m.fpp, -m.fppp, 2 * g_mid - m.g};
    }
  }
}

ProfileCurve build_profile(const ConstructionParams& params, bool baseline) {
  params.validate();
  ProfileCurve p;
  p.params_ = params;
  if (baseline) {
    p.kind_ = ProfileKind::round;
    p.start_ = -kHalfPi;
    p.end_ = kHalfPi;
  } else {
    p.kind_ = ProfileKind::barbell;
    p.start_ = -kHalfPi;
    p.end_ = 3 * kHalfPi;
    p.perturbation_ = std::make_shared<const Perturbation>(params);
    if (params.a > 0)
      p.warnings_.push_back(
          "a > 0 is experimental: the linear rescaling multiplies eps' by pi/(pi - 2a), so "
          "eps'(pi/2) != 1 and the reflected profile is not smooth at pi/2");
    if (params.amplitude != 1.0)
      p.warnings_.push_back("amplitude != 1 breaks the derivative matching at pi/2");
  }
  p.sample();
  return p;
}

ProfileCurve custom_profile(double start, double end, ProfileCurve::JetFunction jet, bool closed,
                            int grid_n) {
  if (!(end > start)) throw PreconditionError("custom profile needs start < end");
  if (grid_n < 4) throw PreconditionError("custom profile needs grid_n >= 4");
  ProfileCurve p;
  p.kind_ = ProfileKind::custom;
  p.start_ = start;
  p.end_ = end;
  p.closed_ = closed;
  p.params_.grid_n = grid_n;
  p.custom_ = std::move(jet);
  p.sample();
  return p;
}

// ---------------------------------------------------------------------------

VerificationReport verify_claim_properties(const ProfileCurve& profile, const ClaimTolerances& tol) {
  VerificationReport report;
  const auto* pert = profile.perturbation();
  const double a = profile.params().a;

  if (profile.kind() == ProfileKind::custom) {
    report.check("claim.applicable", "profile comes from the eps construction",
                 "construction", 0, Relation::greater, 0, "custom profile");
    return report;
  }

  if (pert == nullptr) {
    const std::string note = "degenerate: eps == 0";
    report.check("claim.range", "max violation of 0 <= eps <= 1", "eps bounds", 0,
                 Relation::less_equal, tol.range, note);
    report.check("claim.slope", "max violation of -1+sin t <= eps' <= 1+sin t", "unit speed", 0,
                 Relation::less_equal, tol.slope, note);
    report.check("claim.slope_strong", "max violation of 0 <= eps' <= sin t on [0, pi/2]",
                 "unit speed", 0, Relation::less_equal, tol.slope, note);
    report.check("claim.convexity", "min eps'' on [a, pi/2]", "weak convexity", 0,
                 Relation::greater_equal, -tol.convexity, note);
    report.check("claim.convexity_strict", "vacuous for eps == 0", "strict convexity", 0,
                 Relation::less_equal, 0, note);
    report.check("claim.flat_at_a", "max_k |eps^(k)(a)|, k <= 4", "flat start", 0,
                 Relation::less_equal, tol.flat, note);
    report.check("claim.match_pi2", "vacuous for eps == 0", "derivative matching", 0,
                 Relation::less_equal, tol.match, note);
    return report;
  }

  double range = -std::numeric_limits<double>::infinity();
  double slope = range, strong = range;
  double convex_min = std::numeric_limits<double>::infinity(), strict_min = convex_min;
  for (const auto& s : profile.samples()) {
    if (s.t > kHalfPi) break;
    const Jet e = pert->jet(s.t);
    const double sn = std::sin(s.t);
    range = std::max({range, -e[0], e[0] - 1});
    slope = std::max({slope, (-1 + sn) - e[1], e[1] - (1 + sn)});
    if (s.t >= 0) strong = std::max({strong, -e[1], e[1] - sn});
    if (s.t >= a) convex_min = std::min(convex_min, e[2]);
    if (s.t > a && s.t < kHalfPi) strict_min = std::min(strict_min, e[2]);
  }

  report.check("claim.range", "max violation of 0 <= eps <= 1", "eps bounds", range,
               Relation::less_equal, tol.range);
  report.check("claim.slope", "max violation of -1+sin t <= eps' <= 1+sin t", "unit speed", slope,
               Relation::less_equal, tol.slope);
  report.check("claim.slope_strong", "max violation of 0 <= eps' <= sin t on [0, pi/2]", "unit speed",
               strong, Relation::less_equal, tol.slope);
  report.check("claim.convexity", "min eps'' on [a, pi/2]", "weak convexity", convex_min,
               Relation::greater_equal, -tol.convexity);
  report.check("claim.convexity_strict", "min eps'' on interior samples of (a, pi/2)",
               "strict convexity", strict_min, Relation::greater, 0);

  const Jet at_a = pert->jet(a);
  report.check("claim.flat_at_a", "max_k |eps^(k)(a)|, k <= 4", "flat start",
               at_a.cwiseAbs().maxCoeff(), Relation::less_equal, tol.flat);

  const Jet at_waist = pert->jet(kHalfPi);
  const double match = std::max({std::abs(at_waist[1] - 1), std::abs(at_waist[2]),
                                 std::abs(at_waist[3] + 1), std::abs(at_waist[4])});
  report.check("claim.match_pi2", "max_k |eps^(k)(pi/2) - (-cos)^(k)(pi/2)|, 1 <= k <= 4",
               "derivative matching", match, Relation::less_equal, tol.match);
  return report;
}

std::array<double, 4> derivative_jumps(const ProfileCurve& profile, double t, double h) {
  // Second-order one-sided stencils for f^(k), k = 1..4, on points t + i h.
  static const std::vector<std::vector<double>> stencils = {
      {-1.5, 2.0, -0.5},
      {2.0, -5.0, 4.0, -1.0},
      {-2.5, 9.0, -12.0, 7.0, -1.5},
      {3.0, -14.0, 26.0, -24.0, 11.0, -2.0},
  };
  std::array<double, 4> jumps{};
  for (int k = 1; k <= 4; ++k) {
    const auto& c = stencils[k - 1];
    double fwd = 0, bwd = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      fwd += c[i] * profile.f(t + static_cast<double>(i) * h);
      bwd += c[i] * profile.f(t - static_cast<double>(i) * h);
    }
    const double hk = std::pow(h, k);
    fwd /= hk;
    bwd /= hk;
    if (k % 2 == 1) bwd = -bwd;
    jumps[k - 1] = std::abs(fwd - bwd);
  }
  return jumps;
}

}  // namespace revcurv
