#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "revcurv/kernel.hpp"
#include "revcurv/report.hpp"

namespace revcurv {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2;

/// f, f', f'', f''', f''''
using Jet = Eigen::Matrix<double, 5, 1>;

struct ConstructionParams {
  double delta = 0.1;   ///< kernel half-width
  double a = 0.0;       ///< start of the perturbation support (a > 0 is experimental)
  int grid_n = 4096;    ///< grid intervals over the profile domain; grid_n + 1 samples
  int quad_order = 64;  ///< Gauss-Legendre nodes per convolution panel
  /// Multiplies eps. Anything other than 1 breaks the derivative matching at
  /// pi/2; only useful to exercise the verifier.
  double amplitude = 1.0;

  /// Throws PreconditionError naming the first violated bound.
  void validate() const;
};

// --- the C^2 seed eps0 ------------------------------------------------------

/// Piecewise eps0: 0 on [-pi/2-delta, delta], the cubic-times-linear polynomial
/// on [delta, pi/2-delta], c - cos(t) on [pi/2-delta, pi/2+delta].
double eps0_value(double t, double delta);

/// eps0^(k) for k <= 2 on the same pieces (eps0 is only C^2 across the joins).
double eps0_derivative(double t, double delta, int order);

/// Closed-form second derivative of the polynomial piece; t in [delta, pi/2-delta].
double eps0_second_derivative(double t, double delta);

/// c = eps0(pi/2 - delta) + cos(pi/2 - delta)
double waist_constant(double delta);

// --- the smooth perturbation eps = eps0 * phi --------------------------------

class Perturbation {
 public:
  explicit Perturbation(const ConstructionParams& params);

  /// eps^(k)(t) for t in [-pi/2, pi/2], k <= 4.
  double derivative(double t, int order) const { return jet(t)[order]; }

  /// All of eps, ..., eps'''' from one pass over the quadrature nodes. At most
  /// two derivatives are moved onto eps0, the rest onto the kernel.
  Jet jet(double t) const;

  const ConstructionParams& params() const { return params_; }
  const SmoothingKernel& kernel() const { return kernel_; }

  /// d(tau)/dt of the map sending [a, pi/2] onto [0, pi/2]; 1 when a = 0.
  double stretch() const { return stretch_; }

 private:
  ConstructionParams params_;
  SmoothingKernel kernel_;
  double stretch_;
};

/// eps^(k)(t) = \int eps0(t - y) phi^(k)(y) dy.
double eps_derivative(double t, int order, const ConstructionParams& params,
                      const SmoothingKernel& kernel);

// --- profile curves ----------------------------------------------------------

enum class ProfileKind { round, barbell, custom };

struct ProfileSample {
  double t, f, fp, fpp, fppp, g;
};

/// Arclength profile (f, g) of a surface of revolution. Immutable once built;
/// copies share the underlying perturbation.
class ProfileCurve {
 public:
  using JetFunction = std::function<Jet(double)>;

  ProfileKind kind() const { return kind_; }
  double start() const { return start_; }
  double end() const { return end_; }
  double length() const { return end_ - start_; }
  /// f vanishes at both ends.
  bool closed() const { return closed_; }

  /// f^(k)(t), evaluated fresh (never interpolated).
  Jet jet(double t) const;
  double f(double t, int order = 0) const { return jet(t)[order]; }

  /// Axis coordinate with g(start) = 0 and g' = +sqrt(1 - f'^2).
  double g(double t) const;

  /// Maps t in the reflected half to pi - t. Odd derivatives flip sign there.
  double reduce(double t) const;
  bool reflected(double t) const { return kind_ == ProfileKind::barbell && t > kHalfPi; }

  /// True where eps and all its derivatives vanish identically (K == 1 exactly).
  bool unperturbed(double t) const;

  const Perturbation* perturbation() const { return perturbation_.get(); }
  const ConstructionParams& params() const { return params_; }
  std::span<const ProfileSample> samples() const { return samples_; }
  double spacing() const { return length() / static_cast<double>(samples_.size() - 1); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  friend ProfileCurve build_profile(const ConstructionParams& params, bool baseline);
  friend ProfileCurve custom_profile(double start, double end, JetFunction jet, bool closed,
                                     int grid_n);

 private:
  ProfileCurve() = default;
  void sample();

  ProfileKind kind_ = ProfileKind::round;
  double start_ = -kHalfPi;
  double end_ = kHalfPi;
  bool closed_ = true;
  ConstructionParams params_;
  std::shared_ptr<const Perturbation> perturbation_;
  JetFunction custom_;
  std::vector<ProfileSample> samples_;
  std::vector<std::string> warnings_;
};

/// f = cos + eps on [-pi/2, pi/2], reflected across pi/2 onto [-pi/2, 3pi/2].
/// With `baseline` set, the round sphere f = cos on [-pi/2, pi/2] instead.
/// Throws ConstructionError when |f'| > 1 somewhere.
ProfileCurve build_profile(const ConstructionParams& params, bool baseline = false);

inline ProfileCurve round_profile(const ConstructionParams& params = {}) {
  return build_profile(params, true);
}

/// A general profile given by its jet on [start, end]. Used for fixtures such
/// as cylinders and single caps.
ProfileCurve custom_profile(double start, double end, ProfileCurve::JetFunction jet, bool closed,
                            int grid_n = 1024);

/// f = r on [0, length]: a flat cylinder, open at both ends.
inline ProfileCurve cylinder_profile(double r, double length, int grid_n = 1024) {
  return custom_profile(
      0, length, [r](double) { return (Jet() << r, 0, 0, 0, 0).finished(); }, false, grid_n);
}

/// f = cos on [-pi/2, 0]: one unit hemisphere, closed at the south pole only.
inline ProfileCurve cap_profile(int grid_n = 1024) {
  return custom_profile(
      -kHalfPi, 0,
      [](double t) {
        const double c = std::cos(t), s = std::sin(t);
        return (Jet() << c, -s, -c, s, c).finished();
      },
      false, grid_n);
}

// --- verification ------------------------------------------------------------

struct ClaimTolerances {
  double range = 0.0;       ///< slack on 0 <= eps <= 1
  double slope = 1e-9;      ///< slack on the eps' bounds
  double convexity = 1e-9;  ///< eps'' >= -convexity
  double flat = 1e-8;       ///< |eps^(k)(a)| at the start of the support
  double match = 1e-6;      ///< derivative matching at pi/2
};

/// Checks every property the construction promises for eps, on the sample grid,
/// with fresh convolutions. Failures are report entries, never exceptions.
VerificationReport verify_claim_properties(const ProfileCurve& profile,
                                           const ClaimTolerances& tol = {});

/// |left - right| between one-sided, second-order finite-difference estimates
/// of f^(k) at `t`, for k = 1..4, with step h.
std::array<double, 4> derivative_jumps(const ProfileCurve& profile, double t, double h);

}  // namespace revcurv
