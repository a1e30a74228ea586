#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>

#include <Eigen/Core>

namespace revcurv {

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the three-term Legendre recurrence.
template <typename Scalar>
class GaussLegendre {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  explicit GaussLegendre(int order) : nodes_(order), weights_(order) {
    if (order < 1) throw std::invalid_argument("GaussLegendre: order must be positive");
    if (order == 1) {
      nodes_[0] = 0;
      weights_[0] = 2;
      return;
    }
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
      Scalar x = std::cos(std::numbers::pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) /
                          (Scalar(order) + Scalar(0.5)));
      Scalar dp = 1;
      for (int iter = 0; iter < 100; ++iter) {
        Scalar p0 = 1, p1 = x;
        for (int n = 2; n <= order; ++n) {
          const Scalar pn = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
          p0 = p1;
          p1 = pn;
        }
        dp = order * (x * p1 - p0) / (x * x - 1);
        const Scalar dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) <= 4 * std::numeric_limits<Scalar>::epsilon()) break;
      }
      nodes_[i] = -x;
      nodes_[order - 1 - i] = x;
      weights_[i] = weights_[order - 1 - i] = Scalar(2) / ((1 - x * x) * dp * dp);
    }
    if (order % 2 == 1) nodes_[half - 1] = 0;
  }

  int order() const { return static_cast<int>(nodes_.size()); }
  const Array& nodes() const { return nodes_; }
  const Array& weights() const { return weights_; }

  /// \int_lo^hi f
  template <typename F>
  Scalar integrate(F&& f, Scalar lo, Scalar hi) const {
    const Scalar half = (hi - lo) / 2, mid = (hi + lo) / 2;
    Scalar sum = 0;
    for (int i = 0; i < order(); ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
    return half * sum;
  }

  /// Sum of the rule applied on every [breaks[i], breaks[i+1]].
  template <typename F>
  Scalar integrate(F&& f, std::span<const Scalar> breaks) const {
    Scalar sum = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      if (breaks[i + 1] > breaks[i]) sum += integrate(f, breaks[i], breaks[i + 1]);
    return sum;
  }

 private:
  Array nodes_;
  Array weights_;
};

using GaussLegendred = GaussLegendre<double>;

}  // namespace revcurv
