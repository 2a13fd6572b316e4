#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "envlp/error.hpp"

namespace envlp {

enum class LipschitzSource { user_supplied, estimated };

/// Safety factor applied to the largest observed discrete slope when no
/// Lipschitz constant is supplied.
inline constexpr double kLipschitzSafetyFactor = 1.5;

/// Wraps t into [0, 1).
inline double wrap_phase(double t) {
  double w = t - std::floor(t);
  return w >= 1.0 ? 0.0 : w;
}

/// Distance between two phases on the unit circle, in [0, 1/2].
inline double wrapped_distance(double t1, double t2) {
  const double d = wrap_phase(t1 - t2);
  return std::min(d, 1.0 - d);
}

/**
 * Real 1-periodic signal given by M uniform samples at t = i/M and evaluated
 * between samples by periodic linear interpolation.
 */
class PeriodicSignal {
 public:
  static PeriodicSignal from_samples(std::vector<double> values,
                                     std::optional<double> lipschitz_c = std::nullopt) {
    if (values.size() < 4) {
      throw Error(ErrorCode::TooFewSamples,
                  "need at least 4 samples, got " + std::to_string(values.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) {
        throw Error(ErrorCode::NonFiniteSample, "sample " + std::to_string(i) + " is not finite");
      }
    }
    const double slope = max_discrete_slope(values);
    PeriodicSignal sig;
    sig.samples_ = std::move(values);
    sig.observed_slope_ = slope;
    if (lipschitz_c) {
      if (!std::isfinite(*lipschitz_c) || *lipschitz_c < slope - 1e-9) {
        throw Error(ErrorCode::LipschitzTooSmall,
                    "Lipschitz constant " + std::to_string(*lipschitz_c) +
                        " is below the observed slope " + std::to_string(slope));
      }
      sig.c_ = *lipschitz_c;
      sig.source_ = LipschitzSource::user_supplied;
    } else {
      sig.c_ = kLipschitzSafetyFactor * slope;
      sig.source_ = LipschitzSource::estimated;
    }
    return sig;
  }

  const std::vector<double>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double lipschitz_c() const noexcept { return c_; }
  LipschitzSource c_provenance() const noexcept { return source_; }
  /// max_i |s[i+1] - s[i]| * M, the Lipschitz constant of the interpolant.
  double observed_slope() const noexcept { return observed_slope_; }

  /// False when the signal came from a contour that is not star-shaped about
  /// its centroid (radii are then the farthest boundary crossing).
  bool star_shaped() const noexcept { return star_shaped_; }
  PeriodicSignal with_star_shaped(bool flag) const {
    PeriodicSignal out = *this;
    out.star_shaped_ = flag;
    return out;
  }

  double value_at(double t) const {
    const auto m = samples_.size();
    const double pos = wrap_phase(t) * static_cast<double>(m);
    // Snap phases that land on a sample up to rounding, so i/n grids that
    // divide M read back stored samples bit for bit.
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, pos)) {
      return samples_[static_cast<std::size_t>(nearest) % m];
    }
    auto i = static_cast<std::size_t>(pos);
    if (i >= m) i = m - 1;
    const double frac = pos - static_cast<double>(i);
    const double a = samples_[i];
    const double b = samples_[(i + 1) % m];
    return frac == 0.0 ? a : a + frac * (b - a);
  }

  double sup_norm() const {
    double s = 0.0;
    for (double v : samples_) s = std::max(s, std::abs(v));
    return s;
  }

  /// Rectangle-rule quadrature of f^2 over one period (exact for the periodic
  /// trapezoid rule on the sample grid).
  double signal_energy() const {
    double s = 0.0;
    for (double v : samples_) s += v * v;
    return s / static_cast<double>(samples_.size());
  }

 private:
  static double max_discrete_slope(const std::vector<double>& v) {
    const auto m = v.size();
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s = std::max(s, std::abs(v[(i + 1) % m] - v[i]));
    return s * static_cast<double>(m);
  }

  std::vector<double> samples_;
  double c_ = 0.0;
  double observed_slope_ = 0.0;
  LipschitzSource source_ = LipschitzSource::estimated;
  bool star_shaped_ = true;
};

}  // namespace envlp
