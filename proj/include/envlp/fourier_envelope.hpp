#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "envlp/error.hpp"

namespace envlp {

/// Largest harmonic budget accepted anywhere in the pipeline.
inline constexpr int kMaxHarmonics = 64;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/**
 * Real trigonometric polynomial of degree L
 *
 *   f(t) = b0 + sum_{k=1..L} 2 (re[k] cos(2 pi k t) - im[k] sin(2 pi k t))
 *
 * which is the real form of sum_{|k|<=L} b[k] exp(j 2 pi k t) with
 * b[k] = re[k] + j im[k] and b[-k] = conj(b[k]).
 *
 * The canonical parameter vector is [b0, re[1..L], im[1..L]] (length 2L+1).
 */
class FourierEnvelope {
 public:
  FourierEnvelope() = default;

  /// Constant envelope.
  explicit FourierEnvelope(double b0) : b0_(b0) {}

  FourierEnvelope(double b0, std::vector<double> re, std::vector<double> im)
      : b0_(b0), re_(std::move(re)), im_(std::move(im)) {
    if (re_.size() != im_.size()) {
      throw Error(ErrorCode::DimensionMismatch, "b_re and b_im must have equal length");
    }
  }

  /// All-zero envelope with L harmonics.
  static FourierEnvelope zeros(int L) {
    if (L < 0) throw Error(ErrorCode::InvalidArgument, "negative harmonic budget");
    return FourierEnvelope(0.0, std::vector<double>(L, 0.0), std::vector<double>(L, 0.0));
  }

  /// Builds from the canonical [b0, re..., im...] layout; size must be odd.
  static FourierEnvelope from_params(std::span<const double> params) {
    if (params.empty() || params.size() % 2 == 0) {
      throw Error(ErrorCode::DimensionMismatch, "parameter vector length must be 2L+1");
    }
    const std::size_t L = (params.size() - 1) / 2;
    return FourierEnvelope(params[0], {params.begin() + 1, params.begin() + 1 + L},
                           {params.begin() + 1 + L, params.end()});
  }

  int harmonics() const noexcept { return static_cast<int>(re_.size()); }
  double b0() const noexcept { return b0_; }
  const std::vector<double>& b_re() const noexcept { return re_; }
  const std::vector<double>& b_im() const noexcept { return im_; }

  std::vector<double> params() const {
    std::vector<double> p;
    p.reserve(1 + 2 * re_.size());
    p.push_back(b0_);
    p.insert(p.end(), re_.begin(), re_.end());
    p.insert(p.end(), im_.begin(), im_.end());
    return p;
  }

  /// Copy with the DC coefficient shifted by delta.
  FourierEnvelope with_offset(double delta) const {
    FourierEnvelope out = *this;
    out.b0_ += delta;
    return out;
  }

  friend bool operator==(const FourierEnvelope&, const FourierEnvelope&) = default;

 private:
  double b0_ = 0.0;
  std::vector<double> re_;
  std::vector<double> im_;
};

inline double evaluate(const FourierEnvelope& env, double t) {
  double value = env.b0();
  const auto& re = env.b_re();
  const auto& im = env.b_im();
  for (std::size_t k = 1; k <= re.size(); ++k) {
    const double w = kTwoPi * static_cast<double>(k) * t;
    value += 2.0 * (re[k - 1] * std::cos(w) - im[k - 1] * std::sin(w));
  }
  return value;
}

/// Coefficient energy sum_{|k|<=L} |b[k]|^2, equal to the integral of f^2 over a period.
inline double energy(const FourierEnvelope& env) {
  double e = env.b0() * env.b0();
  const auto& re = env.b_re();
  const auto& im = env.b_im();
  for (std::size_t k = 0; k < re.size(); ++k) e += 2.0 * (re[k] * re[k] + im[k] * im[k]);
  return e;
}

/// Row r(t) with r(t) . params(env) == evaluate(env, t).
inline std::vector<double> phasor_row(int L, double t) {
  if (L < 0) throw Error(ErrorCode::InvalidArgument, "negative harmonic budget");
  std::vector<double> row(2 * static_cast<std::size_t>(L) + 1);
  row[0] = 1.0;
  for (int k = 1; k <= L; ++k) {
    const double w = kTwoPi * k * t;
    row[k] = 2.0 * std::cos(w);
    row[L + k] = -2.0 * std::sin(w);
  }
  return row;
}

/// Uniform slope bound 2 pi sum_{|k|<=L} |k| |b[k]| computed from the coefficients.
inline double derivative_bound(const FourierEnvelope& env) {
  double s = 0.0;
  const auto& re = env.b_re();
  const auto& im = env.b_im();
  for (std::size_t k = 1; k <= re.size(); ++k) {
    s += 2.0 * static_cast<double>(k) * std::hypot(re[k - 1], im[k - 1]);
  }
  return kTwoPi * s;
}

/// Slope bound available before solving: 2 pi L sqrt(2L+1) ||f||_inf.
///
/// The envelope's energy never exceeds ||f||_inf^2 (the constant envelope at
/// ||f||_inf is feasible), and sum |b[k]| <= sqrt(2L+1) sqrt(sum |b[k]|^2).
inline double apriori_derivative_bound(int L, double sup_norm) {
  if (L < 0) throw Error(ErrorCode::InvalidArgument, "negative harmonic budget");
  return kTwoPi * L * std::sqrt(2.0 * L + 1.0) * sup_norm;
}

}  // namespace envlp
