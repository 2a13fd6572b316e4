#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "envlp/fourier_envelope.hpp"
#include "oracles.hpp"

namespace envlp {
namespace {

constexpr double kPi = std::numbers::pi;

FourierEnvelope third_cos() { return FourierEnvelope(1.0 / 3, {1.0 / 3}, {0.0}); }

TEST(Evaluate, ConstantEnvelope) {
  EXPECT_EQ(evaluate(FourierEnvelope(2.5), 0.0), 2.5);
  EXPECT_EQ(evaluate(FourierEnvelope(2.5), 0.73), 2.5);
}

TEST(Evaluate, FirstHarmonic) {
  EXPECT_NEAR(evaluate(third_cos(), 0.0), 1.0, 1e-15);
  EXPECT_NEAR(evaluate(third_cos(), 0.5), -1.0 / 3, 1e-15);
}

TEST(Evaluate, MatchesComplexForm) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto env = oracle::random_envelope(rng, trial % 7);
    const double t = ut(rng);
    const auto z = oracle::eval_complex(env, t);
    EXPECT_NEAR(z.imag(), 0.0, 1e-12);
    EXPECT_NEAR(evaluate(env, t), z.real(), 1e-12);
  }
}

TEST(Energy, Examples) {
  EXPECT_DOUBLE_EQ(energy(FourierEnvelope(3.0)), 9.0);
  EXPECT_NEAR(energy(third_cos()), 1.0 / 3, 1e-15);
  EXPECT_EQ(energy(FourierEnvelope::zeros(2)), 0.0);
}

TEST(Energy, CosEnvelopeOptimumMatchesOracle) {
  const auto opt = oracle::cos_envelope_optimum();
  const FourierEnvelope env(opt.h0, {0.5 + opt.h1}, {0.0});
  EXPECT_NEAR(energy(env), opt.cost, 1e-12);
  EXPECT_NEAR(opt.cost, 1.0 / 3, 1e-9);
}

TEST(Energy, ParsevalAgainstQuadrature) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto env = oracle::random_envelope(rng, trial % 9);
    const double quad = oracle::trapezoid_square(
        [&](double t) { return oracle::eval_complex(env, t).real(); }, 4096);
    EXPECT_LE(std::abs(energy(env) - quad), 1e-9 * (1.0 + energy(env)));
  }
}

TEST(PhasorRow, Examples) {
  EXPECT_EQ(phasor_row(2, 0.0), (std::vector<double>{1, 2, 2, 0, 0}));
  const auto quarter = phasor_row(1, 0.25);
  ASSERT_EQ(quarter.size(), 3u);
  EXPECT_EQ(quarter[0], 1.0);
  EXPECT_NEAR(quarter[1], 0.0, 1e-15);
  EXPECT_NEAR(quarter[2], -2.0, 1e-15);
  const auto half = phasor_row(1, 0.5);
  EXPECT_NEAR(half[1], -2.0, 1e-15);
  EXPECT_NEAR(half[2], 0.0, 1e-15);
}

TEST(PhasorRow, DotParamsIsEvaluate) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int L = trial % 12;
    const auto env = oracle::random_envelope(rng, L);
    const double t = ut(rng);
    const auto row = phasor_row(L, t);
    const auto p = env.params();
    ASSERT_EQ(row.size(), p.size());
    ASSERT_EQ(p.size(), 2u * L + 1);
    double dot = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) dot += row[i] * p[i];
    EXPECT_NEAR(dot, evaluate(env, t), 1e-12);
  }
}

TEST(Params, LayoutRoundTrip) {
  const FourierEnvelope env(1.0, {2.0, 3.0}, {4.0, 5.0});
  EXPECT_EQ(env.params(), (std::vector<double>{1, 2, 3, 4, 5}));
  EXPECT_EQ(FourierEnvelope::from_params(env.params()), env);
}

TEST(Params, RejectsEvenLength) {
  const std::vector<double> p{1.0, 2.0};
  EXPECT_THROW(FourierEnvelope::from_params(p), Error);
  EXPECT_THROW(FourierEnvelope(0.0, {1.0}, {}), Error);
}

TEST(DerivativeBound, Examples) {
  EXPECT_EQ(derivative_bound(FourierEnvelope(5.0)), 0.0);
  EXPECT_NEAR(derivative_bound(third_cos()), 4.0 * kPi / 3.0, 1e-14);
  // (0, re 0, im -1/2) is sin(2 pi t).
  const FourierEnvelope sine(0.0, {0.0}, {-0.5});
  EXPECT_NEAR(evaluate(sine, 0.25), 1.0, 1e-15);
  EXPECT_NEAR(derivative_bound(sine), 2.0 * kPi, 1e-14);
}

TEST(DerivativeBound, DominatesSampledSlope) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const auto env = oracle::random_envelope(rng, 1 + trial % 8);
    double max_fd = 0.0;
    const int m = 4096;
    for (int i = 0; i < m; ++i) {
      const double a = evaluate(env, static_cast<double>(i) / m);
      const double b = evaluate(env, static_cast<double>(i + 1) / m);
      max_fd = std::max(max_fd, std::abs(b - a) * m);
    }
    EXPECT_LE(max_fd, derivative_bound(env) + 1e-6);
  }
}

TEST(DerivativeBound, NeverExceedsAprioriAtEqualEnergy) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const int L = trial % 10;
    const auto env = oracle::random_envelope(rng, L);
    EXPECT_LE(derivative_bound(env), apriori_derivative_bound(L, std::sqrt(energy(env))) + 1e-12);
  }
}

TEST(AprioriDerivativeBound, Examples) {
  EXPECT_EQ(apriori_derivative_bound(0, 7.0), 0.0);
  EXPECT_NEAR(apriori_derivative_bound(1, 1.0), 2.0 * kPi * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(apriori_derivative_bound(1, 1.0), 10.8828, 1e-4);
  // cos(2 pi t) has sup slope 2 pi.
  const FourierEnvelope cosine(0.0, {0.5}, {0.0});
  EXPECT_GE(apriori_derivative_bound(1, 1.0), derivative_bound(cosine));
  EXPECT_NEAR(derivative_bound(cosine), 2.0 * kPi, 1e-14);
}

}  // namespace
}  // namespace envlp
