#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "extremefit/errors.hpp"
#include "extremefit/lmoments.hpp"

namespace extremefit {
namespace {

std::vector<double> simulate(EvdFamily family, const ParamTriple& p, std::size_t n,
                             std::uint64_t seed) {
  Rng rng(seed, 0);
  std::vector<double> x(n);
  for (double& v : x) v = sample(family, p, rng);
  return x;
}

TEST(SampleLmoments, HandEvaluated) {
  // b0 = 2.5, b1 = (1/4)(0 + 2/3 + 6/3 + 12/3) = 5/3, b2 = (1/4)(0 + 0 + 3/3 + 8/3) = 11/12.
  const auto lm = sample_lmoments(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  EXPECT_NEAR(lm.l1, 2.5, 1e-14);
  EXPECT_NEAR(lm.l2, 0.8333333333333333, 1e-12);
  EXPECT_NEAR(lm.t3, 0.0, 1e-14);
}

TEST(SampleLmoments, Errors) {
  EXPECT_THROW(sample_lmoments(std::vector<double>{5.0, 5.0, 5.0, 5.0}), NumericalError);
  EXPECT_THROW(sample_lmoments(std::vector<double>{1.0, 2.0, 3.0}), DomainError);
}

TEST(SampleLmoments, AffineEquivariantAndPermutationInvariant) {
  auto x = simulate(EvdFamily::GEV, {0.0, 1.0, 0.1}, 500, 1);
  const auto lm = sample_lmoments(x);
  std::vector<double> y(x.size());
  std::transform(x.begin(), x.end(), y.begin(), [](double v) { return 3.0 * v - 7.0; });
  const auto ly = sample_lmoments(y);
  EXPECT_NEAR(ly.l1, 3.0 * lm.l1 - 7.0, 1e-10);
  EXPECT_NEAR(ly.l2, 3.0 * lm.l2, 1e-10);
  EXPECT_NEAR(ly.t3, lm.t3, 1e-10);

  std::mt19937_64 gen(2);
  std::shuffle(x.begin(), x.end(), gen);
  const auto shuffled = sample_lmoments(x);
  EXPECT_NEAR(shuffled.l1, lm.l1, 1e-12);
  EXPECT_NEAR(shuffled.l2, lm.l2, 1e-12);
  EXPECT_NEAR(shuffled.t3, lm.t3, 1e-12);
}

TEST(GevFromLmoments, GumbelLimitAtRootOfC) {
  // 2 / (3 + t3) = ln2 / ln3 at t3 = 2 ln3 / ln2 - 3.
  const double t3 = 2.0 * std::log(3.0) / std::numbers::ln2 - 3.0;
  const auto p = gev_from_lmoments({1.0, 0.5, t3});
  EXPECT_EQ(p.shape, 0.0);
  EXPECT_NEAR(p.scale, 0.5 / std::numbers::ln2, 1e-14);
  EXPECT_NEAR(p.loc, 1.0 - p.scale * std::numbers::egamma, 1e-14);
  // The root rounded to six places also lands in the limit branch.
  EXPECT_EQ(gev_from_lmoments({1.0, 0.5, 0.169925}).shape, 0.0);
}

TEST(GevFromLmoments, SimulatedGumbel) {
  const auto x = simulate(EvdFamily::GEV, {0.0, 1.0, 0.0}, 100000, 7);
  const auto p = gev_from_lmoments(sample_lmoments(x));
  EXPECT_NEAR(p.loc, 0.0, 0.02);
  EXPECT_NEAR(p.scale, 1.0, 0.02);
  EXPECT_NEAR(p.shape, 0.0, 0.03);
}

TEST(GevFromLmoments, ShiftEquivariant) {
  const auto lm = sample_lmoments(simulate(EvdFamily::GEV, {0.0, 2.0, -0.1}, 2000, 3));
  const auto a = gev_from_lmoments(lm);
  const auto b = gev_from_lmoments({lm.l1 + 4.0, lm.l2, lm.t3});
  EXPECT_NEAR(b.loc, a.loc + 4.0, 1e-12);
  EXPECT_NEAR(b.scale, a.scale, 1e-12);
  EXPECT_NEAR(b.shape, a.shape, 1e-12);
  EXPECT_THROW(gev_from_lmoments({0.0, 0.0, 0.1}), DomainError);
}

TEST(GevFromLmoments, RecoversRandomParameters) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> loc(-20.0, 20.0);
  std::uniform_real_distribution<double> scale(0.5, 10.0);
  std::uniform_real_distribution<double> shape(-0.3, 0.3);
  for (int i = 0; i < 20; ++i) {
    const ParamTriple truth{loc(gen), scale(gen), shape(gen)};
    const auto p = gev_from_lmoments(
        sample_lmoments(simulate(EvdFamily::GEV, truth, 100000, 100 + i)));
    EXPECT_LT(std::abs(p.loc - truth.loc), 0.05 * truth.scale);
    EXPECT_LT(std::abs(p.scale / truth.scale - 1.0), 0.05);
    EXPECT_LT(std::abs(p.shape - truth.shape), 0.05);
  }
}

TEST(GpdFromLmoments, Formulas) {
  const auto e = gpd_from_lmoments({1.0, 0.5, 0.0}, 0.0);
  EXPECT_NEAR(e.shape, 0.0, 1e-15);
  EXPECT_NEAR(e.scale, 1.0, 1e-15);
  const auto h = gpd_from_lmoments({1.0, 0.4, 0.0}, 2.0);
  EXPECT_NEAR(h.shape, -0.5, 1e-15);
  EXPECT_NEAR(h.scale, 1.5, 1e-15);
  EXPECT_EQ(h.loc, 2.0);
  EXPECT_THROW(gpd_from_lmoments({1.0, -0.1, 0.0}, 0.0), DomainError);
}

TEST(GpdFromLmoments, SimulatedExcesses) {
  const auto x = simulate(EvdFamily::GPD, {0.0, 1.0, 0.2}, 100000, 21);
  const auto p = gpd_from_lmoments(sample_lmoments(x), 0.0);
  EXPECT_NEAR(p.scale, 1.0, 0.05);
  EXPECT_NEAR(p.shape, 0.2, 0.05);
}

TEST(StationaryFit, UsesThresholdForGpd) {
  ModelSpec spec;
  spec.family = EvdFamily::GPD;
  spec.threshold = 10.0;
  spec.data = simulate(EvdFamily::GPD, {10.0, 2.0, 0.1}, 20000, 8);
  const auto p = stationary_lmoment_fit(spec);
  EXPECT_EQ(p.loc, 10.0);
  EXPECT_NEAR(p.scale, 2.0, 0.1);
}

}  // namespace
}  // namespace extremefit
