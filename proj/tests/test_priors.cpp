#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "extremefit/errors.hpp"
#include "extremefit/lmoments.hpp"
#include "extremefit/priors.hpp"
#include "oracles.hpp"

namespace extremefit {
namespace {

ModelSpec gumbel_spec(Config config, std::size_t n = 2000) {
  ModelSpec spec;
  spec.config = config;
  Rng rng(5, 0);
  for (std::size_t i = 0; i < n; ++i) spec.data.push_back(sample(EvdFamily::GEV, {10.0, 5.0, 0.0}, rng));
  spec.covariates = Matrix(n, 1);
  for (std::size_t t = 0; t < n; ++t) spec.covariates(t, 0) = static_cast<double>(t);
  return spec;
}

TEST(DefaultPriors, CentredOnLmomentFit) {
  const auto priors = default_priors(gumbel_spec({0, 0, 0}));
  ASSERT_EQ(priors.size(), 3u);
  EXPECT_NEAR(priors[0].a, 10.0, 0.5);
  EXPECT_EQ(priors[2].kind, PriorComponent::Kind::Normal);
  EXPECT_EQ(priors[2].a, 0.0);
  EXPECT_EQ(priors[2].b, 0.25);
}

TEST(DefaultPriors, SlopesScaleWithCovariateSd) {
  EXPECT_EQ(default_priors(gumbel_spec({1, 0, 0})).size(), 4u);

  ModelSpec spec = gumbel_spec({1, 0, 0}, 1000);
  // Standardize the column: sd 1 gives a Normal(0, 1) slope prior.
  double mean = 0.0;
  for (std::size_t t = 0; t < 1000; ++t) mean += spec.covariates(t, 0) / 1000.0;
  double ss = 0.0;
  for (std::size_t t = 0; t < 1000; ++t) ss += std::pow(spec.covariates(t, 0) - mean, 2);
  const double sd = std::sqrt(ss / 999.0);
  for (std::size_t t = 0; t < 1000; ++t) spec.covariates(t, 0) = (spec.covariates(t, 0) - mean) / sd;
  const auto priors = default_priors(spec);
  EXPECT_NEAR(priors[1].a, 0.0, 0.0);
  EXPECT_NEAR(priors[1].b, 1.0, 1e-12);
}

TEST(DefaultPriors, LogScaleIntercept) {
  const ModelSpec spec = gumbel_spec({0, 1, 0});
  const auto priors = default_priors(spec);
  const auto fit = stationary_lmoment_fit(spec);
  EXPECT_NEAR(priors[1].a, std::log(fit.scale), 1e-14);
  EXPECT_EQ(priors[1].b, 1.0);
}

TEST(DefaultPriors, FiniteAtLmomentStart) {
  for (Config c : {Config{0, 0, 0}, Config{1, 0, 0}, Config{1, 1, 1}}) {
    const ModelSpec spec = gumbel_spec(c);
    const auto start = pack_stationary(spec, stationary_lmoment_fit(spec));
    EXPECT_TRUE(std::isfinite(log_prior(default_priors(spec), start)));
  }
}

TEST(LogPrior, Examples) {
  const PriorSet std_normal{PriorComponent::normal(0.0, 1.0)};
  EXPECT_NEAR(log_prior(std_normal, std::vector<double>{0.0}), -0.91893853320467274, 1e-12);
  const PriorSet unif{PriorComponent::uniform(0.0, 2.0)};
  EXPECT_EQ(log_prior(unif, std::vector<double>{3.0}), -std::numeric_limits<double>::infinity());
  EXPECT_NEAR(log_prior(unif, std::vector<double>{1.0}), -std::log(2.0), 1e-15);

  const PriorSet both{PriorComponent::normal(1.0, 2.0), PriorComponent::uniform(-1.0, 3.0)};
  const double sum = log_prior({both[0]}, std::vector<double>{0.3}) +
                     log_prior({both[1]}, std::vector<double>{2.0});
  EXPECT_EQ(log_prior(both, std::vector<double>{0.3, 2.0}), sum);
  EXPECT_THROW(log_prior(both, std::vector<double>{0.3}), DomainError);
}

TEST(GradLogPrior, Examples) {
  EXPECT_EQ(grad_log_prior({PriorComponent::normal(0.0, 1.0)}, std::vector<double>{0.0})[0], 0.0);
  EXPECT_NEAR(grad_log_prior({PriorComponent::normal(2.0, 0.5)}, std::vector<double>{3.0})[0],
              -4.0, 1e-15);
  EXPECT_THROW(grad_log_prior({PriorComponent::uniform(0.0, 1.0)}, std::vector<double>{2.0}),
               DomainError);
}

TEST(GradLogPrior, MatchesCentralDifferences) {
  const PriorSet priors{PriorComponent::normal(1.0, 0.3), PriorComponent::uniform(-5.0, 5.0),
                        PriorComponent::normal(-2.0, 4.0)};
  const std::vector<double> theta{0.4, 1.0, 3.0};
  const ScalarFunction f = [&](std::span<const double> t) { return log_prior(priors, t); };
  const auto fd = central_diff_grad(f, theta);
  const auto g = grad_log_prior(priors, theta);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(testing::rel_err(g[i], fd[i]), 1e-6);
}

TEST(PriorJson, ParsesAndRejects) {
  const auto p = parse_priors_json(
      R"([{"kind": "normal", "a": 10, "b": 2}, {"kind": "uniform", "a": 0, "b": 5}])");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].kind, PriorComponent::Kind::Normal);
  EXPECT_EQ(p[1].b, 5.0);
  EXPECT_THROW(parse_priors_json(R"([{"kind": "normal", "a": 0, "b": -1}])"), ConfigError);
  EXPECT_THROW(parse_priors_json(R"([{"kind": "cauchy", "a": 0, "b": 1}])"), ConfigError);
  EXPECT_THROW(parse_priors_json(R"({"kind": "normal"})"), ConfigError);
  EXPECT_THROW(parse_priors_json("not json"), ConfigError);
}

}  // namespace
}  // namespace extremefit
