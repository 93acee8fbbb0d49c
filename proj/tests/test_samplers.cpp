#include <gtest/gtest.h>

#include <cmath>

#include "extremefit/errors.hpp"
#include "extremefit/samplers.hpp"
#include "oracles.hpp"

namespace extremefit {
namespace {

Target normal_target(double mean, double temperature = 1.0) {
  Target t;
  t.log_post = [mean](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s -= 0.5 * (v - mean) * (v - mean);
    return s;
  };
  t.grad_log_post = [mean](std::span<const double> x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = mean - x[i];
    return g;
  };
  t.temperature = temperature;
  return t;
}

TEST(AcceptProb, Examples) {
  EXPECT_EQ(mh_accept_prob(0.0, 1.0), 1.0);
  EXPECT_EQ(mh_accept_prob(0.0, 7.5), 1.0);
  EXPECT_NEAR(mh_accept_prob(-2.0, 1.0), 0.1353352832366127, 1e-15);
  EXPECT_NEAR(mh_accept_prob(-2.0, 2.0), 0.36787944117144233, 1e-15);
  EXPECT_EQ(mh_accept_prob(3.0, 1.0), 1.0);
}

TEST(RandomWalk, StandardNormalMoments) {
  Rng rng(1, 0);
  const auto chain = mh_random_walk(normal_target(0.0), std::vector<double>{0.0},
                                    std::vector<double>{2.4}, rng, {100000, 1000, 1});
  ASSERT_EQ(chain.size(), 100000u);
  const auto x = chain.column(0);
  EXPECT_NEAR(testing::mean(x), 0.0, 0.02);
  EXPECT_NEAR(testing::variance(x), 1.0, 0.05);
  EXPECT_GT(chain.acceptance_rate, 0.3);
  EXPECT_LT(chain.acceptance_rate, 0.6);
}

TEST(RandomWalk, ThinningAndInitError) {
  Rng rng(2, 0);
  const auto chain = mh_random_walk(normal_target(0.0), std::vector<double>{0.0},
                                    std::vector<double>{1.0}, rng, {50, std::nullopt, 3});
  EXPECT_EQ(chain.size(), 50u);
  Target bad = normal_target(0.0);
  bad.log_post = [](std::span<const double>) { return -std::numeric_limits<double>::infinity(); };
  EXPECT_THROW(mh_random_walk(bad, std::vector<double>{0.0}, std::vector<double>{1.0}, rng,
                              {10, 0, 1}),
               NumericalError);
}

TEST(RandomWalk, NeverStoresInfiniteState) {
  Target half = normal_target(0.0);
  half.log_post = [](std::span<const double> x) {
    return x[0] < 0.0 ? -std::numeric_limits<double>::infinity() : -0.5 * x[0] * x[0];
  };
  Rng rng(3, 0);
  const auto chain =
      mh_random_walk(half, std::vector<double>{1.0}, std::vector<double>{1.0}, rng, {5000, 100, 1});
  for (double v : chain.log_post) EXPECT_TRUE(std::isfinite(v));
  for (double v : chain.column(0)) EXPECT_GE(v, 0.0);
}

TEST(Mala, ProposalMean) {
  const std::vector<double> steps{0.5};
  const double tau = 0.125;
  EXPECT_NEAR(mala_proposal_mean(normal_target(3.0), std::vector<double>{0.0}, steps)[0], tau * 3.0,
              1e-15);
  EXPECT_NEAR(mala_proposal_mean(normal_target(3.0, 2.0), std::vector<double>{0.0}, steps)[0],
              tau * 1.5, 1e-15);
  EXPECT_EQ(mala_proposal_mean(normal_target(0.0), std::vector<double>{0.0}, steps)[0], 0.0);
}

TEST(Mala, StandardNormalVariance) {
  Rng rng(4, 0);
  const auto chain = mala(normal_target(0.0), std::vector<double>{0.0}, std::vector<double>{1.5},
                          rng, {100000, 1000, 1});
  const auto x = chain.column(0);
  EXPECT_NEAR(testing::mean(x), 0.0, 0.02);
  EXPECT_NEAR(testing::variance(x), 1.0, 0.05);
}

TEST(Mala, NonFiniteGradientRejected) {
  Target t = normal_target(0.0);
  t.grad_log_post = [](std::span<const double> x) {
    return std::vector<double>{std::abs(x[0]) > 1.0 ? std::nan("") : -x[0]};
  };
  Rng rng(5, 0);
  const auto chain = mala(t, std::vector<double>{0.0}, std::vector<double>{1.0}, rng, {2000, 0, 1});
  EXPECT_GT(chain.divergent, 0u);
  for (double v : chain.column(0)) EXPECT_LE(std::abs(v), 1.0);
}

TEST(Leapfrog, Reversible) {
  const Target t = normal_target(0.5);
  const std::vector<double> mass{1.0, 2.0};
  const auto fwd = leapfrog(t, std::vector<double>{1.0, -0.3}, std::vector<double>{0.2, 0.7}, 0.1,
                            25, mass);
  std::vector<double> back_p = fwd.momentum;
  for (double& v : back_p) v = -v;
  const auto back = leapfrog(t, fwd.theta, back_p, 0.1, 25, mass);
  EXPECT_NEAR(back.theta[0], 1.0, 1e-10);
  EXPECT_NEAR(back.theta[1], -0.3, 1e-10);
  EXPECT_NEAR(-back.momentum[0], 0.2, 1e-10);
  EXPECT_NEAR(-back.momentum[1], 0.7, 1e-10);
}

TEST(Leapfrog, FixedPointAtMode) {
  const auto r = leapfrog(normal_target(2.0), std::vector<double>{2.0}, std::vector<double>{0.0},
                          0.3, 10, std::vector<double>{1.0});
  EXPECT_EQ(r.theta[0], 2.0);
  EXPECT_EQ(r.momentum[0], 0.0);
}

TEST(Leapfrog, SecondOrderEnergyError) {
  const Target t = normal_target(0.0);
  const std::vector<double> theta{1.0};
  const std::vector<double> p{0.5};
  const std::vector<double> mass{1.0};
  const double h0 = hamiltonian(t, theta, p, mass);
  auto energy_error = [&](double eps) {
    const int steps = static_cast<int>(std::lround(1.0 / eps));
    const auto r = leapfrog(t, theta, p, eps, steps, mass);
    return std::abs(hamiltonian(t, r.theta, r.momentum, mass) - h0);
  };
  const double ratio = energy_error(0.1) / energy_error(0.05);
  EXPECT_GT(ratio, 3.0);
  EXPECT_LT(ratio, 5.0);
}

TEST(Hmc, TinyStepAcceptsNearlyAll) {
  Rng rng(6, 0);
  const auto chain = hmc(normal_target(0.0), std::vector<double>{0.0, 0.0}, 1e-4, 10,
                         std::vector<double>{1.0, 1.0}, rng, {2000, 0, 1});
  EXPECT_GT(chain.acceptance_rate, 0.999);
}

TEST(Hmc, OneStepMatchesMalaAcceptance) {
  // With unit mass, L = 1 leapfrog is MALA with step size eps.
  const double eps = 1.6;
  Rng a(7, 0);
  Rng b(7, 1);
  const auto h = hmc(normal_target(0.0), std::vector<double>{0.0}, eps, 1, std::vector<double>{1.0},
                     a, {50000, 1000, 1});
  const auto m = mala(normal_target(0.0), std::vector<double>{0.0}, std::vector<double>{eps}, b,
                      {50000, 1000, 1});
  EXPECT_NEAR(h.acceptance_rate, m.acceptance_rate, 0.05);
}

TEST(Samplers, DeterministicPerStream) {
  const Target t = normal_target(1.0);
  const std::vector<double> init{0.0, 0.0};
  const std::vector<double> steps{0.8, 0.8};
  for (int kind = 0; kind < 3; ++kind) {
    auto run = [&](std::uint64_t stream) {
      Rng rng(99, stream);
      const RunLength len{500, 50, 2};
      if (kind == 0) return mh_random_walk(t, init, steps, rng, len);
      if (kind == 1) return mala(t, init, steps, rng, len);
      return hmc(t, init, 0.3, 5, std::vector<double>{1.0, 1.0}, rng, len);
    };
    const auto a = run(0);
    const auto b = run(0);
    const auto c = run(1);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_EQ(a.acceptance_rate, b.acceptance_rate);
    EXPECT_NE(a.samples, c.samples);
  }
}

TEST(Samplers, StationaritySmoke) {
  Rng init_rng(11, 5);
  const std::vector<double> init{init_rng.normal()};
  Rng rng(11, 0);
  const auto chain = mh_random_walk(normal_target(0.0), init, std::vector<double>{2.4}, rng,
                                    {1000, 0, 1});
  const auto x = chain.column(0);
  // Integrated autocorrelation time of this kernel is about 3.
  EXPECT_LT(std::abs(testing::mean(x)), 4.0 * std::sqrt(3.0 / 1000.0));
}

TEST(Samplers, ParseNames) {
  EXPECT_EQ(parse_sampler("mala"), SamplerKind::MALA);
  EXPECT_EQ(to_string(SamplerKind::HMC), "hmc");
  EXPECT_THROW(parse_sampler("nuts"), ConfigError);
}

TEST(PosteriorTarget, TemperedAndSafe) {
  ModelSpec spec;
  spec.data = {0.1, 0.5, 1.2, 2.0, -0.3};
  spec.covariates = Matrix(5, 0);
  const PriorSet priors{PriorComponent::normal(0.0, 10.0), PriorComponent::uniform(0.0, 10.0),
                        PriorComponent::normal(0.0, 0.25)};
  const Target t = make_posterior_target(spec, priors, 2.0);
  EXPECT_EQ(t.temperature, 2.0);
  const std::vector<double> theta{0.3, 1.0, 0.1};
  EXPECT_NEAR(t.log_post(theta), -neg_log_likelihood(spec, theta) + log_prior(priors, theta), 1e-12);
  EXPECT_EQ(t.log_post(std::vector<double>{0.3, -1.0, 0.1}), -std::numeric_limits<double>::infinity());
  EXPECT_TRUE(std::isnan(t.grad_log_post(std::vector<double>{0.3, -1.0, 0.1})[0]));
}

}  // namespace
}  // namespace extremefit
