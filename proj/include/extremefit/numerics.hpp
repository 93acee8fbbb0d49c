#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace extremefit {

// ln Gamma(x) for x > 0 (Lanczos, g = 607/128, 15 terms). Throws DomainError for x <= 0.
double log_gamma(double x);

// Regularized lower incomplete gamma P(a, x). Series for x < a + 1,
// Lentz continued fraction for the complement otherwise.
double reg_lower_inc_gamma(double a, double x);

double chi2_cdf(double x, int df);
// Upper tail 1 - P(df/2, x/2), evaluated from the continued fraction when
// that is the more accurate side.
double chi2_sf(double x, int df);

/// Seedable, splittable random source.
///
/// The engine is std::mt19937_64 seeded through std::seed_seq with the four
/// 32-bit halves of (seed, stream_id). Both algorithms are fully specified by
/// the C++ standard, so a given (seed, stream_id) reproduces the same sequence
/// on every conforming platform. Chains use stream_id = chain index.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream_id);

  // Uniform on the open interval (0, 1): 53 random bits plus a half-ulp offset.
  double uniform();
  // Standard normal via the Marsaglia polar method; the second variate of
  // each pair is cached.
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

using ScalarFunction = std::function<double(std::span<const double>)>;

inline constexpr double kDefaultDiffStep = 1e-6;

// Central differences with h_i = max(h_rel, h_rel * |theta_i|). Throws
// NumericalError naming the component if f is non-finite at a perturbed point.
std::vector<double> central_diff_grad(const ScalarFunction& f, std::span<const double> theta,
                                      double h_rel = kDefaultDiffStep);

}  // namespace extremefit
