#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "extremefit/model.hpp"
#include "extremefit/numerics.hpp"
#include "extremefit/priors.hpp"

namespace extremefit {

// Posterior known up to a constant. The chain targets exp(log_post / temperature):
// the same tempering is applied in every acceptance ratio and every gradient.
struct Target {
  std::function<double(std::span<const double>)> log_post;
  // May return non-finite entries; samplers treat that as a rejected proposal.
  std::function<std::vector<double>(std::span<const double>)> grad_log_post;
  double temperature = 1.0;
};

// -nll + log_prior over the full parameter vector, or over the free
// coordinates when `fixed` is given. Support violations evaluate to -inf and
// NaN gradients instead of throwing.
Target make_posterior_target(const ModelSpec& spec, const PriorSet& priors, double temperature,
                             const FixedCoordinates* fixed = nullptr);

enum class SamplerKind { RW, MALA, HMC };
std::string_view to_string(SamplerKind kind);
SamplerKind parse_sampler(std::string_view name);

struct Chain {
  std::size_t dim = 0;
  std::vector<double> samples;   // row-major, size() x dim
  std::vector<double> log_post;  // untempered log_post of each stored sample
  double acceptance_rate = 0.0;
  std::size_t divergent = 0;
  SamplerKind sampler = SamplerKind::RW;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  std::size_t size() const { return dim == 0 ? 0 : samples.size() / dim; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(samples).subspan(i * dim, dim);
  }
  std::vector<double> column(std::size_t j) const;
};

// Retained draws = num_samples. The sampler runs burn_in + num_samples * thin
// iterations and keeps every thin-th state after burn-in. burn_in defaults to
// num_samples / 4. The acceptance rate counts post-burn-in proposals only.
struct RunLength {
  std::size_t num_samples = 1000;
  std::optional<std::size_t> burn_in;
  std::size_t thin = 1;

  std::size_t burn() const { return burn_in.value_or(num_samples / 4); }
};

// min(1, exp(delta / T)); 0 for NaN or -inf delta.
double mh_accept_prob(double delta_log_post, double temperature);

Chain mh_random_walk(const Target& target, std::span<const double> initial,
                     std::span<const double> proposal_widths, Rng& rng, const RunLength& run);

// theta + (h^2 / 2) * grad_log_post(theta) / T, per coordinate.
std::vector<double> mala_proposal_mean(const Target& target, std::span<const double> theta,
                                       std::span<const double> step_sizes);

Chain mala(const Target& target, std::span<const double> initial,
           std::span<const double> step_sizes, Rng& rng, const RunLength& run);

struct LeapfrogResult {
  std::vector<double> theta;
  std::vector<double> momentum;
  bool divergent = false;
};

// L leapfrog steps of the dynamics with potential U = -log_post / T and
// kinetic energy p' M^-1 p / 2, M = diag(mass).
LeapfrogResult leapfrog(const Target& target, std::span<const double> theta,
                        std::span<const double> momentum, double eps, int steps,
                        std::span<const double> mass);

double hamiltonian(const Target& target, std::span<const double> theta,
                   std::span<const double> momentum, std::span<const double> mass);

Chain hmc(const Target& target, std::span<const double> initial, double eps, int steps,
          std::span<const double> mass, Rng& rng, const RunLength& run);

}  // namespace extremefit
