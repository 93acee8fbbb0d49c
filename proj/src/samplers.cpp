#include "extremefit/samplers.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "extremefit/errors.hpp"

namespace extremefit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void check_run(const RunLength& run) {
  if (run.thin < 1) throw DomainError("thin must be at least 1");
  if (run.num_samples < 1) throw DomainError("num_samples must be at least 1");
}

void check_positive(std::span<const double> v, std::size_t dim, const char* what) {
  if (v.size() != dim) {
    throw DomainError(std::string(what) + " has length " + std::to_string(v.size()) +
                      ", expected " + std::to_string(dim));
  }
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive");
  }
}

double initial_log_post(const Target& target, std::span<const double> initial) {
  if (!(target.temperature > 0.0)) throw DomainError("temperature must be positive");
  const double lp = target.log_post(initial);
  if (!std::isfinite(lp)) {
    throw NumericalError("log posterior is not finite at the initial parameters");
  }
  return lp;
}

// Bookkeeping shared by the three kernels.
class ChainRecorder {
 public:
  ChainRecorder(SamplerKind kind, std::size_t dim, const RunLength& run, const Rng& rng)
      : run_(run) {
    chain_.sampler = kind;
    chain_.dim = dim;
    chain_.seed = rng.seed();
    chain_.stream_id = rng.stream_id();
    chain_.samples.reserve(run.num_samples * dim);
    chain_.log_post.reserve(run.num_samples);
  }

  std::size_t iterations() const { return run_.burn() + run_.num_samples * run_.thin; }

  void record(std::size_t iter, bool accepted, bool divergent, std::span<const double> theta,
              double lp) {
    if (iter < run_.burn()) return;
    ++proposals_;
    if (accepted) ++accepted_;
    if (divergent) ++chain_.divergent;
    if ((iter - run_.burn() + 1) % run_.thin == 0) {
      chain_.samples.insert(chain_.samples.end(), theta.begin(), theta.end());
      chain_.log_post.push_back(lp);
    }
  }

  Chain finish() {
    chain_.acceptance_rate =
        proposals_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(proposals_);
    return std::move(chain_);
  }

 private:
  RunLength run_;
  Chain chain_;
  std::size_t proposals_ = 0;
  std::size_t accepted_ = 0;
};

double kinetic(std::span<const double> momentum, std::span<const double> mass) {
  double k = 0.0;
  for (std::size_t i = 0; i < momentum.size(); ++i) k += momentum[i] * momentum[i] / mass[i];
  return 0.5 * k;
}

}  // namespace

Target make_posterior_target(const ModelSpec& spec, const PriorSet& priors, double temperature,
                             const FixedCoordinates* fixed) {
  if (priors.size() != param_dim(spec)) {
    throw ConfigError("prior set has " + std::to_string(priors.size()) +
                      " components, model expects " + std::to_string(param_dim(spec)));
  }
  auto model = std::make_shared<const ModelSpec>(spec);
  auto prior = std::make_shared<const PriorSet>(priors);
  std::shared_ptr<const FixedCoordinates> subspace;
  if (fixed != nullptr) subspace = std::make_shared<const FixedCoordinates>(*fixed);

  auto full = [subspace](std::span<const double> theta) {
    if (subspace) return subspace->expand(theta);
    return std::vector<double>(theta.begin(), theta.end());
  };

  Target target;
  target.temperature = temperature;
  target.log_post = [model, prior, full](std::span<const double> theta) {
    const std::vector<double> x = full(theta);
    if (!all_finite(x)) return kNegInf;
    const double lp = log_prior(*prior, x);
    if (!std::isfinite(lp)) return kNegInf;
    const double nll = neg_log_likelihood(*model, x);
    if (!std::isfinite(nll)) return kNegInf;
    return lp - nll;
  };
  target.grad_log_post = [model, prior, full, subspace](std::span<const double> theta) {
    const std::vector<double> x = full(theta);
    std::vector<double> grad(x.size(), std::numeric_limits<double>::quiet_NaN());
    try {
      const auto g_prior = grad_log_prior(*prior, x);
      const auto g_nll = grad_neg_log_likelihood(*model, x);
      for (std::size_t i = 0; i < x.size(); ++i) grad[i] = g_prior[i] - g_nll[i];
    } catch (const DomainError&) {
      // Outside the support: leave NaN so the proposal is rejected.
    }
    return subspace ? subspace->reduce(grad) : grad;
  };
  return target;
}

std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::RW:
      return "rw";
    case SamplerKind::MALA:
      return "mala";
    case SamplerKind::HMC:
      return "hmc";
  }
  return "rw";
}

SamplerKind parse_sampler(std::string_view name) {
  if (name == "rw") return SamplerKind::RW;
  if (name == "mala") return SamplerKind::MALA;
  if (name == "hmc") return SamplerKind::HMC;
  throw ConfigError("unknown sampler '" + std::string(name) + "' (expected rw, mala or hmc)");
}

std::vector<double> Chain::column(std::size_t j) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = samples[i * dim + j];
  return out;
}

double mh_accept_prob(double delta_log_post, double temperature) {
  if (std::isnan(delta_log_post)) return 0.0;
  const double scaled = delta_log_post / temperature;
  return scaled >= 0.0 ? 1.0 : std::exp(scaled);
}

Chain mh_random_walk(const Target& target, std::span<const double> initial,
                     std::span<const double> proposal_widths, Rng& rng, const RunLength& run) {
  const std::size_t dim = initial.size();
  check_run(run);
  check_positive(proposal_widths, dim, "proposal_widths");
  double lp = initial_log_post(target, initial);
  const double temp = target.temperature;

  std::vector<double> theta(initial.begin(), initial.end());
  std::vector<double> proposal(dim);
  ChainRecorder recorder(SamplerKind::RW, dim, run, rng);
  for (std::size_t iter = 0; iter < recorder.iterations(); ++iter) {
    for (std::size_t i = 0; i < dim; ++i) proposal[i] = theta[i] + proposal_widths[i] * rng.normal();
    const double lp_new = target.log_post(proposal);
    const double log_u = std::log(rng.uniform());
    const bool accept = std::isfinite(lp_new) && log_u < (lp_new - lp) / temp;
    if (accept) {
      theta.swap(proposal);
      lp = lp_new;
    }
    recorder.record(iter, accept, false, theta, lp);
  }
  return recorder.finish();
}

std::vector<double> mala_proposal_mean(const Target& target, std::span<const double> theta,
                                       std::span<const double> step_sizes) {
  const auto grad = target.grad_log_post(theta);
  std::vector<double> mean(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double tau = 0.5 * step_sizes[i] * step_sizes[i];
    mean[i] = theta[i] + tau * grad[i] / target.temperature;
  }
  return mean;
}

Chain mala(const Target& target, std::span<const double> initial,
           std::span<const double> step_sizes, Rng& rng, const RunLength& run) {
  const std::size_t dim = initial.size();
  check_run(run);
  check_positive(step_sizes, dim, "step_sizes");
  double lp = initial_log_post(target, initial);
  const double temp = target.temperature;

  std::vector<double> theta(initial.begin(), initial.end());
  std::vector<double> mean = mala_proposal_mean(target, theta, step_sizes);
  if (!all_finite(mean)) throw NumericalError("gradient is not finite at the initial parameters");

  // ln q(to | from) up to a constant shared by both directions.
  auto log_q = [&](std::span<const double> to, std::span<const double> from_mean) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double z = (to[i] - from_mean[i]) / step_sizes[i];
      s -= 0.5 * z * z;
    }
    return s;
  };

  std::vector<double> proposal(dim);
  ChainRecorder recorder(SamplerKind::MALA, dim, run, rng);
  for (std::size_t iter = 0; iter < recorder.iterations(); ++iter) {
    for (std::size_t i = 0; i < dim; ++i) proposal[i] = mean[i] + step_sizes[i] * rng.normal();
    const double log_u = std::log(rng.uniform());
    bool accept = false;
    bool divergent = false;
    const double lp_new = target.log_post(proposal);
    if (std::isfinite(lp_new)) {
      std::vector<double> mean_new = mala_proposal_mean(target, proposal, step_sizes);
      if (all_finite(mean_new)) {
        const double log_alpha =
            (lp_new - lp) / temp + log_q(theta, mean_new) - log_q(proposal, mean);
        if (log_u < log_alpha) {
          accept = true;
          theta = proposal;
          lp = lp_new;
          mean = std::move(mean_new);
        }
      } else {
        divergent = true;
      }
    }
    recorder.record(iter, accept, divergent, theta, lp);
  }
  return recorder.finish();
}

LeapfrogResult leapfrog(const Target& target, std::span<const double> theta,
                        std::span<const double> momentum, double eps, int steps,
                        std::span<const double> mass) {
  const std::size_t dim = theta.size();
  const double inv_temp = 1.0 / target.temperature;
  LeapfrogResult out{std::vector<double>(theta.begin(), theta.end()),
                     std::vector<double>(momentum.begin(), momentum.end()), false};
  // p += (eps * scale) * grad(log_post) / T, i.e. p -= (eps * scale) * grad U.
  auto kick = [&](double scale) {
    const auto grad = target.grad_log_post(out.theta);
    if (!all_finite(grad)) return false;
    for (std::size_t i = 0; i < dim; ++i) out.momentum[i] += scale * eps * grad[i] * inv_temp;
    return true;
  };

  if (!kick(0.5)) {
    out.divergent = true;
    return out;
  }
  for (int step = 0; step < steps; ++step) {
    for (std::size_t i = 0; i < dim; ++i) out.theta[i] += eps * out.momentum[i] / mass[i];
    if (!kick(step + 1 < steps ? 1.0 : 0.5)) {
      out.divergent = true;
      return out;
    }
  }
  return out;
}

double hamiltonian(const Target& target, std::span<const double> theta,
                   std::span<const double> momentum, std::span<const double> mass) {
  return -target.log_post(theta) / target.temperature + kinetic(momentum, mass);
}

Chain hmc(const Target& target, std::span<const double> initial, double eps, int steps,
          std::span<const double> mass, Rng& rng, const RunLength& run) {
  const std::size_t dim = initial.size();
  check_run(run);
  check_positive(mass, dim, "mass");
  if (!(eps > 0.0)) throw DomainError("leapfrog step size must be positive");
  if (steps < 1) throw DomainError("leapfrog steps must be at least 1");
  double lp = initial_log_post(target, initial);
  if (!all_finite(target.grad_log_post(initial))) {
    throw NumericalError("gradient is not finite at the initial parameters");
  }
  const double temp = target.temperature;

  std::vector<double> theta(initial.begin(), initial.end());
  std::vector<double> momentum(dim);
  ChainRecorder recorder(SamplerKind::HMC, dim, run, rng);
  for (std::size_t iter = 0; iter < recorder.iterations(); ++iter) {
    for (std::size_t i = 0; i < dim; ++i) momentum[i] = std::sqrt(mass[i]) * rng.normal();
    const double log_u = std::log(rng.uniform());
    const double h_start = -lp / temp + kinetic(momentum, mass);
    LeapfrogResult end = leapfrog(target, theta, momentum, eps, steps, mass);
    bool accept = false;
    if (!end.divergent) {
      const double lp_new = target.log_post(end.theta);
      const double h_end = -lp_new / temp + kinetic(end.momentum, mass);
      if (std::isfinite(h_end) && log_u < h_start - h_end) {
        accept = true;
        theta = std::move(end.theta);
        lp = lp_new;
      } else if (!std::isfinite(h_end)) {
        end.divergent = true;
      }
    }
    recorder.record(iter, accept, end.divergent, theta, lp);
  }
  return recorder.finish();
}

}  // namespace extremefit
