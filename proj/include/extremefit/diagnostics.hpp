#pragma once

#include <span>
#include <string>
#include <vector>

#include "extremefit/model.hpp"
#include "extremefit/optimize.hpp"
#include "extremefit/samplers.hpp"

namespace extremefit {

struct Diagnostic {
  double value = 0.0;
  // Zero within-chain variance (rhat = +inf) or constant draws (ess = 0).
  bool degenerate = false;
};

// Split-chain potential scale reduction. Every sequence needs length >= 4.
Diagnostic split_rhat(std::span<const std::vector<double>> sequences);
Diagnostic split_rhat(std::span<const Chain> chains, std::size_t param);

// N / (1 + 2 sum rho_k) with Geyer's initial positive and monotone sequence
// truncation. Needs at least 10 draws. Capped at 1.25 N for antithetic chains.
Diagnostic ess(std::span<const double> draws);
Diagnostic ess(const Chain& chain, std::size_t param);
// Sum of per-chain ESS.
Diagnostic pooled_ess(std::span<const Chain> chains, std::size_t param);

// Linear interpolation between order statistics: h = (N - 1) p.
double sample_quantile(std::span<const double> sorted, double p);

struct SummaryRow {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
  Diagnostic rhat;
  Diagnostic ess;
};

// Chains must hold full parameter vectors of `spec`.
std::vector<SummaryRow> posterior_summary(std::span<const Chain> chains, const ModelSpec& spec);

struct DicResult {
  double dic = 0.0;
  double p_d = 0.0;
  double mean_deviance = 0.0;
  double deviance_at_mean = 0.0;
};

// Deviance D = 2 nll. DIC = D(posterior mean) + 2 p_D, p_D = mean(D) - D(posterior mean).
DicResult dic(std::span<const Chain> chains, const ModelSpec& spec);

struct LrtResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  double nll_null = 0.0;
  double nll_alt = 0.0;
};

// Checks that `alt` nests `null`; throws DomainError otherwise or when df = 0.
int nested_df(const ModelSpec& null, const ModelSpec& alt);
LrtResult lrt_from_fits(const ModelSpec& null, const ModelSpec& alt, double nll_null,
                        double nll_alt);
// Fits both models by maximum likelihood. The alternative is also started from
// the embedded null optimum so the comparison never loses to the optimizer.
LrtResult lrt(const ModelSpec& null, const ModelSpec& alt);

// Per-observation level exceeded with probability 1 / return_period.
std::vector<double> return_levels(const ModelSpec& spec, std::span<const double> theta,
                                  double return_period);

}  // namespace extremefit
