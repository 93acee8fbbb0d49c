#include "extremefit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "extremefit/errors.hpp"

namespace extremefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEssCap = 1.25;

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance_of(std::span<const double> x, double mean) {
  if (x.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size() - 1);
}

std::vector<double> pooled_column(std::span<const Chain> chains, std::size_t param) {
  std::vector<double> all;
  for (const auto& c : chains) {
    const auto col = c.column(param);
    all.insert(all.end(), col.begin(), col.end());
  }
  return all;
}

}  // namespace

Diagnostic split_rhat(std::span<const std::vector<double>> sequences) {
  if (sequences.empty()) throw DomainError("split_rhat needs at least one chain");
  std::size_t half = std::numeric_limits<std::size_t>::max();
  for (const auto& s : sequences) {
    if (s.size() < 4) throw DomainError("split_rhat needs chains of length >= 4");
    half = std::min(half, s.size() / 2);
  }
  std::vector<std::span<const double>> parts;
  for (const auto& s : sequences) {
    // Odd lengths drop the middle draw.
    parts.emplace_back(s.data(), half);
    parts.emplace_back(s.data() + s.size() - half, half);
  }
  const double n = static_cast<double>(half);
  std::vector<double> means;
  double within = 0.0;
  for (const auto& p : parts) {
    means.push_back(mean_of(p));
    within += variance_of(p, means.back());
  }
  within /= static_cast<double>(parts.size());
  const double between = n * variance_of(means, mean_of(means));
  if (!(within > 0.0)) return {kInf, true};
  return {std::sqrt(((n - 1.0) / n * within + between / n) / within), false};
}

Diagnostic split_rhat(std::span<const Chain> chains, std::size_t param) {
  std::vector<std::vector<double>> seqs;
  for (const auto& c : chains) seqs.push_back(c.column(param));
  return split_rhat(seqs);
}

Diagnostic ess(std::span<const double> draws) {
  const std::size_t n = draws.size();
  if (n < 10) throw DomainError("ess needs at least 10 draws");
  const double mean = mean_of(draws);
  std::vector<double> centred(n);
  for (std::size_t i = 0; i < n; ++i) centred[i] = draws[i] - mean;

  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += centred[i] * centred[i + lag];
    return s / static_cast<double>(n);
  };
  const double gamma0 = autocov(0);
  if (!(gamma0 > 0.0)) return {0.0, true};

  // Pair sums P_k = rho_{2k} + rho_{2k+1}; stop at the first negative pair and
  // force the sequence to be non-increasing.
  double sum_pairs = 0.0;
  double prev_pair = kInf;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    const double rho_even = k == 0 ? 1.0 : autocov(2 * k) / gamma0;
    const double rho_odd = autocov(2 * k + 1) / gamma0;
    double pair = rho_even + rho_odd;
    if (pair < 0.0) break;
    pair = std::min(pair, prev_pair);
    sum_pairs += pair;
    prev_pair = pair;
  }
  const double tau = std::max(-1.0 + 2.0 * sum_pairs, 1.0 / kEssCap);
  return {static_cast<double>(n) / tau, false};
}

Diagnostic ess(const Chain& chain, std::size_t param) { return ess(chain.column(param)); }

Diagnostic pooled_ess(std::span<const Chain> chains, std::size_t param) {
  Diagnostic total{0.0, false};
  for (const auto& c : chains) {
    const Diagnostic d = ess(c, param);
    total.value += d.value;
    total.degenerate = total.degenerate || d.degenerate;
  }
  return total;
}

double sample_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<SummaryRow> posterior_summary(std::span<const Chain> chains, const ModelSpec& spec) {
  if (chains.empty()) throw DomainError("posterior_summary needs at least one chain");
  const auto names = param_names(spec);
  for (const auto& c : chains) {
    if (c.dim != names.size()) throw DomainError("chain dimension does not match the model");
  }
  std::size_t shortest = std::numeric_limits<std::size_t>::max();
  for (const auto& c : chains) shortest = std::min(shortest, c.size());

  std::vector<SummaryRow> rows;
  for (std::size_t j = 0; j < names.size(); ++j) {
    SummaryRow row;
    row.name = names[j];
    std::vector<double> all = pooled_column(chains, j);
    row.mean = mean_of(all);
    row.sd = std::sqrt(variance_of(all, row.mean));
    std::sort(all.begin(), all.end());
    row.q05 = sample_quantile(all, 0.05);
    row.q50 = sample_quantile(all, 0.50);
    row.q95 = sample_quantile(all, 0.95);
    row.rhat = shortest >= 4 ? split_rhat(chains, j) : Diagnostic{kNaN, true};
    row.ess = shortest >= 10 ? pooled_ess(chains, j) : Diagnostic{kNaN, true};
    rows.push_back(std::move(row));
  }
  return rows;
}

DicResult dic(std::span<const Chain> chains, const ModelSpec& spec) {
  const std::size_t dim = param_dim(spec);
  std::size_t total = 0;
  std::vector<double> mean(dim, 0.0);
  double deviance_sum = 0.0;
  for (const auto& c : chains) {
    if (c.dim != dim) throw DomainError("chain dimension does not match the model");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto row = c.row(i);
      for (std::size_t j = 0; j < dim; ++j) mean[j] += row[j];
      deviance_sum += 2.0 * neg_log_likelihood(spec, row);
      ++total;
    }
  }
  if (total < 100) throw DomainError("dic needs at least 100 retained samples");
  for (double& m : mean) m /= static_cast<double>(total);

  DicResult r;
  r.mean_deviance = deviance_sum / static_cast<double>(total);
  const double nll_at_mean = neg_log_likelihood(spec, mean);
  if (!std::isfinite(nll_at_mean)) {
    throw NumericalError("dic: posterior mean lies outside the support of the data");
  }
  r.deviance_at_mean = 2.0 * nll_at_mean;
  r.p_d = r.mean_deviance - r.deviance_at_mean;
  r.dic = r.deviance_at_mean + 2.0 * r.p_d;
  return r;
}

int nested_df(const ModelSpec& null, const ModelSpec& alt) {
  if (null.family != alt.family || null.data != alt.data) {
    throw DomainError("lrt: models must share data and family");
  }
  if (null.covariates.rows() != alt.covariates.rows() ||
      null.covariates.cols() != alt.covariates.cols()) {
    throw DomainError("lrt: models must share the covariate matrix");
  }
  if (null.config.loc > alt.config.loc || null.config.scale > alt.config.scale ||
      null.config.shape > alt.config.shape) {
    throw DomainError("lrt: null config is not elementwise <= alternative config");
  }
  // Throws if the null's covariate columns are not a subset of the alternative's.
  const std::vector<double> probe = pack_stationary(null, ParamTriple{0.0, 1.0, 0.0});
  (void)embed_theta(null, alt, probe);
  const int df = static_cast<int>(param_dim(alt)) - static_cast<int>(param_dim(null));
  if (df <= 0) throw DomainError("lrt: models have the same dimension (df = 0)");
  return df;
}

LrtResult lrt_from_fits(const ModelSpec& null, const ModelSpec& alt, double nll_null,
                        double nll_alt) {
  LrtResult r;
  r.df = nested_df(null, alt);
  r.nll_null = nll_null;
  r.nll_alt = nll_alt;
  r.statistic = std::max(0.0, 2.0 * (nll_null - nll_alt));
  r.p_value = chi2_sf(r.statistic, r.df);
  return r;
}

LrtResult lrt(const ModelSpec& null, const ModelSpec& alt) {
  nested_df(null, alt);
  const FitResult fit_null = fit_mle(null);
  FitResult fit_alt = fit_mle(alt);
  const Bounds alt_bounds = infer_bounds(alt);
  std::vector<double> embedded = embed_theta(null, alt, fit_null.theta_hat);
  if (alt_bounds.contains(embedded)) {
    FitResult from_null = fit_mle(alt, embedded, alt_bounds);
    if (from_null.nll_min < fit_alt.nll_min) fit_alt = std::move(from_null);
  }
  if (!fit_null.converged || !fit_alt.converged) {
    throw NumericalError("lrt: maximum likelihood fit did not converge");
  }
  return lrt_from_fits(null, alt, fit_null.nll_min, fit_alt.nll_min);
}

std::vector<double> return_levels(const ModelSpec& spec, std::span<const double> theta,
                                  double return_period) {
  if (!(return_period > 1.0)) throw DomainError("return period must exceed 1");
  const double p = 1.0 - 1.0 / return_period;
  const auto triples = realize(spec, theta);
  std::vector<double> levels(triples.size());
  for (std::size_t t = 0; t < triples.size(); ++t) {
    levels[t] = quantile(spec.family, p, triples[t]);
  }
  return levels;
}

}  // namespace extremefit
