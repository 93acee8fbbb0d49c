#include "extremefit/lmoments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "extremefit/errors.hpp"
#include "extremefit/numerics.hpp"

namespace extremefit {

namespace {

constexpr double kGumbelSwitch = 1e-7;

void check_l2(const LMomentSet& lm) {
  if (!(lm.l2 > 0.0)) throw DomainError("L-scale must be positive, got " + std::to_string(lm.l2));
}

}  // namespace

LMomentSet sample_lmoments(std::span<const double> data) {
  const std::size_t n = data.size();
  if (n < 4) throw DomainError("sample L-moments need at least 4 values");
  std::vector<double> x(data.begin(), data.end());
  std::sort(x.begin(), x.end());

  // b_r = (1/n) sum_j [(j-1)...(j-r)] / [(n-1)...(n-r)] x_(j), j 1-based.
  const double nd = static_cast<double>(n);
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double j = static_cast<double>(idx + 1);
    const double w1 = (j - 1.0) / (nd - 1.0);
    const double w2 = w1 * (j - 2.0) / (nd - 2.0);
    b0 += x[idx];
    b1 += w1 * x[idx];
    b2 += w2 * x[idx];
  }
  b0 /= nd;
  b1 /= nd;
  b2 /= nd;

  LMomentSet lm;
  lm.l1 = b0;
  lm.l2 = 2.0 * b1 - b0;
  const double l3 = 6.0 * b2 - 6.0 * b1 + b0;
  // Relative to the data magnitude, an L-scale at rounding level is a constant sample.
  const double magnitude = std::max(std::abs(x.front()), std::abs(x.back()));
  if (!(lm.l2 > 1e-14 * magnitude) || x.front() == x.back()) {
    throw NumericalError("degenerate sample: all values are equal");
  }
  lm.t3 = l3 / lm.l2;
  return lm;
}

ParamTriple gev_from_lmoments(const LMomentSet& lm) {
  check_l2(lm);
  const double c = 2.0 / (3.0 + lm.t3) - std::numbers::ln2 / std::log(3.0);
  const double k = 7.8590 * c + 2.9554 * c * c;
  ParamTriple p;
  if (std::abs(k) < kGumbelSwitch) {
    p.scale = lm.l2 / std::numbers::ln2;
    p.loc = lm.l1 - p.scale * std::numbers::egamma;
    p.shape = 0.0;
    return p;
  }
  const double gamma_1pk = std::exp(log_gamma(1.0 + k));
  p.scale = lm.l2 * k / (-std::expm1(-k * std::numbers::ln2) * gamma_1pk);
  p.loc = lm.l1 - p.scale * (1.0 - gamma_1pk) / k;
  p.shape = -k;
  return p;
}

ParamTriple gpd_from_lmoments(const LMomentSet& lm, double threshold) {
  check_l2(lm);
  const double k = lm.l1 / lm.l2 - 2.0;
  return ParamTriple{threshold, (1.0 + k) * lm.l1, -k};
}

ParamTriple stationary_lmoment_fit(const ModelSpec& spec) {
  if (spec.family == EvdFamily::GEV) return gev_from_lmoments(sample_lmoments(spec.data));
  std::vector<double> excess(spec.data.size());
  for (std::size_t i = 0; i < excess.size(); ++i) excess[i] = spec.data[i] - spec.threshold;
  ParamTriple p = gpd_from_lmoments(sample_lmoments(excess), spec.threshold);
  if (!(p.scale > 0.0)) {
    throw NumericalError("GPD L-moment estimate has non-positive scale; data may lie below the threshold");
  }
  return p;
}

}  // namespace extremefit
