#include "extremefit/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "extremefit/errors.hpp"

namespace extremefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("scale must be positive and finite, got " + std::to_string(scale));
  }
}

bool near_zero(double shape) { return std::abs(shape) < kShapeEps; }

}  // namespace

std::string_view to_string(EvdFamily family) {
  return family == EvdFamily::GEV ? "gev" : "gpd";
}

EvdFamily parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "gev") return EvdFamily::GEV;
  if (lower == "gpd") return EvdFamily::GPD;
  throw ConfigError("unknown distribution '" + std::string(name) + "' (expected gev or gpd)");
}

double logpdf(EvdFamily family, double x, const ParamTriple& p) {
  check_scale(p.scale);
  const double z = (x - p.loc) / p.scale;
  const double log_scale = std::log(p.scale);
  if (family == EvdFamily::GPD && z < 0.0) return -kInf;

  if (near_zero(p.shape)) {
    if (family == EvdFamily::GEV) return -log_scale - z - std::exp(-z);
    return -log_scale - z;
  }
  const double xz = p.shape * z;
  if (!(xz > -1.0)) return -kInf;
  const double log_t = std::log1p(xz);
  const double value = -log_scale - (1.0 + 1.0 / p.shape) * log_t;
  if (family == EvdFamily::GPD) return value;
  return value - std::exp(-log_t / p.shape);
}

double cdf(EvdFamily family, double x, const ParamTriple& p) {
  check_scale(p.scale);
  const double z = (x - p.loc) / p.scale;
  if (family == EvdFamily::GEV) {
    if (near_zero(p.shape)) return std::exp(-std::exp(-z));
    const double xz = p.shape * z;
    if (xz <= -1.0) return p.shape > 0.0 ? 0.0 : 1.0;
    return std::exp(-std::exp(-std::log1p(xz) / p.shape));
  }
  if (z <= 0.0) return 0.0;
  if (near_zero(p.shape)) return -std::expm1(-z);
  const double xz = p.shape * z;
  if (xz <= -1.0) return 1.0;
  return -std::expm1(-std::log1p(xz) / p.shape);
}

double quantile(EvdFamily family, double p_nonexceed, const ParamTriple& params) {
  check_scale(params.scale);
  if (!(p_nonexceed > 0.0 && p_nonexceed < 1.0)) {
    throw DomainError("quantile probability must lie in (0, 1), got " +
                      std::to_string(p_nonexceed));
  }
  // y is the standard Gumbel / exponential variate at p.
  const double y = family == EvdFamily::GEV ? -std::log(-std::log(p_nonexceed))
                                            : -std::log1p(-p_nonexceed);
  if (near_zero(params.shape)) return params.loc + params.scale * y;
  return params.loc + params.scale * std::expm1(params.shape * y) / params.shape;
}

double sample(EvdFamily family, const ParamTriple& params, Rng& rng) {
  return quantile(family, rng.uniform(), params);
}

Grad3 grad_logpdf(EvdFamily family, double x, const ParamTriple& p) {
  check_scale(p.scale);
  const double sigma = p.scale;
  const double xi = p.shape;
  const double s = (x - p.loc) / sigma;
  const bool gev = family == EvdFamily::GEV;
  if (!gev && s < 0.0) throw DomainError("grad_logpdf: x below the GPD threshold");

  if (near_zero(xi)) {
    // Limits of the general expressions as shape -> 0.
    const double e = gev ? std::exp(-s) : 0.0;
    const double dmu = (1.0 - e) / sigma;
    const double dsigma = -1.0 / sigma + s * (1.0 - e) / sigma;
    const double dxi = 0.5 * s * s * (1.0 - e) - s;
    return {dmu, dsigma, dxi};
  }

  const double xs = xi * s;
  if (!(xs > -1.0)) throw DomainError("grad_logpdf: x outside the support");
  const double t = 1.0 + xs;
  const double log_t = std::log1p(xs);
  // u = t^{-1/xi}; u / t = t^{-1/xi - 1}
  const double u = gev ? std::exp(-log_t / xi) : 0.0;
  const double common = (xi + 1.0) / t - u / t;
  const double dmu = common / sigma;
  const double dsigma = -1.0 / sigma + common * s / sigma;
  const double a = log_t / (xi * xi);
  double dxi = a - (1.0 + 1.0 / xi) * (s / t);
  if (gev) dxi -= u * (a - s / (xi * t));
  return {dmu, dsigma, dxi};
}

}  // namespace extremefit
