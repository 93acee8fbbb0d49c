#pragma once

#include <array>
#include <string_view>

#include "extremefit/numerics.hpp"

namespace extremefit {

// Shape follows the Coles convention throughout the library: the support is
// 1 + shape * (x - loc) / scale > 0, so shape > 0 is heavy-tailed (Frechet
// type). scipy.stats.genextreme uses c = -shape.
enum class EvdFamily { GEV, GPD };

std::string_view to_string(EvdFamily family);
// Accepts "gev" / "gpd" in any case. Throws ConfigError otherwise.
EvdFamily parse_family(std::string_view name);

struct ParamTriple {
  double loc = 0.0;
  double scale = 1.0;
  double shape = 0.0;
};

// |shape| below this switches to the exact Gumbel / exponential limit.
inline constexpr double kShapeEps = 1e-8;

// Log-density. Returns -inf outside the support; throws DomainError if scale <= 0.
double logpdf(EvdFamily family, double x, const ParamTriple& p);
double cdf(EvdFamily family, double x, const ParamTriple& p);
// Inverse CDF at non-exceedance probability p in (0, 1).
double quantile(EvdFamily family, double p_nonexceed, const ParamTriple& params);
double sample(EvdFamily family, const ParamTriple& params, Rng& rng);

using Grad3 = std::array<double, 3>;

// Analytic (d/dloc, d/dscale, d/dshape) of logpdf. Throws DomainError when x is
// not strictly inside the support.
Grad3 grad_logpdf(EvdFamily family, double x, const ParamTriple& p);

}  // namespace extremefit
