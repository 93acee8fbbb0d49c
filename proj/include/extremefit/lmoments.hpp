#pragma once

#include <span>

#include "extremefit/distributions.hpp"
#include "extremefit/model.hpp"

namespace extremefit {

struct LMomentSet {
  double l1 = 0.0;  // mean
  double l2 = 0.0;  // L-scale
  double t3 = 0.0;  // L-skewness
};

// Unbiased sample L-moments from probability-weighted moments. Needs at
// least 4 values; a constant sample throws NumericalError.
LMomentSet sample_lmoments(std::span<const double> data);

// Hosking's GEV estimator, reported with Coles shape (= -k).
ParamTriple gev_from_lmoments(const LMomentSet& lm);

// GPD with known location. `lm` must be the L-moments of the excesses over
// `threshold`.
ParamTriple gpd_from_lmoments(const LMomentSet& lm, double threshold);

// Stationary L-moment estimate for the spec's family, ignoring covariates.
// GPD uses spec.threshold as the known location.
ParamTriple stationary_lmoment_fit(const ModelSpec& spec);

}  // namespace extremefit
