#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "extremefit/model.hpp"

namespace extremefit {

struct PriorComponent {
  enum class Kind { Normal, Uniform };
  Kind kind = Kind::Normal;
  // Normal: (mean, sd). Uniform: (lo, hi).
  double a = 0.0;
  double b = 1.0;

  static PriorComponent normal(double mean, double sd);
  static PriorComponent uniform(double lo, double hi);
};

// One independent component per theta entry, in packing order.
using PriorSet = std::vector<PriorComponent>;

// Weakly informative Normal priors centred on the stationary L-moment estimate.
PriorSet default_priors(const ModelSpec& spec);

double log_prior(const PriorSet& priors, std::span<const double> theta);
std::vector<double> grad_log_prior(const PriorSet& priors, std::span<const double> theta);

// [{"kind": "normal"|"uniform", "a": .., "b": ..}, ...]
PriorSet load_priors_json(const std::filesystem::path& path);
PriorSet parse_priors_json(const std::string& text);

}  // namespace extremefit
