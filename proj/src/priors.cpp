#include "extremefit/priors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "extremefit/errors.hpp"
#include "extremefit/lmoments.hpp"

namespace extremefit {

namespace {

void check_lengths(const PriorSet& priors, std::span<const double> theta) {
  if (priors.size() != theta.size()) {
    throw DomainError("prior set has " + std::to_string(priors.size()) +
                      " components, theta has " + std::to_string(theta.size()));
  }
}

}  // namespace

PriorComponent PriorComponent::normal(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(mean) || !std::isfinite(sd)) {
    throw DomainError("normal prior needs a finite mean and sd > 0");
  }
  return {Kind::Normal, mean, sd};
}

PriorComponent PriorComponent::uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("uniform prior needs finite lo < hi");
  }
  return {Kind::Uniform, lo, hi};
}

PriorSet default_priors(const ModelSpec& spec) {
  const ParamTriple fit = stationary_lmoment_fit(spec);
  const ParamLayout lay = layout(spec);
  PriorSet priors(lay.dim);

  auto slopes = [&](int comp) {
    const auto& cols = lay.columns[comp];
    for (std::size_t i = 0; i < cols.size(); ++i) {
      priors[lay.offset[comp] + 1 + i] =
          PriorComponent::normal(0.0, 1.0 / column_sd(spec.covariates, cols[i]));
    }
  };

  priors[lay.offset[0]] =
      PriorComponent::normal(fit.loc, 2.0 * fit.scale + 0.1 * std::abs(fit.loc) + 1.0);
  slopes(0);
  if (lay.columns[1].empty()) {
    priors[lay.offset[1]] = PriorComponent::normal(fit.scale, fit.scale);
  } else {
    priors[lay.offset[1]] = PriorComponent::normal(std::log(fit.scale), 1.0);
    slopes(1);
  }
  priors[lay.offset[2]] = PriorComponent::normal(0.0, 0.25);
  slopes(2);
  return priors;
}

double log_prior(const PriorSet& priors, std::span<const double> theta) {
  check_lengths(priors, theta);
  double total = 0.0;
  for (std::size_t i = 0; i < priors.size(); ++i) {
    const auto& p = priors[i];
    if (p.kind == PriorComponent::Kind::Normal) {
      const double z = (theta[i] - p.a) / p.b;
      total += -0.5 * std::log(2.0 * std::numbers::pi * p.b * p.b) - 0.5 * z * z;
    } else {
      if (!(theta[i] >= p.a && theta[i] <= p.b)) return -std::numeric_limits<double>::infinity();
      total -= std::log(p.b - p.a);
    }
  }
  return total;
}

std::vector<double> grad_log_prior(const PriorSet& priors, std::span<const double> theta) {
  if (!std::isfinite(log_prior(priors, theta))) {
    throw DomainError("prior gradient requested outside the prior support");
  }
  std::vector<double> grad(priors.size(), 0.0);
  for (std::size_t i = 0; i < priors.size(); ++i) {
    const auto& p = priors[i];
    if (p.kind == PriorComponent::Kind::Normal) grad[i] = -(theta[i] - p.a) / (p.b * p.b);
  }
  return grad;
}

PriorSet parse_priors_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("priors file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ConfigError("priors file must hold a JSON array");
  PriorSet priors;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "prior " + std::to_string(i) + ": ";
    if (!item.is_object() || !item.contains("kind") || !item.contains("a") ||
        !item.contains("b") || !item["a"].is_number() || !item["b"].is_number() ||
        !item["kind"].is_string()) {
      throw ConfigError(where + "expected {\"kind\": string, \"a\": number, \"b\": number}");
    }
    const auto kind = item["kind"].get<std::string>();
    const double a = item["a"].get<double>();
    const double b = item["b"].get<double>();
    try {
      if (kind == "normal") {
        priors.push_back(PriorComponent::normal(a, b));
      } else if (kind == "uniform") {
        priors.push_back(PriorComponent::uniform(a, b));
      } else {
        throw ConfigError(where + "unknown kind '" + kind + "'");
      }
    } catch (const DomainError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return priors;
}

PriorSet load_priors_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open priors file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_priors_json(buffer.str());
}

}  // namespace extremefit
