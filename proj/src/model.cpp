#include "extremefit/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "extremefit/errors.hpp"

namespace extremefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kComponentName[3] = {"location", "scale", "shape"};

std::vector<std::size_t> default_columns(int count) {
  std::vector<std::size_t> cols(static_cast<std::size_t>(std::max(count, 0)));
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
  return cols;
}

void check_theta(const ParamLayout& lay, std::span<const double> theta) {
  if (theta.size() != lay.dim) {
    throw DomainError("theta has length " + std::to_string(theta.size()) + ", model expects " +
                      std::to_string(lay.dim));
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta[i])) {
      throw DomainError("theta[" + std::to_string(i) + "] is not finite");
    }
  }
}

double linear_predictor(const ModelSpec& spec, const ParamLayout& lay, int comp,
                        std::span<const double> theta, std::size_t t) {
  const std::size_t off = lay.offset[comp];
  double value = theta[off];
  const auto& cols = lay.columns[comp];
  for (std::size_t i = 0; i < cols.size(); ++i) {
    value += theta[off + 1 + i] * spec.covariates(t, cols[i]);
  }
  return value;
}

}  // namespace

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

double column_sd(const Matrix& m, std::size_t col, double floor) {
  const std::size_t n = m.rows();
  if (n < 2) return floor;
  double mean = 0.0;
  for (std::size_t t = 0; t < n; ++t) mean += m(t, col);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t t = 0; t < n; ++t) ss += (m(t, col) - mean) * (m(t, col) - mean);
  return std::max(std::sqrt(ss / static_cast<double>(n - 1)), floor);
}

int Config::operator[](Component c) const {
  switch (c) {
    case Component::Location:
      return loc;
    case Component::Scale:
      return scale;
    case Component::Shape:
      return shape;
  }
  return 0;
}

ParamLayout layout(const ModelSpec& spec) {
  ParamLayout lay{};
  const int counts[3] = {spec.config.loc, spec.config.scale, spec.config.shape};
  std::size_t offset = 0;
  for (int c = 0; c < 3; ++c) {
    lay.columns[c] = spec.covariate_columns[c] ? *spec.covariate_columns[c]
                                                : default_columns(counts[c]);
    lay.offset[c] = offset;
    offset += 1 + lay.columns[c].size();
  }
  lay.dim = offset;
  return lay;
}

std::size_t param_dim(const ModelSpec& spec) { return layout(spec).dim; }

std::vector<std::string> param_names(const ModelSpec& spec) {
  const ParamLayout lay = layout(spec);
  std::vector<std::string> names;
  names.reserve(lay.dim);
  names.emplace_back("loc_intercept");
  for (std::size_t i = 0; i < lay.columns[0].size(); ++i) {
    names.push_back("loc_slope_" + std::to_string(i));
  }
  if (lay.columns[1].empty()) {
    names.emplace_back("scale");
  } else {
    names.emplace_back("logscale_intercept");
    for (std::size_t i = 0; i < lay.columns[1].size(); ++i) {
      names.push_back("logscale_slope_" + std::to_string(i));
    }
  }
  if (lay.columns[2].empty()) {
    names.emplace_back("shape");
  } else {
    names.emplace_back("shape_intercept");
    for (std::size_t i = 0; i < lay.columns[2].size(); ++i) {
      names.push_back("shape_slope_" + std::to_string(i));
    }
  }
  return names;
}

std::vector<std::string> validate_config(const ModelSpec& spec) {
  std::vector<std::string> problems;
  const std::size_t n = spec.data.size();
  const std::size_t m = spec.covariates.cols();
  if (n == 0) problems.emplace_back("data is empty");
  if (m > 0 && spec.covariates.rows() != n) {
    problems.push_back("covariate matrix has " + std::to_string(spec.covariates.rows()) +
                       " rows, data has " + std::to_string(n));
  }
  const int counts[3] = {spec.config.loc, spec.config.scale, spec.config.shape};
  for (int c = 0; c < 3; ++c) {
    if (counts[c] < 0) {
      problems.push_back(std::string(kComponentName[c]) + " covariate count is negative");
      continue;
    }
    if (const auto& explicit_cols = spec.covariate_columns[c]) {
      if (explicit_cols->size() != static_cast<std::size_t>(counts[c])) {
        problems.push_back(std::string(kComponentName[c]) + " lists " +
                           std::to_string(explicit_cols->size()) + " columns but requests " +
                           std::to_string(counts[c]) + " covariates");
      }
      for (std::size_t col : *explicit_cols) {
        if (col >= m) {
          problems.push_back(std::string(kComponentName[c]) + " references column " +
                             std::to_string(col) + ", " + std::to_string(m) + " available");
        }
      }
    } else if (static_cast<std::size_t>(counts[c]) > m) {
      problems.push_back(std::string(kComponentName[c]) + " requests " +
                         std::to_string(counts[c]) + " covariates, " + std::to_string(m) +
                         " available");
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (!std::isfinite(spec.data[t])) {
      problems.push_back("data row " + std::to_string(t) + " is not finite");
    }
  }
  if (spec.covariates.rows() == n) {
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t j = 0; j < m; ++j) {
        if (!std::isfinite(spec.covariates(t, j))) {
          problems.push_back("covariate row " + std::to_string(t) + " column " +
                             std::to_string(j) + " is not finite");
        }
      }
    }
  }
  return problems;
}

void require_valid(const ModelSpec& spec) {
  const auto problems = validate_config(spec);
  if (problems.empty()) return;
  std::string message = "invalid model:";
  for (const auto& p : problems) message += " " + p + ";";
  message.pop_back();
  throw ConfigError(message);
}

ParamTriple realize_at(const ModelSpec& spec, const ParamLayout& lay,
                       std::span<const double> theta, std::size_t t) {
  ParamTriple p;
  p.loc = linear_predictor(spec, lay, 0, theta, t);
  p.scale = lay.columns[1].empty() ? theta[lay.offset[1]]
                                   : std::exp(linear_predictor(spec, lay, 1, theta, t));
  p.shape = linear_predictor(spec, lay, 2, theta, t);
  return p;
}

std::vector<ParamTriple> realize(const ModelSpec& spec, std::span<const double> theta) {
  const ParamLayout lay = layout(spec);
  check_theta(lay, theta);
  if (lay.columns[1].empty() && !(theta[lay.offset[1]] > 0.0)) {
    throw DomainError("scale must be positive, got " + std::to_string(theta[lay.offset[1]]));
  }
  std::vector<ParamTriple> out(spec.data.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = realize_at(spec, lay, theta, t);
  return out;
}

double neg_log_likelihood(const ModelSpec& spec, std::span<const double> theta) {
  const ParamLayout lay = layout(spec);
  check_theta(lay, theta);
  double total = 0.0;
  for (std::size_t t = 0; t < spec.data.size(); ++t) {
    const ParamTriple p = realize_at(spec, lay, theta, t);
    if (!(p.scale > 0.0) || !std::isfinite(p.scale)) return kInf;
    const double lp = logpdf(spec.family, spec.data[t], p);
    if (!(lp > -kInf)) return kInf;  // also catches NaN
    total -= lp;
  }
  return std::isnan(total) ? kInf : total;
}

std::vector<double> grad_neg_log_likelihood(const ModelSpec& spec,
                                            std::span<const double> theta) {
  const ParamLayout lay = layout(spec);
  check_theta(lay, theta);
  const bool log_scale = !lay.columns[1].empty();
  std::vector<double> grad(lay.dim, 0.0);
  for (std::size_t t = 0; t < spec.data.size(); ++t) {
    const ParamTriple p = realize_at(spec, lay, theta, t);
    if (!(p.scale > 0.0) || !std::isfinite(p.scale)) {
      throw DomainError("gradient requested where the scale is not positive (row " +
                        std::to_string(t) + ")");
    }
    // Throws DomainError outside the support, where the likelihood is infinite.
    Grad3 g = grad_logpdf(spec.family, spec.data[t], p);
    if (log_scale) g[1] *= p.scale;
    for (int c = 0; c < 3; ++c) {
      const std::size_t off = lay.offset[c];
      grad[off] -= g[c];
      const auto& cols = lay.columns[c];
      for (std::size_t i = 0; i < cols.size(); ++i) {
        grad[off + 1 + i] -= g[c] * spec.covariates(t, cols[i]);
      }
    }
  }
  return grad;
}

std::vector<double> pack_stationary(const ModelSpec& spec, const ParamTriple& p) {
  const ParamLayout lay = layout(spec);
  std::vector<double> theta(lay.dim, 0.0);
  theta[lay.offset[0]] = p.loc;
  theta[lay.offset[1]] = lay.columns[1].empty() ? p.scale : std::log(p.scale);
  theta[lay.offset[2]] = p.shape;
  return theta;
}

std::vector<double> embed_theta(const ModelSpec& from, const ModelSpec& to,
                                std::span<const double> theta) {
  const ParamLayout src = layout(from);
  const ParamLayout dst = layout(to);
  check_theta(src, theta);
  std::vector<double> out(dst.dim, 0.0);
  for (int c = 0; c < 3; ++c) {
    const auto& src_cols = src.columns[c];
    const auto& dst_cols = dst.columns[c];
    double intercept = theta[src.offset[c]];
    if (c == 1 && src_cols.empty() && !dst_cols.empty()) intercept = std::log(intercept);
    if (c == 1 && !src_cols.empty() && dst_cols.empty()) {
      throw DomainError("embed_theta: target drops scale covariates");
    }
    out[dst.offset[c]] = intercept;
    for (std::size_t i = 0; i < src_cols.size(); ++i) {
      std::size_t slot = dst_cols.size();
      for (std::size_t k = 0; k < dst_cols.size(); ++k) {
        if (dst_cols[k] == src_cols[i]) {
          slot = k;
          break;
        }
      }
      if (slot == dst_cols.size()) {
        throw DomainError("embed_theta: covariate column " + std::to_string(src_cols[i]) +
                          " of " + kComponentName[c] + " missing from the target model");
      }
      out[dst.offset[c] + 1 + slot] = theta[src.offset[c] + 1 + i];
    }
  }
  return out;
}

FixedCoordinates::FixedCoordinates(std::vector<std::optional<double>> values)
    : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!values_[i]) free_.push_back(i);
  }
}

std::vector<double> FixedCoordinates::expand(std::span<const double> reduced) const {
  if (reduced.size() != free_.size()) throw DomainError("reduced vector has the wrong length");
  std::vector<double> full(values_.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    full[i] = values_[i] ? *values_[i] : reduced[k++];
  }
  return full;
}

std::vector<double> FixedCoordinates::reduce(std::span<const double> full) const {
  if (full.size() != values_.size()) throw DomainError("full vector has the wrong length");
  std::vector<double> reduced;
  reduced.reserve(free_.size());
  for (std::size_t i : free_) reduced.push_back(full[i]);
  return reduced;
}

}  // namespace extremefit
