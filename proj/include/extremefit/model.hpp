#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extremefit/distributions.hpp"

namespace extremefit {

// Dense row-major matrix; one row per observation, one column per covariate.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  std::vector<double> column(std::size_t c) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Sample standard deviation of a covariate column, floored at `floor`.
double column_sd(const Matrix& m, std::size_t col, double floor = 1e-6);

enum class Component { Location = 0, Scale = 1, Shape = 2 };

// Number of covariates driving location, scale and shape. 0 = stationary.
struct Config {
  int loc = 0;
  int scale = 0;
  int shape = 0;

  int operator[](Component c) const;
  friend bool operator==(const Config&, const Config&) = default;
};

struct ModelSpec {
  std::vector<double> data;
  Matrix covariates;
  Config config;
  EvdFamily family = EvdFamily::GEV;
  // Explicit covariate column indices per component. When absent, the first
  // config[c] columns are used, so columns may be shared between components.
  std::array<std::optional<std::vector<std::size_t>>, 3> covariate_columns;
  // GPD only: known threshold, used as the location of the stationary
  // L-moment estimate. Data are expected to lie above it.
  double threshold = 0.0;
};

// Parameter vector theta is packed as
//   [loc_0 .. loc_a | scale_0 .. scale_b | shape_0 .. shape_c]
// where index 0 of each block is the intercept. With no scale covariates the
// scale entry is the scale itself (> 0); otherwise the scale block holds
// log-linear coefficients.
struct ParamLayout {
  std::size_t offset[3];
  std::array<std::vector<std::size_t>, 3> columns;
  std::size_t dim;
};

ParamLayout layout(const ModelSpec& spec);
std::size_t param_dim(const ModelSpec& spec);

// "loc_intercept", "loc_slope_<i>", "scale" | "logscale_intercept", "logscale_slope_<j>",
// "shape" | "shape_intercept", "shape_slope_<k>".
std::vector<std::string> param_names(const ModelSpec& spec);

// Every problem with the spec, in one pass. Empty means valid.
std::vector<std::string> validate_config(const ModelSpec& spec);
// Throws ConfigError listing all violations.
void require_valid(const ModelSpec& spec);

ParamTriple realize_at(const ModelSpec& spec, const ParamLayout& lay,
                       std::span<const double> theta, std::size_t t);
std::vector<ParamTriple> realize(const ModelSpec& spec, std::span<const double> theta);

// +inf when any observation falls outside the support or any scale is not positive.
double neg_log_likelihood(const ModelSpec& spec, std::span<const double> theta);
std::vector<double> grad_neg_log_likelihood(const ModelSpec& spec, std::span<const double> theta);

// Stationary triple packed into the spec's layout with all slopes zero.
std::vector<double> pack_stationary(const ModelSpec& spec, const ParamTriple& p);

// Maps a theta of `from` into the layout of `to`, where `to` nests `from`
// (same data, every component at least as many covariates). Extra slopes are
// zero; a direct scale becomes a log-scale intercept when `to` adds scale covariates.
std::vector<double> embed_theta(const ModelSpec& from, const ModelSpec& to,
                                std::span<const double> theta);

// Holds a subset of coordinates at fixed values and exposes the rest as a
// reduced vector.
class FixedCoordinates {
 public:
  FixedCoordinates() = default;
  explicit FixedCoordinates(std::vector<std::optional<double>> values);

  std::size_t full_dim() const { return values_.size(); }
  std::size_t free_dim() const { return free_.size(); }
  bool is_fixed(std::size_t i) const { return values_[i].has_value(); }
  std::vector<double> expand(std::span<const double> reduced) const;
  std::vector<double> reduce(std::span<const double> full) const;

 private:
  std::vector<std::optional<double>> values_;
  std::vector<std::size_t> free_;
};

}  // namespace extremefit
