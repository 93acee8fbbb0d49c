#include "extremefit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "extremefit/errors.hpp"
#include "extremefit/lmoments.hpp"

namespace extremefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinDiameter = 1e-10;
constexpr int kMaxRestarts = 20;
constexpr int kMaxRebuilds = 10;
constexpr int kStartAttempts = 20;

using Point = std::vector<double>;

class Objective {
 public:
  Objective(const ScalarFunction& f, const Bounds& bounds) : f_(f), bounds_(bounds) {}

  double operator()(const Point& x) {
    ++evals_;
    if (!bounds_.contains(x)) return kInf;
    const double v = f_(x);
    return std::isfinite(v) ? v : kInf;
  }
  int evals() const { return evals_; }

 private:
  const ScalarFunction& f_;
  const Bounds& bounds_;
  int evals_ = 0;
};

}  // namespace

bool Bounds::contains(std::span<const double> x) const {
  if (x.size() != lo.size() || x.size() != hi.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  }
  return true;
}

Bounds Bounds::reduce(const FixedCoordinates& fixed) const {
  return {fixed.reduce(lo), fixed.reduce(hi)};
}

FitResult nelder_mead(const ScalarFunction& f, std::span<const double> x0, const Bounds& bounds,
                      const NelderMeadOptions& options) {
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  const std::size_t dim = x0.size();
  if (bounds.lo.size() != dim || bounds.hi.size() != dim) {
    throw DomainError("bounds dimension does not match the starting point");
  }
  Objective objective(f, bounds);
  std::vector<Point> simplex(dim + 1, Point(x0.begin(), x0.end()));
  std::vector<double> values(dim + 1);
  values[0] = objective(simplex[0]);
  if (!std::isfinite(values[0])) {
    throw NumericalError("nelder_mead: objective is not finite at the starting point");
  }
  auto build_around = [&](const Point& base) {
    for (std::size_t i = 0; i < dim; ++i) {
      simplex[i + 1] = base;
      simplex[i + 1][i] += std::max(0.05 * std::abs(base[i]), 0.01);
      values[i + 1] = objective(simplex[i + 1]);
    }
  };
  build_around(simplex[0]);

  std::vector<std::size_t> order(dim + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<Point> s(dim + 1);
    std::vector<double> v(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) {
      s[i] = std::move(simplex[order[i]]);
      v[i] = values[order[i]];
    }
    simplex = std::move(s);
    values = std::move(v);
  };
  auto along = [&](const Point& from, const Point& to, double coef) {
    Point p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = from[i] + coef * (to[i] - from[i]);
    return p;
  };

  FitResult result;
  sort_simplex();
  int iter = 0;
  int rebuilds = 0;
  for (; iter < options.max_iter; ++iter) {
    const double spread = values[dim] - values[0];
    double diameter = 0.0;
    for (std::size_t k = 1; k <= dim; ++k) {
      for (std::size_t i = 0; i < dim; ++i) {
        diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[0][i]));
      }
    }
    if (diameter < kMinDiameter) {
      result.converged = true;
      break;
    }
    if (std::isfinite(spread) && spread < options.tol) {
      // A flat simplex can straddle the minimum; probe the best vertex before accepting.
      bool improved = false;
      for (std::size_t i = 0; i < dim && !improved && rebuilds < kMaxRebuilds; ++i) {
        for (double sign : {-1.0, 1.0}) {
          Point probe = simplex[0];
          probe[i] += sign * 0.5 * diameter;
          const double v = objective(probe);
          if (v < values[0] - options.tol) {
            simplex[0] = std::move(probe);
            values[0] = v;
            improved = true;
            break;
          }
        }
      }
      if (!improved) {
        result.converged = true;
        break;
      }
      ++rebuilds;
      build_around(simplex[0]);
      sort_simplex();
      continue;
    }

    Point centroid(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[k][i];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    const Point& worst = simplex[dim];
    Point reflected = along(centroid, worst, -kReflect);
    const double f_reflected = objective(reflected);

    bool shrink = false;
    if (f_reflected < values[0]) {
      Point expanded = along(centroid, reflected, kExpand);
      const double f_expanded = objective(expanded);
      if (f_expanded < f_reflected) {
        simplex[dim] = std::move(expanded);
        values[dim] = f_expanded;
      } else {
        simplex[dim] = std::move(reflected);
        values[dim] = f_reflected;
      }
    } else if (f_reflected < values[dim - 1]) {
      simplex[dim] = std::move(reflected);
      values[dim] = f_reflected;
    } else if (f_reflected < values[dim]) {
      Point outside = along(centroid, reflected, kContract);
      const double f_outside = objective(outside);
      if (f_outside <= f_reflected) {
        simplex[dim] = std::move(outside);
        values[dim] = f_outside;
      } else {
        shrink = true;
      }
    } else {
      Point inside = along(centroid, worst, kContract);
      const double f_inside = objective(inside);
      if (f_inside < values[dim]) {
        simplex[dim] = std::move(inside);
        values[dim] = f_inside;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t k = 1; k <= dim; ++k) {
        simplex[k] = along(simplex[0], simplex[k], kShrink);
        values[k] = objective(simplex[k]);
      }
    }
    sort_simplex();
    if (options.on_iteration) options.on_iteration(iter, values[0]);
  }

  result.theta_hat = simplex[0];
  result.nll_min = values[0];
  result.n_evals = objective.evals();
  result.iterations = iter;
  return result;
}

std::optional<std::vector<double>> hessian_std_errors(const ScalarFunction& f,
                                                      std::span<const double> x) {
  const std::size_t dim = x.size();
  Point p(x.begin(), x.end());
  std::vector<double> h(dim);
  for (std::size_t i = 0; i < dim; ++i) h[i] = 1e-4 * std::max(1.0, std::abs(x[i]));
  const double f0 = f(p);
  if (!std::isfinite(f0)) return std::nullopt;

  auto eval = [&](std::size_t i, double di, std::size_t j, double dj) {
    p[i] += di;
    p[j] += dj;
    const double v = f(p);
    p[i] = x[i];
    p[j] = x[j];
    return v;
  };

  Eigen::MatrixXd hess(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double up = eval(i, h[i], i, 0.0);
    const double down = eval(i, -h[i], i, 0.0);
    if (!std::isfinite(up) || !std::isfinite(down)) return std::nullopt;
    hess(i, i) = (up - 2.0 * f0 + down) / (h[i] * h[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const double pp = eval(i, h[i], j, h[j]);
      const double pm = eval(i, h[i], j, -h[j]);
      const double mp = eval(i, -h[i], j, h[j]);
      const double mm = eval(i, -h[i], j, -h[j]);
      if (!std::isfinite(pp) || !std::isfinite(pm) || !std::isfinite(mp) || !std::isfinite(mm)) {
        return std::nullopt;
      }
      hess(i, j) = hess(j, i) = (pp - pm - mp + mm) / (4.0 * h[i] * h[j]);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(hess);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
  std::vector<double> se(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(cov(i, i) > 0.0)) return std::nullopt;
    se[i] = std::sqrt(cov(i, i));
  }
  return se;
}

FitResult minimize(const ScalarFunction& f, std::span<const double> x0, const Bounds& bounds,
                   const NelderMeadOptions& options) {
  FitResult best = nelder_mead(f, x0, bounds, options);
  int total_evals = best.n_evals;
  int total_iter = best.iterations;
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    FitResult next = nelder_mead(f, best.theta_hat, bounds, options);
    total_evals += next.n_evals;
    total_iter += next.iterations;
    const double gain = best.nll_min - next.nll_min;
    if (next.nll_min <= best.nll_min) best = std::move(next);
    if (!(gain > options.tol)) break;
  }
  best.n_evals = total_evals;
  best.iterations = total_iter;
  if (best.converged) best.std_errors = hessian_std_errors(f, best.theta_hat);
  return best;
}

Bounds infer_bounds(const ModelSpec& spec) {
  const ParamTriple fit = stationary_lmoment_fit(spec);
  const ParamLayout lay = layout(spec);
  Bounds b{std::vector<double>(lay.dim), std::vector<double>(lay.dim)};
  auto slopes = [&](int comp) {
    const auto& cols = lay.columns[comp];
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const double width = 10.0 / column_sd(spec.covariates, cols[i]);
      b.lo[lay.offset[comp] + 1 + i] = -width;
      b.hi[lay.offset[comp] + 1 + i] = width;
    }
  };
  b.lo[lay.offset[0]] = fit.loc - 10.0 * fit.scale;
  b.hi[lay.offset[0]] = fit.loc + 10.0 * fit.scale;
  slopes(0);
  if (lay.columns[1].empty()) {
    b.lo[lay.offset[1]] = 1e-8 * fit.scale;
    b.hi[lay.offset[1]] = 100.0 * fit.scale;
  } else {
    b.lo[lay.offset[1]] = std::log(fit.scale) - 5.0;
    b.hi[lay.offset[1]] = std::log(fit.scale) + 5.0;
    slopes(1);
  }
  b.lo[lay.offset[2]] = -0.5;
  b.hi[lay.offset[2]] = 0.5;
  slopes(2);
  return b;
}

std::vector<double> starting_point(const ModelSpec& spec, std::optional<std::vector<double>> x0,
                                   const Bounds& bounds) {
  const ParamLayout lay = layout(spec);
  Point start = x0 ? std::move(*x0) : pack_stationary(spec, stationary_lmoment_fit(spec));
  if (start.size() != lay.dim) {
    throw ConfigError("initial point has length " + std::to_string(start.size()) +
                      ", model expects " + std::to_string(lay.dim));
  }
  for (std::size_t i = 0; i < lay.dim; ++i) {
    if (!(start[i] >= bounds.lo[i] && start[i] <= bounds.hi[i])) {
      const double lo = bounds.lo[i];
      const double hi = bounds.hi[i];
      if (std::isfinite(lo) && std::isfinite(hi)) {
        start[i] = std::clamp(start[i], lo + 1e-3 * (hi - lo), hi - 1e-3 * (hi - lo));
      } else {
        start[i] = std::clamp(start[i], lo, hi);
      }
    }
  }

  const bool log_scale = !lay.columns[1].empty();
  const std::size_t scale_at = lay.offset[1];
  const std::size_t shape_at = lay.offset[2];
  for (int attempt = 0; attempt <= kStartAttempts; ++attempt) {
    Point trial = start;
    const double frac = static_cast<double>(attempt) / kStartAttempts;
    trial[shape_at] *= 1.0 - frac;
    for (std::size_t i = 1; i <= lay.columns[2].size(); ++i) trial[shape_at + i] *= 1.0 - frac;
    const double widen = 1.0 + 0.25 * attempt;
    trial[scale_at] = log_scale ? trial[scale_at] + std::log(widen) : trial[scale_at] * widen;
    if (bounds.contains(trial) && std::isfinite(neg_log_likelihood(spec, trial))) return trial;
  }
  throw NumericalError("no finite starting point found after " + std::to_string(kStartAttempts) +
                       " jittered attempts");
}

FitResult fit_mle(const ModelSpec& spec, std::optional<std::vector<double>> x0,
                  std::optional<Bounds> bounds) {
  require_valid(spec);
  const Bounds box = bounds ? std::move(*bounds) : infer_bounds(spec);
  if (box.lo.size() != param_dim(spec) || box.hi.size() != param_dim(spec)) {
    throw ConfigError("bounds dimension does not match the model");
  }
  const Point start = starting_point(spec, std::move(x0), box);
  const ScalarFunction nll = [&spec](std::span<const double> theta) {
    return neg_log_likelihood(spec, theta);
  };
  return minimize(nll, start, box);
}

Bounds parse_bounds_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bounds file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("lo") || !doc.contains("hi") || !doc["lo"].is_array() ||
      !doc["hi"].is_array()) {
    throw ConfigError("bounds file must be {\"lo\": [...], \"hi\": [...]}");
  }
  auto read = [](const nlohmann::json& arr, double missing) {
    std::vector<double> out;
    for (const auto& v : arr) {
      if (v.is_null()) {
        out.push_back(missing);
      } else if (v.is_number()) {
        out.push_back(v.get<double>());
      } else {
        throw ConfigError("bounds entries must be numbers or null");
      }
    }
    return out;
  };
  Bounds b{read(doc["lo"], -kInf), read(doc["hi"], kInf)};
  if (b.lo.size() != b.hi.size()) throw ConfigError("bounds lo and hi differ in length");
  for (std::size_t i = 0; i < b.lo.size(); ++i) {
    if (!(b.lo[i] < b.hi[i])) {
      throw ConfigError("bounds entry " + std::to_string(i) + " has lo >= hi");
    }
  }
  return b;
}

Bounds load_bounds_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open bounds file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_bounds_json(buffer.str());
}

}  // namespace extremefit
