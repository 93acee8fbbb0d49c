#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extremefit/model.hpp"
#include "extremefit/numerics.hpp"

namespace extremefit {

// Box constraints; infinite entries allowed.
struct Bounds {
  std::vector<double> lo;
  std::vector<double> hi;

  bool contains(std::span<const double> x) const;
  // Restriction to the free coordinates of `fixed`.
  Bounds reduce(const FixedCoordinates& fixed) const;
};

struct FitResult {
  std::vector<double> theta_hat;
  double nll_min = 0.0;
  bool converged = false;
  int n_evals = 0;
  int iterations = 0;
  // Best-effort: absent when the numerical Hessian is not positive definite.
  std::optional<std::vector<double>> std_errors;
};

struct NelderMeadOptions {
  double tol = 1e-8;
  int max_iter = 20000;
  // Called after every iteration with the best value so far.
  std::function<void(int iteration, double best)> on_iteration;
};

// Derivative-free simplex minimizer. Vertices outside `bounds` or where f is
// not finite count as +inf. Throws NumericalError if f(x0) is not finite.
FitResult nelder_mead(const ScalarFunction& f, std::span<const double> x0, const Bounds& bounds,
                      const NelderMeadOptions& options = {});

// Nelder-Mead restarted from its own optimum until the value stops improving,
// followed by standard errors from the central-difference Hessian.
FitResult minimize(const ScalarFunction& f, std::span<const double> x0, const Bounds& bounds,
                   const NelderMeadOptions& options = {});

// Standard errors from the inverse central-difference Hessian of f at x.
std::optional<std::vector<double>> hessian_std_errors(const ScalarFunction& f,
                                                      std::span<const double> x);

Bounds infer_bounds(const ModelSpec& spec);

// Deterministic starting point: the L-moment stationary estimate (or x0 if
// given) moved inside `bounds`, then up to 20 jittered retries that shrink the
// shape toward 0 and widen the scale until the likelihood is finite.
std::vector<double> starting_point(const ModelSpec& spec, std::optional<std::vector<double>> x0,
                                   const Bounds& bounds);

FitResult fit_mle(const ModelSpec& spec, std::optional<std::vector<double>> x0 = std::nullopt,
                  std::optional<Bounds> bounds = std::nullopt);

// {"lo": [...], "hi": [...]} in packing order; null means unbounded.
Bounds parse_bounds_json(const std::string& text);
Bounds load_bounds_json(const std::filesystem::path& path);

}  // namespace extremefit
