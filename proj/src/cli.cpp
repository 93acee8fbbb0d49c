#include "extremefit/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "extremefit/diagnostics.hpp"
#include "extremefit/errors.hpp"
#include "extremefit/io.hpp"
#include "extremefit/lmoments.hpp"
#include "extremefit/optimize.hpp"
#include "extremefit/priors.hpp"

namespace extremefit::cli {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxReturnLevelDraws = 1000;
constexpr int kDispersionAttempts = 20;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

json config_json(const Config& c) { return json::array({c.loc, c.scale, c.shape}); }

ModelSpec build_spec(const RunConfig& cfg, const Config& config) {
  CsvData csv = load_csv(cfg.input);
  ModelSpec spec;
  spec.data = std::move(csv.data);
  spec.covariates = std::move(csv.covariates);
  spec.config = config;
  spec.family = cfg.dist;
  spec.threshold = cfg.threshold;
  require_valid(spec);
  return spec;
}

// GPD location is held at the threshold unless it is modelled or freed.
std::optional<FixedCoordinates> fixed_coordinates(const RunConfig& cfg, const ModelSpec& spec) {
  if (spec.family != EvdFamily::GPD || spec.config.loc != 0 || cfg.free_location) {
    return std::nullopt;
  }
  std::vector<std::optional<double>> values(param_dim(spec));
  values[layout(spec).offset[0]] = cfg.threshold;
  return FixedCoordinates(std::move(values));
}

std::vector<double> check_length(std::vector<double> v, const ModelSpec& spec, const char* what) {
  if (v.size() != param_dim(spec)) {
    throw ConfigError(std::string(what) + " has " + std::to_string(v.size()) +
                      " values, model has " + std::to_string(param_dim(spec)) + " parameters");
  }
  return v;
}

struct FullFit {
  FitResult fit;  // theta_hat in full coordinates
  std::vector<std::optional<double>> std_errors;
};

FullFit fit_model(const RunConfig& cfg, const ModelSpec& spec,
                  std::optional<std::vector<double>> x0 = std::nullopt) {
  const Bounds bounds = cfg.bounds_file ? load_bounds_json(*cfg.bounds_file) : infer_bounds(spec);
  if (bounds.lo.size() != param_dim(spec)) {
    throw ConfigError("bounds file has " + std::to_string(bounds.lo.size()) +
                      " entries, model has " + std::to_string(param_dim(spec)) + " parameters");
  }
  const auto fixed = fixed_coordinates(cfg, spec);
  if (x0) {
    x0 = check_length(std::move(*x0), spec, "--init");
  } else if (fixed) {
    x0 = pack_stationary(spec, stationary_lmoment_fit(spec));
  }
  if (fixed && x0) {
    const std::size_t loc = layout(spec).offset[0];
    (*x0)[loc] = cfg.threshold;
  }
  const std::vector<double> start = starting_point(spec, std::move(x0), bounds);

  FullFit out;
  if (!fixed) {
    const ScalarFunction nll = [&spec](std::span<const double> theta) {
      return neg_log_likelihood(spec, theta);
    };
    out.fit = minimize(nll, start, bounds);
    out.std_errors.resize(out.fit.theta_hat.size());
    if (out.fit.std_errors) {
      for (std::size_t i = 0; i < out.std_errors.size(); ++i) {
        out.std_errors[i] = (*out.fit.std_errors)[i];
      }
    }
    return out;
  }
  const ScalarFunction reduced_nll = [&spec, &fixed](std::span<const double> r) {
    return neg_log_likelihood(spec, fixed->expand(r));
  };
  FitResult reduced = minimize(reduced_nll, fixed->reduce(start), bounds.reduce(*fixed));
  out.fit = reduced;
  out.fit.theta_hat = fixed->expand(reduced.theta_hat);
  out.std_errors.resize(out.fit.theta_hat.size());
  if (reduced.std_errors) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < out.std_errors.size(); ++i) {
      if (!fixed->is_fixed(i)) out.std_errors[i] = (*reduced.std_errors)[k++];
    }
    std::vector<double> full_se(out.std_errors.size(), 0.0);
    for (std::size_t i = 0; i < full_se.size(); ++i) full_se[i] = out.std_errors[i].value_or(0.0);
    out.fit.std_errors = full_se;
  }
  return out;
}

json optional_vector_json(const std::vector<std::optional<double>>& v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back(x ? json(*x) : json(nullptr));
  return arr;
}

int do_fit(const RunConfig& cfg) {
  const ModelSpec spec = build_spec(cfg, cfg.config);
  const FullFit result = fit_model(cfg, spec, cfg.init);
  json doc;
  doc["param_names"] = param_names(spec);
  doc["theta_hat"] = result.fit.theta_hat;
  doc["nll"] = result.fit.nll_min;
  doc["converged"] = result.fit.converged;
  doc["n_evals"] = result.fit.n_evals;
  doc["std_errors"] = result.fit.std_errors ? optional_vector_json(result.std_errors) : json(nullptr);
  doc["dist"] = std::string(to_string(spec.family));
  doc["config"] = config_json(spec.config);
  if (cfg.return_period) {
    doc["return_period"] = *cfg.return_period;
    doc["return_levels"] = return_levels(spec, result.fit.theta_hat, *cfg.return_period);
  }
  std::filesystem::create_directories(cfg.output);
  io::write_text(cfg.output / "result.json", io::to_json_text(doc));
  return kOk;
}

std::vector<double> fallback_scales(std::span<const double> theta) {
  std::vector<double> s(theta.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::max(0.01 * std::abs(theta[i]), 1e-3);
  return s;
}

Chain expand_chain(const Chain& reduced, const std::optional<FixedCoordinates>& fixed) {
  if (!fixed) return reduced;
  Chain full = reduced;
  full.dim = fixed->full_dim();
  full.samples.clear();
  full.samples.reserve(reduced.size() * full.dim);
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    const auto row = fixed->expand(reduced.row(i));
    full.samples.insert(full.samples.end(), row.begin(), row.end());
  }
  return full;
}

json diagnostic_json(const Diagnostic& d) {
  return std::isfinite(d.value) ? json(d.value) : json(nullptr);
}

int do_sample(const RunConfig& cfg) {
  const ModelSpec spec = build_spec(cfg, cfg.config);
  const std::size_t dim = param_dim(spec);
  const PriorSet priors = cfg.priors_file ? load_priors_json(*cfg.priors_file) : default_priors(spec);
  if (priors.size() != dim) {
    throw ConfigError("priors file has " + std::to_string(priors.size()) +
                      " entries, model has " + std::to_string(dim) + " parameters");
  }
  if (!(cfg.temperature > 0.0)) throw ConfigError("--temp must be positive");
  const auto fixed = fixed_coordinates(cfg, spec);
  const Target target =
      make_posterior_target(spec, priors, cfg.temperature, fixed ? &*fixed : nullptr);
  auto reduce = [&](std::span<const double> v) {
    return fixed ? fixed->reduce(v) : std::vector<double>(v.begin(), v.end());
  };

  std::vector<double> init;
  std::vector<double> scales;
  if (cfg.init) init = check_length(*cfg.init, spec, "--init");
  if (cfg.steps) scales = check_length(*cfg.steps, spec, "--steps");
  if (!cfg.init || !cfg.steps) {
    const FullFit ref = fit_model(cfg, spec, cfg.init);
    if (!cfg.init) init = ref.fit.theta_hat;
    if (!cfg.steps) {
      scales = fallback_scales(ref.fit.theta_hat);
      for (std::size_t i = 0; i < dim; ++i) {
        if (ref.std_errors[i] && *ref.std_errors[i] > 0.0) scales[i] = *ref.std_errors[i];
      }
    }
  }
  if (fixed) init[layout(spec).offset[0]] = cfg.threshold;
  const std::vector<double> init_r = reduce(init);
  const std::vector<double> scales_r = reduce(scales);
  const double d = static_cast<double>(init_r.size());

  // Explicit --steps are used as given; otherwise the MLE standard errors are
  // scaled by the usual dimension-dependent factors.
  std::vector<double> widths = scales_r;
  if (!cfg.steps) {
    const double factor = cfg.sampler == SamplerKind::RW ? 2.38 / std::sqrt(d)
                                                          : 1.2 * std::pow(d, -1.0 / 6.0);
    for (double& w : widths) w *= factor;
  }
  std::vector<double> mass(scales_r.size());
  for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = 1.0 / (scales_r[i] * scales_r[i]);

  const RunLength run{cfg.num_samples, cfg.burn_in, cfg.thin};
  auto run_chain = [&](std::size_t k) {
    Rng rng(cfg.seed, k);
    std::vector<double> start = init_r;
    if (!cfg.init) {
      // Over-dispersed starts around the MLE so that R-hat is informative.
      for (int attempt = 0; attempt < kDispersionAttempts; ++attempt) {
        std::vector<double> trial(init_r.size());
        for (std::size_t i = 0; i < trial.size(); ++i) {
          trial[i] = init_r[i] + 2.0 * scales_r[i] * rng.normal();
        }
        if (std::isfinite(target.log_post(trial)) &&
            (cfg.sampler == SamplerKind::RW ||
             std::ranges::all_of(target.grad_log_post(trial),
                                 [](double g) { return std::isfinite(g); }))) {
          start = std::move(trial);
          break;
        }
      }
    }
    switch (cfg.sampler) {
      case SamplerKind::RW:
        return mh_random_walk(target, start, widths, rng, run);
      case SamplerKind::MALA:
        return mala(target, start, widths, rng, run);
      case SamplerKind::HMC:
        return hmc(target, start, cfg.eps, cfg.leapfrog_steps, mass, rng, run);
    }
    throw ConfigError("unknown sampler");
  };

  std::vector<std::future<Chain>> futures;
  for (std::size_t k = 0; k < cfg.chains; ++k) {
    futures.push_back(std::async(std::launch::async, run_chain, k));
  }
  std::vector<Chain> chains;
  for (auto& f : futures) chains.push_back(expand_chain(f.get(), fixed));

  std::filesystem::create_directories(cfg.output);
  const auto names = param_names(spec);
  for (std::size_t k = 0; k < chains.size(); ++k) {
    std::vector<std::vector<double>> rows;
    rows.reserve(chains[k].size());
    for (std::size_t i = 0; i < chains[k].size(); ++i) {
      const auto r = chains[k].row(i);
      rows.emplace_back(r.begin(), r.end());
    }
    io::write_csv(cfg.output / ("trace_" + std::to_string(k) + ".csv"), names, rows);
  }

  json doc;
  doc["sampler"] = std::string(to_string(cfg.sampler));
  doc["dist"] = std::string(to_string(spec.family));
  doc["config"] = config_json(spec.config);
  doc["seed"] = cfg.seed;
  doc["chains"] = cfg.chains;
  doc["num_samples"] = cfg.num_samples;
  doc["burn_in"] = run.burn();
  doc["thin"] = cfg.thin;
  doc["temperature"] = cfg.temperature;
  doc["param_names"] = names;
  json rates = json::array();
  json divergent = json::array();
  for (const auto& c : chains) {
    rates.push_back(c.acceptance_rate);
    divergent.push_back(c.divergent);
  }
  doc["acceptance_rates"] = rates;
  doc["divergent"] = divergent;
  json params = json::array();
  for (const auto& row : posterior_summary(chains, spec)) {
    params.push_back({{"name", row.name},
                      {"mean", row.mean},
                      {"sd", row.sd},
                      {"q05", row.q05},
                      {"q50", row.q50},
                      {"q95", row.q95},
                      {"rhat", diagnostic_json(row.rhat)},
                      {"rhat_degenerate", row.rhat.degenerate},
                      {"ess", diagnostic_json(row.ess)},
                      {"ess_degenerate", row.ess.degenerate}});
  }
  doc["parameters"] = params;
  if (cfg.num_samples * cfg.chains >= 100) {
    const DicResult r = dic(chains, spec);
    doc["dic"] = {{"dic", r.dic},
                  {"p_d", r.p_d},
                  {"mean_deviance", r.mean_deviance},
                  {"deviance_at_mean", r.deviance_at_mean}};
  } else {
    doc["dic"] = nullptr;
  }

  if (cfg.return_period) {
    doc["return_period"] = *cfg.return_period;
    std::vector<std::vector<double>> draws;
    std::size_t total = 0;
    for (const auto& c : chains) total += c.size();
    const std::size_t stride = std::max<std::size_t>(1, total / kMaxReturnLevelDraws);
    std::size_t index = 0;
    std::vector<double> mean(dim, 0.0);
    for (const auto& c : chains) {
      for (std::size_t i = 0; i < c.size(); ++i, ++index) {
        const auto r = c.row(i);
        for (std::size_t j = 0; j < dim; ++j) mean[j] += r[j] / static_cast<double>(total);
        if (index % stride == 0) draws.push_back(return_levels(spec, r, *cfg.return_period));
      }
    }
    const auto at_mean = return_levels(spec, mean, *cfg.return_period);
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < spec.data.size(); ++t) {
      std::vector<double> column;
      for (const auto& dr : draws) column.push_back(dr[t]);
      std::sort(column.begin(), column.end());
      rows.push_back({static_cast<double>(t), at_mean[t], sample_quantile(column, 0.05),
                      sample_quantile(column, 0.5), sample_quantile(column, 0.95)});
    }
    io::write_csv(cfg.output / "return_levels.csv",
                  {"index", "return_level", "q05", "q50", "q95"}, rows);
  }
  io::write_text(cfg.output / "summary.json", io::to_json_text(doc));
  return kOk;
}

int do_simulate(const RunConfig& cfg) {
  if (!cfg.true_params) throw ConfigError("simulate requires --true-params");
  ModelSpec spec;
  spec.family = cfg.dist;
  spec.config = cfg.config;
  spec.threshold = cfg.threshold;
  std::vector<std::string> cov_names;
  if (cfg.covariates_file) {
    io::NumericTable table = io::read_numeric_csv(*cfg.covariates_file);
    if (table.rows.empty()) throw ConfigError("covariates file has no rows");
    spec.covariates = Matrix(table.rows.size(), table.columns.size());
    for (std::size_t t = 0; t < table.rows.size(); ++t) {
      for (std::size_t j = 0; j < table.columns.size(); ++j) spec.covariates(t, j) = table.rows[t][j];
    }
    cov_names = table.columns;
  } else {
    if (cfg.n < 1) throw ConfigError("--n must be at least 1");
    const int needed = std::max({cfg.config.loc, cfg.config.scale, cfg.config.shape});
    const std::size_t m = cfg.num_covariates.value_or(static_cast<std::size_t>(needed));
    spec.covariates = Matrix(cfg.n, m);
    for (std::size_t t = 0; t < cfg.n; ++t) {
      const double ramp =
          cfg.n == 1 ? 0.0 : cfg.ramp_max * static_cast<double>(t) / static_cast<double>(cfg.n - 1);
      for (std::size_t j = 0; j < m; ++j) spec.covariates(t, j) = ramp;
    }
    for (std::size_t j = 0; j < m; ++j) cov_names.push_back("cov_" + std::to_string(j));
  }
  spec.data.assign(spec.covariates.rows() > 0 ? spec.covariates.rows() : cfg.n, 0.0);
  require_valid(spec);
  const auto theta = check_length(*cfg.true_params, spec, "--true-params");
  const auto triples = realize(spec, theta);
  Rng rng(cfg.seed, 0);

  std::vector<std::string> header{"value"};
  header.insert(header.end(), cov_names.begin(), cov_names.end());
  std::vector<std::vector<double>> rows;
  for (std::size_t t = 0; t < triples.size(); ++t) {
    std::vector<double> row{sample(spec.family, triples[t], rng)};
    for (std::size_t j = 0; j < spec.covariates.cols(); ++j) row.push_back(spec.covariates(t, j));
    rows.push_back(std::move(row));
  }
  std::filesystem::create_directories(cfg.output);
  io::write_csv(cfg.output / "simulated.csv", header, rows);
  return kOk;
}

int do_lrt(const RunConfig& cfg) {
  const ModelSpec null_spec = build_spec(cfg, cfg.config);
  ModelSpec alt_spec = null_spec;
  alt_spec.config = cfg.alt_config;
  require_valid(alt_spec);
  nested_df(null_spec, alt_spec);

  const FullFit null_fit = fit_model(cfg, null_spec);
  FullFit alt_fit = fit_model(cfg, alt_spec);
  std::vector<double> embedded = embed_theta(null_spec, alt_spec, null_fit.fit.theta_hat);
  if (infer_bounds(alt_spec).contains(embedded)) {
    FullFit from_null = fit_model(cfg, alt_spec, embedded);
    if (from_null.fit.nll_min < alt_fit.fit.nll_min) alt_fit = std::move(from_null);
  }
  if (!null_fit.fit.converged || !alt_fit.fit.converged) {
    throw NumericalError("lrt: maximum likelihood fit did not converge");
  }
  const LrtResult r =
      lrt_from_fits(null_spec, alt_spec, null_fit.fit.nll_min, alt_fit.fit.nll_min);
  json doc;
  doc["statistic"] = r.statistic;
  doc["df"] = r.df;
  doc["p_value"] = r.p_value;
  doc["nll_null"] = r.nll_null;
  doc["nll_alt"] = r.nll_alt;
  doc["config_null"] = config_json(null_spec.config);
  doc["config_alt"] = config_json(alt_spec.config);
  std::filesystem::create_directories(cfg.output);
  io::write_text(cfg.output / "lrt.json", io::to_json_text(doc));
  return kOk;
}

void report(const char* kind, const std::string& message) {
  json err{{"error", kind}, {"message", message}};
  std::cerr << err.dump() << std::endl;
}

}  // namespace

CsvData load_csv(const std::filesystem::path& path) {
  io::NumericTable table = io::read_numeric_csv(path);
  std::size_t value_col = table.columns.size();
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (lower(table.columns[c]) == "value") {
      value_col = c;
      break;
    }
  }
  if (value_col == table.columns.size()) {
    std::string available;
    for (const auto& c : table.columns) available += (available.empty() ? "" : ", ") + c;
    throw ConfigError(path.string() + ": no 'value' column (available: " + available + ")");
  }
  if (table.rows.empty()) throw ConfigError(path.string() + ": no data rows");

  CsvData out;
  const std::size_t m = table.columns.size() - 1;
  out.covariates = Matrix(table.rows.size(), m);
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c != value_col) out.covariate_names.push_back(table.columns[c]);
  }
  for (std::size_t t = 0; t < table.rows.size(); ++t) {
    out.data.push_back(table.rows[t][value_col]);
    std::size_t j = 0;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c != value_col) out.covariates(t, j++) = table.rows[t][c];
    }
  }
  return out;
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "' in '" + text + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size() || !std::isfinite(value)) {
      throw ConfigError("cannot parse number '" + item + "' in '" + text + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) throw ConfigError("empty list '" + text + "'");
  return out;
}

Config parse_config(const std::string& text) {
  const auto v = parse_vector(text);
  if (v.size() != 3) throw ConfigError("--config needs three integers a,b,c, got '" + text + "'");
  int counts[3];
  for (int i = 0; i < 3; ++i) {
    if (v[i] < 0 || v[i] != std::floor(v[i])) {
      throw ConfigError("--config entries must be non-negative integers, got '" + text + "'");
    }
    counts[i] = static_cast<int>(v[i]);
  }
  return Config{counts[0], counts[1], counts[2]};
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv) {
  CLI::App app{"Stationary and non-stationary GEV / GPD fitting"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string dist = "gev";
  std::string config = "0,0,0";
  std::string alt_config;
  std::string sampler = "rw";
  std::string init;
  std::string steps;
  std::string true_params;
  std::string input;
  std::string output = ".";
  std::string priors;
  std::string bounds;
  std::string covariates;
  std::optional<std::uint64_t> seed;
  std::size_t burn_in = 0;
  std::size_t num_covariates = 0;
  double return_period = 0.0;

  auto common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input,-i", input, "CSV with a 'value' column and covariates");
    if (needs_input) in->required()->check(CLI::ExistingFile);
    sub->add_option("--output,-o", output, "Output directory");
    sub->add_option("--dist", dist, "gev or gpd");
    sub->add_option("--config", config, "Covariate counts a,b,c for location, scale, shape");
    sub->add_option("--threshold", cfg.threshold, "GPD threshold (location when a = 0)");
    sub->add_flag("--free-location", cfg.free_location, "Estimate the GPD location when a = 0");
    sub->add_option("--seed", seed, "Random seed (default: $EXTREMEFIT_SEED or 1)");
  };

  auto* fit = app.add_subcommand("fit", "Maximum likelihood fit");
  common(fit, true);
  fit->add_option("--init", init, "Starting parameters, comma separated");
  fit->add_option("--bounds", bounds, "JSON bounds file");
  fit->add_option("--return-period", return_period, "Also report return levels");

  auto* smp = app.add_subcommand("sample", "Bayesian posterior sampling");
  common(smp, true);
  smp->add_option("--sampler", sampler, "rw, mala or hmc");
  smp->add_option("--num-samples", cfg.num_samples, "Retained draws per chain");
  smp->add_option("--burn-in", burn_in, "Discarded initial iterations (default 25% of num-samples)");
  smp->add_option("--thin", cfg.thin, "Keep every k-th draw");
  smp->add_option("--chains", cfg.chains, "Number of chains");
  smp->add_option("--temp", cfg.temperature, "Temperature T of the target posterior^(1/T)");
  smp->add_option("--init", init, "Initial parameters, comma separated");
  smp->add_option("--steps", steps,
                  "Per-parameter proposal widths (rw), step sizes (mala) or scales (hmc)");
  smp->add_option("--eps", cfg.eps, "HMC leapfrog step size");
  smp->add_option("--leapfrog-steps", cfg.leapfrog_steps, "HMC leapfrog steps per iteration");
  smp->add_option("--priors", priors, "JSON prior file");
  smp->add_option("--bounds", bounds, "JSON bounds file for the reference fit");
  smp->add_option("--return-period", return_period, "Write return_levels.csv");

  auto* sim = app.add_subcommand("simulate", "Simulate data from given parameters");
  common(sim, false);
  sim->add_option("--true-params", true_params, "Parameters, comma separated")->required();
  sim->add_option("--n", cfg.n, "Number of observations (ramp covariates)");
  sim->add_option("--covariates", covariates, "CSV of covariates to use instead of a ramp")
      ->check(CLI::ExistingFile);
  sim->add_option("--num-covariates", num_covariates, "Number of ramp covariate columns");
  sim->add_option("--ramp-max", cfg.ramp_max, "Ramp covariates run from 0 to this value");

  auto* lrt_cmd = app.add_subcommand("lrt", "Likelihood ratio test of nested configs");
  common(lrt_cmd, true);
  lrt_cmd->add_option("--alt-config", alt_config, "Alternative config a,b,c")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  if (fit->parsed()) cfg.command = Command::Fit;
  if (smp->parsed()) cfg.command = Command::Sample;
  if (sim->parsed()) cfg.command = Command::Simulate;
  if (lrt_cmd->parsed()) cfg.command = Command::Lrt;

  cfg.dist = parse_family(dist);
  cfg.config = parse_config(config);
  if (!alt_config.empty()) cfg.alt_config = parse_config(alt_config);
  cfg.sampler = parse_sampler(sampler);
  cfg.input = input;
  cfg.output = output;
  if (!init.empty()) cfg.init = parse_vector(init);
  if (!steps.empty()) cfg.steps = parse_vector(steps);
  if (!true_params.empty()) cfg.true_params = parse_vector(true_params);
  if (!priors.empty()) cfg.priors_file = priors;
  if (!bounds.empty()) cfg.bounds_file = bounds;
  if (!covariates.empty()) cfg.covariates_file = covariates;
  if (smp->count("--burn-in") > 0) cfg.burn_in = burn_in;
  if (sim->count("--num-covariates") > 0) cfg.num_covariates = num_covariates;
  if (return_period != 0.0) {
    if (!(return_period > 1.0)) throw ConfigError("--return-period must exceed 1");
    cfg.return_period = return_period;
  }
  if (cfg.thin < 1) throw ConfigError("--thin must be at least 1");
  if (cfg.chains < 1) throw ConfigError("--chains must be at least 1");
  if (cfg.num_samples < 1) throw ConfigError("--num-samples must be at least 1");
  if (!(cfg.eps > 0.0)) throw ConfigError("--eps must be positive");
  if (cfg.leapfrog_steps < 1) throw ConfigError("--leapfrog-steps must be at least 1");

  if (seed) {
    cfg.seed = *seed;
  } else if (const char* env = std::getenv("EXTREMEFIT_SEED")) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("EXTREMEFIT_SEED is not an unsigned integer: ") + env);
    }
  }
  return cfg;
}

int run(const RunConfig& cfg) {
  try {
    switch (cfg.command) {
      case Command::Fit:
        return do_fit(cfg);
      case Command::Sample:
        return do_sample(cfg);
      case Command::Simulate:
        return do_simulate(cfg);
      case Command::Lrt:
        return do_lrt(cfg);
    }
  } catch (const ConfigError& e) {
    report("config", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    report("numerical", e.what());
    return kNumericalError;
  }
  return kOk;
}

int main(int argc, const char* const* argv) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const ConfigError& e) {
    report("config", e.what());
    return kConfigError;
  }
  if (!cfg) return kOk;
  return run(*cfg);
}

}  // namespace extremefit::cli
