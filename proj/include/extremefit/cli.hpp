#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "extremefit/distributions.hpp"
#include "extremefit/model.hpp"
#include "extremefit/samplers.hpp"

namespace extremefit::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalError = 2 };

struct CsvData {
  std::vector<double> data;
  Matrix covariates;
  std::vector<std::string> covariate_names;
};

// The column named "value" (any case) is the data; every other numeric column,
// in file order, becomes a covariate.
CsvData load_csv(const std::filesystem::path& path);

enum class Command { Fit, Sample, Simulate, Lrt };

struct RunConfig {
  Command command = Command::Fit;
  std::filesystem::path input;
  std::filesystem::path output = ".";
  EvdFamily dist = EvdFamily::GEV;
  Config config;
  Config alt_config;  // lrt only
  // GPD: threshold; the location is held at it when config.loc == 0 unless
  // free_location is set.
  double threshold = 0.0;
  bool free_location = false;

  SamplerKind sampler = SamplerKind::RW;
  std::size_t num_samples = 10000;
  std::optional<std::size_t> burn_in;
  std::size_t thin = 1;
  std::size_t chains = 4;
  std::uint64_t seed = 1;
  double temperature = 1.0;
  std::optional<std::vector<double>> init;
  std::optional<std::vector<double>> steps;
  double eps = 0.25;  // hmc, in units of the per-coordinate scales
  int leapfrog_steps = 10;

  std::optional<std::filesystem::path> priors_file;
  std::optional<std::filesystem::path> bounds_file;
  std::optional<double> return_period;

  // simulate
  std::optional<std::vector<double>> true_params;
  std::size_t n = 100;
  std::optional<std::filesystem::path> covariates_file;
  std::optional<std::size_t> num_covariates;
  double ramp_max = 1.0;
};

// "1,0,0" -> {1, 0, 0}. Throws ConfigError.
std::vector<double> parse_vector(const std::string& text);
Config parse_config(const std::string& text);

// Seed precedence: --seed, then EXTREMEFIT_SEED, then 1.
// Returns nullopt when help was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv);

// Executes a validated configuration. Errors are reported as one JSON line on
// stderr and mapped to ExitCode.
int run(const RunConfig& cfg);

int main(int argc, const char* const* argv);

}  // namespace extremefit::cli
