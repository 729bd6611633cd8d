#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "aasg/adaptive.hpp"
#include "aasg/montecarlo.hpp"

// Experiment configuration: one flat key-value file with TOML-style section
// headers ([grid], [field], [stochastic], [solver], [mc]). Hand-editable and
// diff-able; the parsed struct is echoed verbatim into every run summary so
// a summary plus a seed reproduces the run.

namespace aasg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // [grid]
  int grid_n = 0;
  // [field]
  double kl_c = 0.0;
  double kl_sigma = 0.0;
  double kl_mean = 1.0;
  // [stochastic]
  int N = 0;
  int p = 0;
  double tol_adapt = 0.0;           // required by the aasg command
  int max_order = 0;                // 0 = no cap
  std::uint64_t catalog_budget = 200000;
  // [solver]
  double solver_tol = 1e-8;
  int solver_maxit = 0;             // 0 = 10 * n_stoch
  // [mc]
  std::size_t mc_samples = 0;       // required by the mc command
  std::uint64_t mc_seed = 1;
  int mc_threads = 1;

  AasgConfig aasg() const;
  McOptions mc() const;
};

// Parses and validates; unknown or missing keys raise ConfigError naming the
// offending "section.key".
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace aasg
