#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "aasg/adaptive.hpp"
#include "aasg/config.hpp"
#include "aasg/io.hpp"
#include "aasg/montecarlo.hpp"

// Exit codes: 0 success, 2 configuration problem, 3 solver failure,
// 4 budget exceeded, 5 input mismatch, 1 anything else.

namespace {

namespace fs = std::filesystem;
using namespace aasg;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void warn_on_positivity(double bound) {
  if (bound <= 0.0)
    std::cerr << "warning: coefficient lower bound " << bound
              << " is not positive; the diffusion problem may lose "
                 "well-posedness for extreme samples\n";
}

void write_run_outputs(const fs::path& out, const RunConfig& config,
                       const Grid2d& grid, const GridFunction& mean,
                       const GridFunction& variance,
                       const GpcCoefficients* coeffs,
                       const std::string& summary, const std::string& command) {
  fs::create_directories(out);
  write_field_csv(out / "mean.csv", grid, mean);
  write_field_csv(out / "variance.csv", grid, variance);
  std::vector<std::string> outputs = {"mean.csv", "variance.csv", "summary.json"};
  if (coeffs) {
    write_coefficients(out, *coeffs, config);
    outputs.insert(outputs.end(),
                   {"catalog.json", "coefficients.csv", "coefficients_manifest.json"});
  }
  std::ofstream(out / "summary.json") << summary << '\n';
  write_manifest(out, command, &config, outputs);
}

int cmd_aasg(const std::string& config_path, const fs::path& out) {
  const RunConfig config = parse_config(config_path);
  if (!(config.tol_adapt > 0.0))
    throw ConfigError("config: missing required key 'stochastic.tol'");
  const AasgResult result = run_aasg(config.aasg());
  warn_on_positivity(result.positivity);
  const Grid2d grid(config.grid_n);
  write_run_outputs(out, config, grid, result.mean, result.variance,
                    &result.coeffs, aasg_summary_json(config, result), "aasg");
  return 0;
}

int cmd_sgm(const std::string& config_path, const fs::path& out) {
  const RunConfig config = parse_config(config_path);
  const std::uint64_t full = binomial(config.N + config.p, config.N);
  if (full > config.catalog_budget) {
    std::ostringstream os;
    os << "sgm: full catalog needs " << full
       << " basis functions, over the configured budget of "
       << config.catalog_budget;
    throw BudgetExceeded(os.str());
  }
  const Grid2d grid(config.grid_n);
  const KlField field =
      kl_2d(config.kl_c, config.kl_sigma, config.N, grid, config.kl_mean);
  warn_on_positivity(positivity_report(field));
  const SgmResult result =
      run_full_sgm(config.aasg(), build_operator_set(grid, field));
  write_run_outputs(out, config, grid, result.mean, result.variance,
                    &result.coeffs,
                    sgm_summary_json(config, result, result.coeffs.catalog.size()),
                    "sgm");
  return 0;
}

int cmd_mc(const std::string& config_path, const fs::path& out,
           std::uint64_t* seed_override, int* threads_override) {
  RunConfig config = parse_config(config_path);
  if (seed_override) config.mc_seed = *seed_override;
  if (threads_override) config.mc_threads = *threads_override;
  if (config.mc_samples < 2)
    throw ConfigError("config: missing required key 'mc.samples' (need >= 2)");

  const Grid2d grid(config.grid_n);
  const KlField field =
      kl_2d(config.kl_c, config.kl_sigma, config.N, grid, config.kl_mean);
  warn_on_positivity(positivity_report(field));
  const McResult result = run_mc(field, grid, config.mc());
  write_run_outputs(out, config, grid, result.mean, result.variance, nullptr,
                    mc_summary_json(config, result.report), "mc");
  return 0;
}

int cmd_kl_report(const std::string& config_path, const fs::path& out) {
  const RunConfig config = parse_config(config_path);
  const Grid2d grid(config.grid_n);
  const KlField field =
      kl_2d(config.kl_c, config.kl_sigma, config.N, grid, config.kl_mean);
  fs::create_directories(out);
  write_kl_report_csv(out / "kl_report.csv", field);
  write_manifest(out, "kl-report", &config, {"kl_report.csv"});
  return 0;
}

nlohmann::json load_summary(const fs::path& dir) {
  std::ifstream in(dir / "summary.json");
  if (!in)
    throw std::runtime_error("compare: cannot read " +
                             (dir / "summary.json").string());
  nlohmann::json j;
  in >> j;
  return j;
}

int cmd_compare(const fs::path& ref_dir, const fs::path& approx_dir,
                const fs::path& out) {
  const nlohmann::json ref_sum = load_summary(ref_dir);
  const nlohmann::json ap_sum = load_summary(approx_dir);

  const int ref_n = ref_sum.at("config").at("grid").at("n").get<int>();
  const int ap_n = ap_sum.at("config").at("grid").at("n").get<int>();
  if (ref_n != ap_n) {
    std::ostringstream os;
    os << "compare: grid mismatch (reference n=" << ref_n << ", approx n=" << ap_n
       << ")";
    throw InputMismatch(os.str());
  }
  if (ref_sum.at("config").at("field") != ap_sum.at("config").at("field"))
    std::cerr << "warning: compare inputs use different field parameters\n";

  const Grid2d grid(ref_n);
  const GridFunction ref_mean = read_field_csv(ref_dir / "mean.csv");
  const GridFunction ref_var = read_field_csv(ref_dir / "variance.csv");
  const GridFunction ap_mean = read_field_csv(approx_dir / "mean.csv");
  const GridFunction ap_var = read_field_csv(approx_dir / "variance.csv");
  const auto [e_err, v_err] = compare_errors(grid, ap_mean, ap_var, ref_mean, ref_var);

  double cost = 0.0;
  if (ap_sum.at("final").contains("solve_seconds"))
    cost = ap_sum.at("final").at("solve_seconds").get<double>();

  fs::create_directories(out);
  nlohmann::json errs;
  errs["E_err"] = e_err;
  errs["V_err"] = v_err;
  errs["cost_seconds"] = cost;
  errs["reference"] = ref_dir.string();
  errs["approx"] = approx_dir.string();
  std::ofstream(out / "errors.json") << errs.dump(2) << '\n';

  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", cost, e_err, v_err);
  std::ofstream csv(out / "cost_error.csv");
  csv << "cost_seconds,e_err,v_err\n" << buf;

  write_manifest(out, "compare", nullptr, {"errors.json", "cost_error.csv"});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive ANOVA stochastic Galerkin solver for diffusion "
               "problems with high-dimensional random coefficients"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::string ref_dir, approx_dir;
  std::uint64_t seed = 0;
  int threads = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    if (needs_config)
      sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory");
  };

  CLI::App* aasg_cmd = app.add_subcommand("aasg", "adaptive ANOVA Galerkin run");
  add_common(aasg_cmd);
  CLI::App* sgm_cmd = app.add_subcommand("sgm", "full stochastic Galerkin run");
  add_common(sgm_cmd);
  CLI::App* mc_cmd = app.add_subcommand("mc", "Monte Carlo baseline run");
  add_common(mc_cmd);
  CLI::Option* seed_opt = mc_cmd->add_option("--seed", seed, "override mc.seed");
  CLI::Option* threads_opt =
      mc_cmd->add_option("--threads", threads, "override mc.threads");
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "errors of one run against a reference");
  compare_cmd->add_option("--ref", ref_dir, "reference run directory")->required();
  compare_cmd->add_option("--approx", approx_dir, "approximate run directory")
      ->required();
  add_common(compare_cmd, false);
  CLI::App* kl_cmd = app.add_subcommand("kl-report", "KL spectrum CSV");
  add_common(kl_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(aasg_cmd)) return cmd_aasg(config_path, out_dir);
    if (app.got_subcommand(sgm_cmd)) return cmd_sgm(config_path, out_dir);
    if (app.got_subcommand(mc_cmd))
      return cmd_mc(config_path, out_dir, seed_opt->count() ? &seed : nullptr,
                    threads_opt->count() ? &threads : nullptr);
    if (app.got_subcommand(compare_cmd))
      return cmd_compare(ref_dir, approx_dir, out_dir);
    if (app.got_subcommand(kl_cmd)) return cmd_kl_report(config_path, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SolveFailure& e) {
    std::cerr << "error: " << e.what() << " (iterations=" << e.report.iterations
              << ", residual=" << e.report.relative_residual << ")\n";
    return 3;
  } catch (const SolverBreakdown& e) {
    std::cerr << "error: " << e.what() << " (iteration " << e.iteration << ")\n";
    return 3;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const InputMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
