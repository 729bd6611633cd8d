#include "aasg/io.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace aasg {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

nlohmann::json rounds_json(const std::vector<RoundInfo>& rounds) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rounds) {
    nlohmann::json jr;
    jr["k"] = r.k;
    jr["J_size"] = r.active;
    jr["Jtilde_size"] = r.retained;
    jr["catalog"] = r.catalog;
    jr["cg_iters"] = r.solve.iterations;
    jr["seconds"] = r.solve.seconds;
    arr.push_back(jr);
  }
  return arr;
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const Grid2d& grid,
                     const GridFunction& v) {
  if (v.size() != grid.interior_count())
    throw std::invalid_argument("write_field_csv: field size mismatch");
  auto out = open_out(path);
  out << "x1,x2,value\n";
  for (std::size_t s = 0; s < v.size(); ++s) {
    const auto [x1, x2] = grid.interior_coord(s);
    out << fmt17(x1) << ',' << fmt17(x2) << ',' << fmt17(v[s]) << '\n';
  }
}

GridFunction read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("x1,x2,value", 0) != 0)
    throw std::runtime_error("bad field CSV header in " + path.string());
  GridFunction v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto last = line.find_last_of(',');
    if (last == std::string::npos)
      throw std::runtime_error("bad field CSV row in " + path.string());
    v.push_back(std::stod(line.substr(last + 1)));
  }
  return v;
}

void write_coefficients(const std::filesystem::path& dir,
                        const GpcCoefficients& coeffs, const RunConfig& config) {
  open_out(dir / "catalog.json") << coeffs.catalog.to_json() << '\n';

  auto data = open_out(dir / "coefficients.csv");
  data << "value\n";
  for (double v : coeffs.data) data << fmt17(v) << '\n';

  nlohmann::json m;
  m["format_version"] = kFormatVersion;
  m["N"] = coeffs.catalog.dimension();
  m["p"] = coeffs.catalog.degree();
  m["grid_n"] = config.grid_n;
  m["field"] = {{"c", config.kl_c}, {"sigma", config.kl_sigma}, {"a0", config.kl_mean}};
  m["n_stoch"] = coeffs.catalog.size();
  m["n_phy"] = coeffs.n_phy;
  open_out(dir / "coefficients_manifest.json") << m.dump(2) << '\n';
}

GpcCoefficients read_coefficients(const std::filesystem::path& dir) {
  GpcCoefficients coeffs;
  coeffs.catalog = IndexCatalog::from_json(slurp(dir / "catalog.json"));

  const auto m = nlohmann::json::parse(slurp(dir / "coefficients_manifest.json"));
  if (m.at("format_version").get<int>() != kFormatVersion)
    throw std::runtime_error("coefficients: unsupported format version");
  coeffs.n_phy = m.at("n_phy").get<std::size_t>();

  std::ifstream in(dir / "coefficients.csv");
  if (!in) throw std::runtime_error("cannot read coefficients.csv");
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line))
    if (!line.empty()) coeffs.data.push_back(std::stod(line));
  if (coeffs.data.size() != coeffs.catalog.size() * coeffs.n_phy)
    throw std::runtime_error("coefficients: payload size does not match manifest");
  return coeffs;
}

void write_kl_report_csv(const std::filesystem::path& path, const KlField& field) {
  auto out = open_out(path);
  out << "# 2-D KL modes of the separable exponential kernel, largest first.\n"
         "# lambda2d = sigma^2 * lambda1d_1 * lambda1d_2, the product of the\n"
         "# per-axis unit-variance eigenvalues at frequencies (omega_1, omega_2).\n"
         "# fraction = lambda2d / sigma^2 (per-mode share of the total field\n"
         "# variance); cumulative sums the fractions so far.\n";
  out << "mode,lambda2d,omega_1,omega_2,lambda1d_1,lambda1d_2,fraction,cumulative\n";
  double cum = 0.0;
  const double total = field.sigma * field.sigma;
  for (std::size_t m = 0; m < field.spectrum.size(); ++m) {
    const auto& mode = field.spectrum[m];
    const auto& ax_i = field.axis_modes[mode.i - 1];
    const auto& ax_j = field.axis_modes[mode.j - 1];
    const double frac = total > 0.0 ? mode.lambda / total : 0.0;
    cum += frac;
    out << (m + 1) << ',' << fmt17(mode.lambda) << ',' << fmt17(ax_i.omega) << ','
        << fmt17(ax_j.omega) << ',' << fmt17(ax_i.lambda) << ','
        << fmt17(ax_j.lambda) << ',' << fmt17(frac) << ',' << fmt17(cum) << '\n';
  }
}

std::string config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["grid"]["n"] = c.grid_n;
  j["field"] = {{"c", c.kl_c}, {"sigma", c.kl_sigma}, {"a0", c.kl_mean}};
  j["stochastic"] = {{"N", c.N},
                     {"p", c.p},
                     {"tol", c.tol_adapt},
                     {"max_order", c.max_order},
                     {"catalog_budget", c.catalog_budget}};
  j["solver"] = {{"tol", c.solver_tol}, {"maxit", c.solver_maxit}};
  j["mc"] = {{"samples", c.mc_samples}, {"seed", c.mc_seed}, {"threads", c.mc_threads}};
  return j.dump();
}

std::string aasg_summary_json(const RunConfig& config, const AasgResult& result) {
  nlohmann::json j;
  j["method"] = "aasg";
  j["config"] = nlohmann::json::parse(config_to_json(config));
  j["rounds"] = rounds_json(result.rounds);
  j["final"]["k"] = result.final_order;
  j["final"]["catalog"] = result.coeffs.catalog.size();
  j["positivity"] = result.positivity;
  double solve_seconds = 0.0;
  for (const auto& r : result.rounds) solve_seconds += r.solve.seconds;
  j["final"]["solve_seconds"] = solve_seconds;
  auto gamma = nlohmann::json::array();
  for (const auto& [T, g] : result.gamma)
    gamma.push_back({{"set", T.members}, {"gamma", g}});
  j["gamma"] = gamma;
  return j.dump(2);
}

std::string sgm_summary_json(const RunConfig& config, const SgmResult& result,
                             std::size_t catalog_size) {
  nlohmann::json j;
  j["method"] = "sgm";
  j["config"] = nlohmann::json::parse(config_to_json(config));
  auto rounds = nlohmann::json::array();
  rounds.push_back({{"k", 0},
                    {"J_size", 0},
                    {"Jtilde_size", 0},
                    {"catalog", catalog_size},
                    {"cg_iters", result.solve.iterations},
                    {"seconds", result.solve.seconds}});
  j["rounds"] = rounds;
  j["final"]["k"] = 0;
  j["final"]["catalog"] = catalog_size;
  j["final"]["solve_seconds"] = result.solve.seconds;
  return j.dump(2);
}

std::string mc_summary_json(const RunConfig& config, const McRunReport& report) {
  nlohmann::json j;
  j["method"] = "mc";
  j["config"] = nlohmann::json::parse(config_to_json(config));
  j["rounds"] = nlohmann::json::array();
  j["final"]["samples"] = report.samples;
  j["final"]["seed"] = report.seed;
  j["final"]["threads"] = report.threads;
  j["final"]["seconds"] = report.seconds;
  j["final"]["solve_seconds"] = report.solve_seconds;
  j["final"]["mean_iterations"] = report.mean_iterations;
  return j.dump(2);
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const RunConfig* config,
                    const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["artifact_version"] = "aasg-uq-0.1.0";
  j["command"] = command;
  j["timestamp"] = iso_timestamp();
  if (config) j["config"] = nlohmann::json::parse(config_to_json(*config));
  j["outputs"] = outputs;
  for (const auto& name : outputs)
    if (!std::filesystem::exists(dir / name))
      throw std::runtime_error("manifest: output file missing: " + name);
  open_out(dir / "manifest.json") << j.dump(2) << '\n';
}

}  // namespace aasg
