#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

#include "aasg/adaptive.hpp"
#include "aasg/io.hpp"
#include "support/oracles.hpp"

using namespace aasg;
namespace fs = std::filesystem;

namespace {

fs::path bin_path() {
  const char* p = std::getenv("AASG_UQ_BIN");
  REQUIRE_MESSAGE(p != nullptr, "AASG_UQ_BIN must point at the CLI binary");
  return p;
}

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("aasg_cli_" + tag + "_" + std::to_string(::getpid()) +
                        "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, std::string* output = nullptr) {
  const fs::path log = fs::temp_directory_path() /
                       ("aasg_cli_log_" + std::to_string(::getpid()) + ".txt");
  const std::string cmd =
      bin_path().string() + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (output) {
    std::ifstream in(log);
    std::ostringstream buf;
    buf << in.rdbuf();
    *output = buf.str();
  }
  return WEXITSTATUS(status);
}

void write_config(const fs::path& path, int N, int p, double tol, int n,
                  std::size_t samples = 50, const std::string& extra = "") {
  std::ofstream out(path);
  out << "[grid]\nn = " << n << "\n[field]\nc = 0.25\nsigma = 0.25\na0 = 1.0\n"
      << "[stochastic]\nN = " << N << "\np = " << p << "\ntol = " << tol
      << "\n[solver]\ntol = 1e-10\n[mc]\nsamples = " << samples
      << "\nseed = 7\nthreads = 1\n"
      << extra;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE_MESSAGE(in.good(), "missing " << p.string());
  nlohmann::json j;
  in >> j;
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("aasg run writes the full output set") {
  const auto dir = fresh_dir("aasg");
  const auto cfg = dir / "run.toml";
  write_config(cfg, 4, 3, 1e-3, 8);

  const int rc = run_cli("aasg --config " + cfg.string() + " --out " +
                         (dir / "out").string());
  CHECK(rc == 0);
  for (const char* name :
       {"mean.csv", "variance.csv", "summary.json", "catalog.json",
        "coefficients.csv", "coefficients_manifest.json", "manifest.json"})
    CHECK_MESSAGE(fs::exists(dir / "out" / name), name);

  const auto summary = read_json(dir / "out" / "summary.json");
  CHECK(summary.at("method") == "aasg");
  CHECK(summary.at("config").at("stochastic").at("N") == 4);
  CHECK(summary.at("rounds").size() >= 1);
  CHECK(summary.at("rounds")[0].at("catalog") == 1 + 4 * 3);
  CHECK(summary.at("final").at("catalog").get<std::size_t>() >= 13);

  // coefficients round trip
  const auto coeffs = read_coefficients(dir / "out");
  CHECK(coeffs.catalog.size() == summary.at("final").at("catalog").get<std::size_t>());

  fs::remove_all(dir);
}

TEST_CASE("the 10-dimensional configuration reports two rounds at tol 1e-3") {
  const auto dir = fresh_dir("case1");
  const auto cfg = dir / "run.toml";
  write_config(cfg, 10, 5, 1e-3, 32);
  const int rc = run_cli("aasg --config " + cfg.string() + " --out " +
                         (dir / "out").string());
  CHECK(rc == 0);
  const auto summary = read_json(dir / "out" / "summary.json");
  CHECK(summary.at("final").at("k") == 2);
  CHECK(summary.at("final").at("catalog") == 501);
  fs::remove_all(dir);
}

TEST_CASE("huge tolerance stops after the first-order space") {
  const auto dir = fresh_dir("tol10");
  const auto cfg = dir / "run.toml";
  write_config(cfg, 5, 4, 10.0, 8);
  const int rc = run_cli("aasg --config " + cfg.string() + " --out " +
                         (dir / "out").string());
  CHECK(rc == 0);
  const auto summary = read_json(dir / "out" / "summary.json");
  CHECK(summary.at("rounds").size() == 1);
  CHECK(summary.at("final").at("k") == 1);
  CHECK(summary.at("final").at("catalog") == 1 + 5 * 4);
  fs::remove_all(dir);
}

TEST_CASE("missing config key names the field and exits 2") {
  const auto dir = fresh_dir("badcfg");
  const auto cfg = dir / "run.toml";
  std::ofstream(cfg) << "[grid]\nn = 8\n[field]\nc = 0.25\nsigma = 0.25\n"
                        "[stochastic]\nN = 4\n";  // p missing
  std::string output;
  const int rc = run_cli("aasg --config " + cfg.string() + " --out " +
                             (dir / "out").string(),
                         &output);
  CHECK(rc == 2);
  CHECK(output.find("stochastic.p") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("sgm catalog sizes and the budget guard") {
  const auto dir = fresh_dir("sgm");

  SUBCASE("N=4, p=6 solves the 210-entry space") {
    const auto cfg = dir / "run.toml";
    write_config(cfg, 4, 6, 1e-3, 4);
    const int rc = run_cli("sgm --config " + cfg.string() + " --out " +
                           (dir / "out").string());
    CHECK(rc == 0);
    const auto summary = read_json(dir / "out" / "summary.json");
    CHECK(summary.at("final").at("catalog") == 210);
  }

  SUBCASE("N=50, p=5 exceeds the budget with the documented count") {
    const auto cfg = dir / "run50.toml";
    write_config(cfg, 50, 5, 1e-3, 4);
    std::string output;
    const int rc = run_cli("sgm --config " + cfg.string() + " --out " +
                               (dir / "out50").string(),
                           &output);
    CHECK(rc == 4);
    CHECK(output.find("3478761") != std::string::npos);
  }

  fs::remove_all(dir);
}

TEST_CASE("compare of a run against itself is exactly zero") {
  const auto dir = fresh_dir("cmp");
  const auto cfg = dir / "run.toml";
  write_config(cfg, 3, 3, 1e-2, 8);
  REQUIRE(run_cli("aasg --config " + cfg.string() + " --out " +
                  (dir / "a").string()) == 0);

  const int rc = run_cli("compare --ref " + (dir / "a").string() + " --approx " +
                         (dir / "a").string() + " --out " + (dir / "c").string());
  CHECK(rc == 0);
  const auto errs = read_json(dir / "c" / "errors.json");
  CHECK(errs.at("E_err") == 0.0);
  CHECK(errs.at("V_err") == 0.0);
  CHECK(fs::exists(dir / "c" / "cost_error.csv"));
  fs::remove_all(dir);
}

TEST_CASE("a starved solver budget exits 3") {
  const auto dir = fresh_dir("maxit");
  const auto cfg = dir / "run.toml";
  std::ofstream(cfg) << "[grid]\nn = 8\n[field]\nc = 0.25\nsigma = 0.25\n"
                        "[stochastic]\nN = 4\np = 3\ntol = 1e-3\n"
                        "[solver]\ntol = 1e-12\nmaxit = 1\n";
  std::string output;
  const int rc = run_cli("aasg --config " + cfg.string() + " --out " +
                             (dir / "out").string(),
                         &output);
  CHECK(rc == 3);
  CHECK(output.find("tolerance") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("compare works across methods") {
  const auto dir = fresh_dir("cross");
  const auto cfg = dir / "run.toml";
  write_config(cfg, 3, 5, 1e-3, 8, 200);
  REQUIRE(run_cli("sgm --config " + cfg.string() + " --out " +
                  (dir / "ref").string()) == 0);
  REQUIRE(run_cli("mc --config " + cfg.string() + " --out " +
                  (dir / "mc").string()) == 0);
  const int rc = run_cli("compare --ref " + (dir / "ref").string() +
                         " --approx " + (dir / "mc").string() + " --out " +
                         (dir / "cmp").string());
  CHECK(rc == 0);
  const auto errs = read_json(dir / "cmp" / "errors.json");
  const double e = errs.at("E_err").get<double>();
  const double v = errs.at("V_err").get<double>();
  CHECK(e > 0.0);
  CHECK(e < 1.0);
  CHECK(v > 0.0);
  CHECK(v < 1.0);
  fs::remove_all(dir);
}

TEST_CASE("compare rejects runs on different grids with exit 5") {
  const auto dir = fresh_dir("cmp5");
  const auto cfg_a = dir / "a.toml";
  const auto cfg_b = dir / "b.toml";
  write_config(cfg_a, 3, 2, 1e-2, 8);
  write_config(cfg_b, 3, 2, 1e-2, 16);
  REQUIRE(run_cli("aasg --config " + cfg_a.string() + " --out " +
                  (dir / "a").string()) == 0);
  REQUIRE(run_cli("aasg --config " + cfg_b.string() + " --out " +
                  (dir / "b").string()) == 0);
  std::string output;
  const int rc = run_cli("compare --ref " + (dir / "a").string() + " --approx " +
                             (dir / "b").string() + " --out " +
                             (dir / "c").string(),
                         &output);
  CHECK(rc == 5);
  CHECK(output.find("grid mismatch") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("mc outputs are bitwise identical across thread counts") {
  const auto dir = fresh_dir("mc");
  const auto cfg = dir / "run.toml";
  write_config(cfg, 3, 2, 1e-2, 8, 100);

  REQUIRE(run_cli("mc --config " + cfg.string() + " --out " +
                  (dir / "t1").string() + " --threads 1") == 0);
  REQUIRE(run_cli("mc --config " + cfg.string() + " --out " +
                  (dir / "t3").string() + " --threads 3") == 0);

  CHECK(slurp(dir / "t1" / "mean.csv") == slurp(dir / "t3" / "mean.csv"));
  CHECK(slurp(dir / "t1" / "variance.csv") == slurp(dir / "t3" / "variance.csv"));

  // a different seed changes the fields
  REQUIRE(run_cli("mc --config " + cfg.string() + " --out " +
                  (dir / "s2").string() + " --seed 8") == 0);
  CHECK(slurp(dir / "t1" / "mean.csv") != slurp(dir / "s2" / "mean.csv"));

  const auto summary = read_json(dir / "t1" / "summary.json");
  CHECK(summary.at("method") == "mc");
  CHECK(summary.at("final").at("samples") == 100);
  CHECK(summary.at("final").at("mean_iterations").get<double>() > 0.0);
  fs::remove_all(dir);
}

TEST_CASE("kl-report emits the spectrum with the documented pairing") {
  const auto dir = fresh_dir("kl");
  const auto cfg = dir / "run.toml";
  std::ofstream(cfg) << "[grid]\nn = 8\n[field]\nc = 1.0\nsigma = 0.5\n"
                        "[stochastic]\nN = 4\np = 2\n";
  REQUIRE(run_cli("kl-report --config " + cfg.string() + " --out " +
                  (dir / "out").string()) == 0);

  std::ifstream in(dir / "out" / "kl_report.csv");
  std::string line;
  while (std::getline(in, line) && !line.empty() && line[0] == '#') continue;
  CHECK(line.rfind("mode,", 0) == 0);
  REQUIRE(std::getline(in, line));  // first data row
  std::vector<double> cols;
  std::istringstream row(line);
  std::string cell;
  while (std::getline(row, cell, ',')) cols.push_back(std::stod(cell));
  REQUIRE(cols.size() == 8);
  // per-axis eigenvalue 0.7388 at c=1; 2-D mode is its square times sigma^2
  CHECK(cols[4] == doctest::Approx(0.7388).epsilon(1e-3));
  CHECK(cols[1] == doctest::Approx(0.25 * 0.7388 * 0.7388).epsilon(1e-3));
  fs::remove_all(dir);
}

TEST_CASE("field csv round trips bitwise") {
  const auto dir = fresh_dir("roundtrip");
  const Grid2d grid(8);
  GridFunction v(grid.interior_count());
  test::Rng rng(12345);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  write_field_csv(dir / "f.csv", grid, v);
  const auto back = read_field_csv(dir / "f.csv");
  REQUIRE(back.size() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(back[i] == v[i]);
  fs::remove_all(dir);
}
