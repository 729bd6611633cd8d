#include "aasg/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace aasg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct KvTable {
  std::map<std::string, std::string> kv;  // "section.key" -> raw value
  std::map<std::string, bool> used;

  template <typename T>
  T get(const std::string& name, T fallback, bool required) {
    auto it = kv.find(name);
    if (it == kv.end()) {
      if (required) throw ConfigError("config: missing required key '" + name + "'");
      return fallback;
    }
    used[name] = true;
    std::istringstream is(it->second);
    T v{};
    std::string rest;
    if (!(is >> v) || (is >> rest))
      throw ConfigError("config: cannot parse value for '" + name + "': " + it->second);
    return v;
  }
};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  KvTable table;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section header at line " +
                          std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected 'key = value' at line " +
                        std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: empty key or value at line " + std::to_string(lineno));
    const std::string full = section.empty() ? key : section + "." + key;
    if (!table.kv.emplace(full, value).second)
      throw ConfigError("config: duplicate key '" + full + "'");
  }

  RunConfig cfg;
  cfg.grid_n = table.get<int>("grid.n", 0, true);
  cfg.kl_c = table.get<double>("field.c", 0.0, true);
  cfg.kl_sigma = table.get<double>("field.sigma", 0.0, true);
  cfg.kl_mean = table.get<double>("field.a0", 1.0, false);
  cfg.N = table.get<int>("stochastic.N", 0, true);
  cfg.p = table.get<int>("stochastic.p", 0, true);
  cfg.tol_adapt = table.get<double>("stochastic.tol", 0.0, false);
  cfg.max_order = table.get<int>("stochastic.max_order", 0, false);
  cfg.catalog_budget =
      table.get<std::uint64_t>("stochastic.catalog_budget", 200000, false);
  cfg.solver_tol = table.get<double>("solver.tol", 1e-8, false);
  cfg.solver_maxit = table.get<int>("solver.maxit", 0, false);
  cfg.mc_samples = table.get<std::size_t>("mc.samples", 0, false);
  cfg.mc_seed = table.get<std::uint64_t>("mc.seed", 1, false);
  cfg.mc_threads = table.get<int>("mc.threads", 1, false);

  for (const auto& [key, value] : table.kv)
    if (!table.used.count(key))
      throw ConfigError("config: unknown key '" + key + "'");

  if (cfg.grid_n < 2) throw ConfigError("config: grid.n must be >= 2");
  if (cfg.N < 1) throw ConfigError("config: stochastic.N must be >= 1");
  if (cfg.p < 1) throw ConfigError("config: stochastic.p must be >= 1");
  if (!(cfg.kl_c > 0.0)) throw ConfigError("config: field.c must be > 0");
  if (cfg.kl_sigma < 0.0) throw ConfigError("config: field.sigma must be >= 0");
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

AasgConfig RunConfig::aasg() const {
  AasgConfig c;
  c.N = N;
  c.p = p;
  c.tol_adapt = tol_adapt;
  c.grid_n = grid_n;
  c.kl_c = kl_c;
  c.kl_sigma = kl_sigma;
  c.kl_mean = kl_mean;
  c.solver_tol = solver_tol;
  c.solver_maxit = solver_maxit;
  c.max_order = max_order;
  return c;
}

McOptions RunConfig::mc() const {
  McOptions o;
  o.samples = mc_samples;
  o.seed = mc_seed;
  o.threads = mc_threads;
  o.solver_tol = solver_tol;
  o.solver_maxit = solver_maxit;
  return o;
}

}  // namespace aasg
