#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "aasg/adaptive.hpp"
#include "aasg/config.hpp"
#include "aasg/galerkin.hpp"
#include "aasg/montecarlo.hpp"
#include "aasg/randomfield.hpp"

// File formats of the command-line front end. All floating-point output uses
// 17 significant digits so written values read back bitwise equal.

namespace aasg {

inline constexpr int kFormatVersion = 1;

// Field CSV: header "x1,x2,value", one row per interior node, row-major.
void write_field_csv(const std::filesystem::path& path, const Grid2d& grid,
                     const GridFunction& v);
// Reads the value column; returns the field and checks the row count against
// nothing (the caller knows its grid).
GridFunction read_field_csv(const std::filesystem::path& path);

// Coefficients payload: catalog.json + coefficients.csv (single value column,
// block-major) + coefficients_manifest.json (N, p, grid n, field parameters,
// format version).
void write_coefficients(const std::filesystem::path& dir,
                        const GpcCoefficients& coeffs, const RunConfig& config);
GpcCoefficients read_coefficients(const std::filesystem::path& dir);

// KL spectrum CSV for the kl-report command. Column lambda2d includes the
// sigma^2 factor; lambda1d_* are the unit-variance per-axis factors paired as
// (omega_1, omega_2) per mode.
void write_kl_report_csv(const std::filesystem::path& path, const KlField& field);

std::string config_to_json(const RunConfig& config);

// summary.json shared by the run commands:
// { "method", "config", "rounds": [ {k, J_size, Jtilde_size, catalog,
//   cg_iters, seconds} ], "final": { k, catalog, ... } }
std::string aasg_summary_json(const RunConfig& config, const AasgResult& result);
std::string sgm_summary_json(const RunConfig& config, const SgmResult& result,
                             std::size_t catalog_size);
std::string mc_summary_json(const RunConfig& config, const McRunReport& report);

// manifest.json: config echo, artifact version, command, timestamps, and the
// produced files (each is checked to exist on successful exit).
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const RunConfig* config,
                    const std::vector<std::string>& outputs);

}  // namespace aasg
