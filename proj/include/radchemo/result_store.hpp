#pragma once

#include "radchemo/harness.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace radchemo {

/// 17 significant digits; "nan" for NaN.
std::string format_number(double x);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// samples.csv: t, phi, psi, sup_u, mass, vmax, residual_w_bound,
/// residual_phi_bound, residual_vlower, residual_rvr, residual_wt.
void write_samples_csv(const std::filesystem::path& path, const std::vector<FunctionalSample>& samples);

/// summary.csv: beta, M, classification, t_blowup, grid_N.
void write_summary_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

/// `dir`/samples.csv and `dir`/manifest.json.
void write_run(const std::filesystem::path& dir, const RunOutcome& outcome);

/// `dir`/summary.csv and `dir`/manifest.json.
void write_sweep(const std::filesystem::path& dir, const std::vector<SweepRow>& rows, const nlohmann::json& manifest);

/// `dir`/mstar.csv (M, classification, t_blowup per trial) and `dir`/manifest.json.
void write_mstar(const std::filesystem::path& dir, const MStarResult& result, const nlohmann::json& manifest);

/// `dir`/compare.csv (t, rel_discrepancy) and `dir`/manifest.json.
void write_compare(const std::filesystem::path& dir, const CompareReport& report, const nlohmann::json& manifest);

}  // namespace radchemo
