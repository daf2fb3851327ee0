#pragma once

#include "ebc/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ebc {

/// Loads a SweepConfig from a JSON object or flat "key = value" text; list
/// values in the flat form are comma separated. Unknown keys are rejected.
/// Fields not present keep their defaults.
SweepConfig load_sweep_config(const std::filesystem::path& path);
SweepConfig parse_sweep_config(const std::string& text);

/// Recovers the sweep configuration recorded in a run_manifest.json.
SweepConfig load_manifest_config(const std::filesystem::path& path);

/// Full-precision record table (records.csv) used by `report`.
void write_records_csv(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_records_csv(std::istream& is);

/// Per-profile NMSE-vs-rate table: system,n_bits,rate_hz,nmse.
void write_fig4_csv(std::ostream& os, const std::vector<SweepRecord>& records, double w_mean);
/// w_mean,target_nmse,p_rel for attainable rows.
void write_fig5_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);
/// w_mean,target_nmse,b_rel,b_rel_worst for attainable rows with a defined b_rel.
void write_fig6_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);
/// Every comparison row including the unattainable ones.
void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);

/// Manifest as JSON text: configuration, seed and FNV-1a hashes of the grids.
std::string run_manifest(const SweepConfig& config, const std::vector<ComparisonRow>& rows);

/// Writes fig4_<w>.csv per profile, fig5.csv, fig6.csv, comparison.csv,
/// records.csv and run_manifest.json into out_dir (created if missing).
/// Throws std::runtime_error naming the path on I/O failure.
std::vector<std::filesystem::path> emit_outputs(const std::vector<ComparisonRow>& rows,
                                                const std::vector<SweepRecord>& records,
                                                const SweepConfig& config, const std::filesystem::path& out_dir);

} // namespace ebc
