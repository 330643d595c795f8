// export.hpp - CSV/JSON serialization of sweep results and the run manifest
//
// File layout under the output directory:
//   timeseries_<kernel>_k<i>_d<j>.{csv,json}   one per (𝕜, Δ̄) point
//   heatmap_<kernel>_N.csv                     𝒩 matrix, 𝕜 rows × Δ̄ columns
//   heatmap_<kernel>_kbar.csv / _dbar.csv       axis values
//   heatmap_<kernel>_cells.csv                  per-cell metadata, row-major
//   manifest.json                              config, discrepancies, errors
//
// Floats are written with 17 significant digits so a re-parse is bit-exact.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "nmspin/harness/sweep.hpp"

namespace nmspin::harness {

inline constexpr int manifest_schema_version = 1;

/// Shortest text of `v` at 17 significant digits ("nan", "inf" for non-finite).
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Column by header name; throws IoError when absent.
    std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

std::string timeseries_file_name(const TimeseriesRecord& rec, OutputFormat fmt);

nlohmann::ordered_json config_to_json(const RunConfig& cfg);

/// Writes one file per point plus manifest.json; returns every path written.
std::vector<std::filesystem::path> export_timeseries(const TimeseriesDataset& ds, const std::filesystem::path& dir);

/// Writes the matrix, axis and cell files plus manifest.json.
std::vector<std::filesystem::path> export_heatmap(const SweepGrid& grid, const std::filesystem::path& dir);

} // namespace nmspin::harness
