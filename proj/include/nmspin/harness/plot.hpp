// plot.hpp - SVG figures rendered purely from exported files
//
// Plots never touch the numeric core: they read manifest.json and the data
// files it lists. Time series give one figure per (observable, Δ̄) with a line
// per 𝕜; heatmaps give one colour-mapped 𝒩(𝕜, Δ̄) grid.

#pragma once

#include <filesystem>
#include <vector>

namespace nmspin::harness {

/// Renders every figure for the run in `data_dir` into `data_dir/plots`.
/// Throws NoDataError when the manifest lists no successful point.
std::vector<std::filesystem::path> render_plots(const std::filesystem::path& data_dir);

} // namespace nmspin::harness
