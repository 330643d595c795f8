// sweep.hpp - Time-series and heatmap orchestration over (𝕜, Δ̄) points

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nmspin/blp.hpp"
#include "nmspin/harness/config.hpp"
#include "nmspin/kernels.hpp"
#include "nmspin/witnesses.hpp"

namespace nmspin::harness {

struct Column {
    std::string name;
    Eigen::ArrayXd values;
};

/// One (kernel, 𝕜, Δ̄) point of a time-series run.
struct TimeseriesRecord {
    KernelKind kernel{};
    double kappa_bar{}, delta_bar{};
    std::size_t kappa_index{}, delta_index{};
    std::vector<Column> columns;  // tau, gamma, phi, gamma_rate, then observables
    std::optional<DiscrepancyReport> discrepancy;  // closed form vs quadrature
    std::optional<QfiDiscrepancy> qfi_discrepancy;
    std::optional<BlpResult> blp;
    std::optional<double> first_channel_violation;
    std::string error;  // non-empty when the point failed numerically

    bool ok() const { return error.empty(); }
    const Column* column(std::string_view name) const;
};

struct TimeseriesDataset {
    RunConfig config;
    std::vector<TimeseriesRecord> records;  // 𝕜-major order

    bool all_ok() const;
};

struct HeatmapCell {
    double kappa_bar{}, delta_bar{};
    double n_value{0.0};
    double canonical_value{0.0};
    PreparationPair best_pair{canonical_pair()};
    std::size_t backflow_intervals{0};
    std::optional<DiscrepancyReport> discrepancy;
    std::string error;

    bool ok() const { return error.empty(); }
};

struct SweepGrid {
    RunConfig config;
    std::vector<double> kappa_axis;
    std::vector<double> delta_axis;
    std::vector<HeatmapCell> cells;  // row-major, 𝕜 outer

    const HeatmapCell& at(std::size_t i_kappa, std::size_t j_delta) const {
        return cells[i_kappa * delta_axis.size() + j_delta];
    }
    bool all_ok() const;
};

/// Trajectory for one point following the config's grid and method choice.
DecoherenceTrajectory point_trajectory(const RunConfig& cfg, const ModelParams& params);

TimeseriesRecord compute_timeseries_point(const RunConfig& cfg, std::size_t i_kappa, std::size_t j_delta);
TimeseriesDataset run_timeseries(const RunConfig& cfg);

HeatmapCell compute_heatmap_cell(const RunConfig& cfg, double kappa_bar, double delta_bar);
SweepGrid run_heatmap(const RunConfig& cfg);

} // namespace nmspin::harness
