// sweep.cpp - Per-point computations and the parallel sweep drivers

#include "nmspin/harness/sweep.hpp"

#include <cmath>
#include <numbers>

#include "nmspin/channel.hpp"
#include "nmspin/errors.hpp"
#include "nmspin/harness/parallel.hpp"

namespace nmspin::harness {

namespace {

Eigen::ArrayXd tau_grid_for(const RunConfig& cfg, const ModelParams& params) {
    return cfg.tau_points > 0 ? uniform_tau_grid(cfg.tau_max, cfg.tau_points)
                              : resolved_tau_grid(params, cfg.tau_max);
}

// Closed form vs quadrature oracle; the delta kernel is symbolic on both sides.
DiscrepancyReport oracle_check(const RunConfig& cfg, const ModelParams& params, const DecoherenceTrajectory& traj) {
    if (params.kernel.kind == KernelKind::Delta) {
        DiscrepancyReport r;
        r.kind = KernelKind::Delta;
        r.kappa_bar = params.kernel.kappa_bar;
        r.delta_bar = params.delta_bar;
        r.tolerance = 1e-6;
        return r;
    }
    const auto oracle = decoherence_numeric(params, traj.tau, cfg.quadrature);
    return compare_trajectories(params, traj, oracle, 1e-6);
}

PureStatePrepd antipode(const PureStatePrepd& p) {
    double nu = std::fmod(p.nu + std::numbers::pi, 2.0 * std::numbers::pi);
    if (nu < 0.0) nu += 2.0 * std::numbers::pi;
    return {std::numbers::pi - p.theta, nu};
}

} // namespace

const Column* TimeseriesRecord::column(std::string_view name) const {
    for (const auto& c : columns)
        if (c.name == name) return &c;
    return nullptr;
}

bool TimeseriesDataset::all_ok() const {
    for (const auto& r : records)
        if (!r.ok()) return false;
    return true;
}

bool SweepGrid::all_ok() const {
    for (const auto& c : cells)
        if (!c.ok()) return false;
    return true;
}

DecoherenceTrajectory point_trajectory(const RunConfig& cfg, const ModelParams& params) {
    const auto method = cfg.use_closed_form ? DecoherenceMethod::ClosedForm : DecoherenceMethod::Quadrature;
    return decoherence(params, tau_grid_for(cfg, params), method, cfg.quadrature);
}

TimeseriesRecord compute_timeseries_point(const RunConfig& cfg, std::size_t i_kappa, std::size_t j_delta) {
    TimeseriesRecord rec;
    rec.kernel = cfg.kernel;
    rec.kappa_bar = cfg.kappa_bar[i_kappa];
    rec.delta_bar = cfg.delta_bar[j_delta];
    rec.kappa_index = i_kappa;
    rec.delta_index = j_delta;

    const ModelParams params(KernelSpec(cfg.kernel, rec.kappa_bar), rec.delta_bar);
    const auto traj = point_trajectory(cfg, params);
    if (cfg.use_closed_form) rec.discrepancy = oracle_check(cfg, params, traj);

    rec.columns = {{"tau", traj.tau}, {"gamma", traj.gamma}, {"phi", traj.phi}, {"gamma_rate", traj.gamma_rate}};
    const Eigen::Index n = traj.size();

    if (cfg.wants(Observable::Coherence) || cfg.wants(Observable::Population)) {
        Eigen::ArrayXd coherence(n), population(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto rho = evolve_state(cfg.prep, traj.gamma[i], traj.phi[i]);
            coherence[i] = coherence_l1(rho);
            population[i] = population_difference(rho, cfg.sign_convention);
        }
        if (cfg.wants(Observable::Coherence)) rec.columns.push_back({"coherence", coherence});
        if (cfg.wants(Observable::Population)) rec.columns.push_back({"population_difference", population});
    }
    if (cfg.wants(Observable::QfiFlow)) {
        auto q = qfi_series(cfg.prep.theta, traj);
        rec.columns.push_back({"f_theta", std::move(q.f_theta)});
        rec.columns.push_back({"f_nu", std::move(q.f_nu)});
        rec.columns.push_back({"flow_theta", std::move(q.flow_theta)});
        rec.columns.push_back({"flow_nu", std::move(q.flow_nu)});
        rec.qfi_discrepancy = qfi_path_discrepancy(cfg.prep.theta, cfg.prep.nu, traj);
    }
    if (cfg.wants(Observable::TraceDistance)) {
        auto s = sigma_series(cfg.prep, antipode(cfg.prep), traj);
        rec.columns.push_back({"trace_distance", std::move(s.distance)});
        rec.columns.push_back({"sigma", std::move(s.sigma)});
    }
    if (cfg.wants(Observable::Blp)) rec.blp = blp_measure(traj, cfg.blp);

    const auto validation = validate_channel(traj);
    rec.first_channel_violation = validation.first_violation_tau;
    return rec;
}

TimeseriesDataset run_timeseries(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.mode != RunMode::Timeseries) throw ConfigError("run_timeseries needs mode = timeseries");
    const std::size_t nk = cfg.kappa_bar.size(), nd = cfg.delta_bar.size();
    TimeseriesDataset ds{cfg, std::vector<TimeseriesRecord>(nk * nd)};
    parallel_for(nk * nd, cfg.jobs, [&](std::size_t idx) {
        const std::size_t i = idx / nd, j = idx % nd;
        try {
            ds.records[idx] = compute_timeseries_point(cfg, i, j);
        } catch (const std::exception& e) {
            auto& r = ds.records[idx];
            r.kernel = cfg.kernel;
            r.kappa_bar = cfg.kappa_bar[i];
            r.delta_bar = cfg.delta_bar[j];
            r.kappa_index = i;
            r.delta_index = j;
            r.error = e.what();
        }
    });
    return ds;
}

HeatmapCell compute_heatmap_cell(const RunConfig& cfg, double kappa_bar, double delta_bar) {
    HeatmapCell cell;
    cell.kappa_bar = kappa_bar;
    cell.delta_bar = delta_bar;
    const ModelParams params(KernelSpec(cfg.kernel, kappa_bar), delta_bar);
    const auto traj = point_trajectory(cfg, params);
    if (cfg.use_closed_form) cell.discrepancy = oracle_check(cfg, params, traj);
    const auto blp = blp_measure(traj, cfg.blp);
    cell.n_value = blp.n_value;
    cell.canonical_value = blp.canonical_value;
    cell.best_pair = blp.best_pair;
    cell.backflow_intervals = blp.backflow_intervals.size();
    return cell;
}

SweepGrid run_heatmap(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.mode != RunMode::Heatmap) throw ConfigError("run_heatmap needs mode = heatmap");
    SweepGrid grid{cfg, cfg.kappa_bar, cfg.delta_bar, {}};
    const std::size_t nk = cfg.kappa_bar.size(), nd = cfg.delta_bar.size();
    grid.cells.resize(nk * nd);
    parallel_for(nk * nd, cfg.jobs, [&](std::size_t idx) {
        const double k = cfg.kappa_bar[idx / nd], d = cfg.delta_bar[idx % nd];
        try {
            grid.cells[idx] = compute_heatmap_cell(cfg, k, d);
        } catch (const std::exception& e) {
            auto& c = grid.cells[idx];
            c.kappa_bar = k;
            c.delta_bar = d;
            c.error = e.what();
        }
    });
    return grid;
}

} // namespace nmspin::harness
