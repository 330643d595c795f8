// cli.cpp - `nmspin timeseries|heatmap` argument handling and dispatch

#include "nmspin/harness/cli.hpp"

#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nmspin/errors.hpp"
#include "nmspin/harness/config.hpp"
#include "nmspin/harness/export.hpp"
#include "nmspin/harness/plot.hpp"
#include "nmspin/harness/sweep.hpp"
#include "nmspin/version.hpp"

namespace nmspin::harness {

namespace {

// Raw flag values. Unset fields keep the subcommand's defaults.
struct Flags {
    std::optional<std::string> kernel, kbar, dbar, observables, sign_convention, out, format;
    std::optional<double> tau_max, theta, nu, abs_tol, rel_tol;
    std::optional<int> tau_points, jobs, blp_theta, blp_nu, blp_refine, max_subdivisions;
    bool closed_form{false};
    bool plot{false};
};

void add_flags(CLI::App& app, Flags& f) {
    app.add_option("--kernel", f.kernel, "Memory kernel: delta | exponential | modulated");
    app.add_option("--kbar", f.kbar, "Coupling rates 𝕜: list a,b,c or range lo:hi:n[:log]");
    app.add_option("--dbar", f.dbar, "Detunings Δ̄: list or range");
    app.add_option("--tau-max", f.tau_max, "Final dimensionless time");
    app.add_option("--tau-points", f.tau_points, "Grid points (0 = step from the fastest scale)");
    app.add_option("--theta", f.theta, "Initial polar angle θ in [0, π]");
    app.add_option("--nu", f.nu, "Initial phase ν");
    app.add_option("--observables", f.observables,
                   "Comma list of coherence,population,qfi_flow,trace_distance,blp (or 'none')");
    app.add_option("--sign-convention", f.sign_convention, "Population difference: up-down | down-up");
    app.add_flag("--closed-form", f.closed_form, "Use closed-form Γ, Φ and report deviation from quadrature");
    app.add_option("--out", f.out, "Output directory");
    app.add_option("--format", f.format, "Data file format: csv | json");
    app.add_flag("--plot", f.plot, "Render SVG figures from the written files");
    app.add_option("--jobs", f.jobs, "Worker threads (0 = hardware concurrency)");
    app.add_option("--blp-theta-points", f.blp_theta, "BLP search: θ grid points");
    app.add_option("--blp-nu-points", f.blp_nu, "BLP search: ν grid points");
    app.add_option("--blp-refine", f.blp_refine, "BLP search: local refinement rounds");
    app.add_option("--quad-abs-tol", f.abs_tol, "Quadrature absolute tolerance");
    app.add_option("--quad-rel-tol", f.rel_tol, "Quadrature relative tolerance");
    app.add_option("--max-subdivisions", f.max_subdivisions, "Quadrature subdivision limit per panel");
}

RunConfig resolve(RunMode mode, const Flags& f) {
    RunConfig c = mode == RunMode::Heatmap ? RunConfig::heatmap_defaults() : RunConfig::timeseries_defaults();
    if (f.kernel) c.kernel = parse_kernel_kind(*f.kernel);
    if (f.kbar) c.kappa_bar = parse_axis(*f.kbar);
    if (f.dbar) c.delta_bar = parse_axis(*f.dbar);
    if (f.tau_max) c.tau_max = *f.tau_max;
    if (f.tau_points) c.tau_points = *f.tau_points;
    if (f.theta) c.prep.theta = *f.theta;
    if (f.nu) c.prep.nu = *f.nu;
    if (f.observables) c.observables = *f.observables == "none" ? std::vector<Observable>{} : parse_observables(*f.observables);
    if (f.sign_convention) c.sign_convention = parse_sign_convention(*f.sign_convention);
    c.use_closed_form = f.closed_form;
    if (f.out) c.output_dir = *f.out;
    if (f.format) c.output_format = parse_format(*f.format);
    c.plot = f.plot;
    if (f.jobs) c.jobs = *f.jobs;
    if (f.blp_theta) c.blp.pair_grid_theta = *f.blp_theta;
    if (f.blp_nu) c.blp.pair_grid_nu = *f.blp_nu;
    if (f.blp_refine) c.blp.refine_iterations = *f.blp_refine;
    if (f.abs_tol) c.quadrature.abs_tol = *f.abs_tol;
    if (f.rel_tol) c.quadrature.rel_tol = *f.rel_tol;
    if (f.max_subdivisions) c.quadrature.max_subdivisions = *f.max_subdivisions;
    c.validate();
    return c;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Qubit decoherence under a random-coupling spin bath: time series and BLP heatmaps", "nmspin"};
    app.set_version_flag("--version", std::string(version));
    app.set_config("--config", "", "TOML/INI file with the same keys as the flags (flags take precedence)");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    Flags flags;
    add_flags(app, flags);
    auto* ts = app.add_subcommand("timeseries", "Per-τ observables for every (𝕜, Δ̄) point")->fallthrough();
    auto* hm = app.add_subcommand("heatmap", "BLP measure 𝒩 over a (𝕜, Δ̄) grid")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? ExitSuccess : ExitConfigError;
    }

    RunConfig cfg;
    try {
        cfg = resolve(ts->parsed() ? RunMode::Timeseries : RunMode::Heatmap, flags);
    } catch (const Error& e) {
        err << "nmspin: configuration error: " << e.what() << '\n';
        return ExitConfigError;
    }
    (void)hm;

    bool numeric_ok = true;
    std::vector<std::filesystem::path> files;
    try {
        if (cfg.mode == RunMode::Timeseries) {
            const auto ds = run_timeseries(cfg);
            numeric_ok = ds.all_ok();
            files = export_timeseries(ds, cfg.output_dir);
            for (const auto& r : ds.records)
                if (!r.ok()) err << "nmspin: point 𝕜=" << r.kappa_bar << " Δ̄=" << r.delta_bar << " failed: " << r.error << '\n';
        } else {
            const auto grid = run_heatmap(cfg);
            numeric_ok = grid.all_ok();
            files = export_heatmap(grid, cfg.output_dir);
            for (const auto& c : grid.cells)
                if (!c.ok()) err << "nmspin: cell 𝕜=" << c.kappa_bar << " Δ̄=" << c.delta_bar << " failed: " << c.error << '\n';
        }
        if (cfg.plot && numeric_ok) {
            const auto plots = render_plots(cfg.output_dir);
            files.insert(files.end(), plots.begin(), plots.end());
        }
    } catch (const ConfigError& e) {
        err << "nmspin: configuration error: " << e.what() << '\n';
        return ExitConfigError;
    } catch (const IoError& e) {
        err << "nmspin: " << e.what() << '\n';
        return ExitConfigError;
    } catch (const std::exception& e) {
        err << "nmspin: numeric failure: " << e.what() << '\n';
        return ExitNumericFailure;
    }

    out << "wrote " << files.size() << " files to " << cfg.output_dir.string() << '\n';
    if (!numeric_ok) {
        err << "nmspin: some points failed; details in " << (cfg.output_dir / "manifest.json").string() << '\n';
        return ExitNumericFailure;
    }
    return ExitSuccess;
}

} // namespace nmspin::harness
