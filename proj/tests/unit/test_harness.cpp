// test_harness.cpp - Configuration, sweeps, export, plots and the CLI front end

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "nmspin/errors.hpp"
#include "nmspin/harness/cli.hpp"
#include "nmspin/harness/config.hpp"
#include "nmspin/harness/export.hpp"
#include "nmspin/harness/plot.hpp"
#include "nmspin/harness/sweep.hpp"
#include "support.hpp"

using namespace nmspin;
using namespace nmspin::harness;
namespace fs = std::filesystem;

namespace {

RunConfig small_timeseries() {
    auto c = RunConfig::timeseries_defaults();
    c.kappa_bar = {0.1, 1.0};
    c.delta_bar = {0.0, 5.0};
    c.tau_max = 10.0;
    c.tau_points = 201;
    c.jobs = 1;
    return c;
}

RunConfig small_heatmap(KernelKind kind = KernelKind::Exponential) {
    auto c = RunConfig::heatmap_defaults();
    c.kernel = kind;
    c.kappa_bar = parse_axis("0.05:1:3:log");
    c.delta_bar = parse_axis("0:4:3");
    c.tau_max = 40.0;
    c.jobs = 1;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::ordered_json load(const fs::path& p) { return nlohmann::ordered_json::parse(slurp(p)); }

int cli(std::vector<std::string> args, std::string* err_text = nullptr) {
    args.insert(args.begin(), "nmspin");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (err_text) *err_text = err.str();
    return code;
}

} // namespace

// ================================================================ config ====

TEST_CASE("axis syntax") {
    CHECK(parse_axis("0.1, 0.5,2") == std::vector<double>{0.1, 0.5, 2.0});
    const auto lin = parse_axis("0:6:4");
    REQUIRE(lin.size() == 4);
    CHECK(lin[1] == doctest::Approx(2.0));
    CHECK(lin.back() == 6.0);
    const auto lg = parse_axis("0.01:1:3:log");
    CHECK(lg[1] == doctest::Approx(0.1));
    CHECK(lg.back() == 1.0);
    CHECK(parse_axis("3:9:1") == std::vector<double>{3.0});
    CHECK_THROWS_AS(parse_axis(""), ConfigError);
    CHECK_THROWS_AS(parse_axis("1:2"), ConfigError);
    CHECK_THROWS_AS(parse_axis("1:2:0"), ConfigError);
    CHECK_THROWS_AS(parse_axis("0:1:5:log"), ConfigError);
    CHECK_THROWS_AS(parse_axis("1:2:3:cubic"), ConfigError);
    CHECK_THROWS_AS(parse_axis("a,b"), ConfigError);
}

TEST_CASE("observable and enum parsing") {
    CHECK(parse_observables("blp, coherence,blp") == std::vector<Observable>{Observable::Blp, Observable::Coherence});
    CHECK(parse_observables("").empty());
    CHECK_THROWS_AS(parse_observable("entropy"), ConfigError);
    CHECK(parse_format("json") == OutputFormat::Json);
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
    CHECK(parse_sign_convention("up-down") == SignConvention::UpMinusDown);
    CHECK_THROWS_AS(parse_sign_convention("sideways"), ConfigError);
}

TEST_CASE("config validation") {
    CHECK_NOTHROW(RunConfig::timeseries_defaults().validate());
    CHECK_NOTHROW(RunConfig::heatmap_defaults().validate());
    auto c = RunConfig::timeseries_defaults();
    c.tau_points = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.tau_max = -1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.kappa_bar.clear();
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.kappa_bar = {0.0};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.prep.theta = 4.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = RunConfig::heatmap_defaults();
    c.observables = {Observable::Coherence};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.quadrature.rel_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("heatmap defaults") {
    const auto h = RunConfig::heatmap_defaults();
    CHECK(h.kappa_bar.size() == 50);
    CHECK(h.delta_bar.size() == 50);
    CHECK(h.kappa_bar.front() == doctest::Approx(0.01));
    CHECK(h.kappa_bar.back() == 1.0);
    CHECK(h.delta_bar.back() == 6.0);
}

// ============================================================ timeseries ====

TEST_CASE("time series produces fixed columns for every point") {
    const auto ds = run_timeseries(small_timeseries());
    REQUIRE(ds.records.size() == 4);
    CHECK(ds.all_ok());
    const std::vector<std::string> names{"tau", "gamma", "phi", "gamma_rate", "coherence", "population_difference",
                                         "f_theta", "f_nu", "flow_theta", "flow_nu", "trace_distance", "sigma"};
    for (const auto& r : ds.records) {
        REQUIRE(r.columns.size() == names.size());
        for (std::size_t i = 0; i < names.size(); ++i) CHECK(r.columns[i].name == names[i]);
        CHECK(r.columns[0].values.size() == 201);
        CHECK(r.blp.has_value());
        CHECK_FALSE(r.discrepancy.has_value());
    }
    CHECK(ds.records[1].kappa_bar == 0.1);
    CHECK(ds.records[1].delta_bar == 5.0);
    CHECK(ds.records[2].kappa_index == 1);
}

TEST_CASE("resonant exponential coherence decays monotonically") {
    auto c = small_timeseries();
    c.kappa_bar = {0.01, 0.1, 1.0};
    c.delta_bar = {0.0};
    c.tau_max = 50;
    c.tau_points = 2001;
    c.observables = {Observable::Coherence};
    for (const auto& r : run_timeseries(c).records) {
        const auto& coh = r.column("coherence")->values;
        for (Eigen::Index i = 1; i < coh.size(); ++i) CHECK(coh[i] <= coh[i - 1]);
        CHECK(coh[coh.size() - 1] < coh[0]);
    }
}

TEST_CASE("detuned slow kernel shows positive theta flow") {
    auto c = small_timeseries();
    c.kappa_bar = {0.01};
    c.delta_bar = {5.0};
    c.tau_max = 50;
    c.tau_points = 2001;
    c.observables = {Observable::QfiFlow};
    const auto r = run_timeseries(c).records.at(0);
    CHECK((r.column("flow_theta")->values > 0.0).any());
}

TEST_CASE("two-point grid and empty observable list") {
    auto c = small_timeseries();
    c.kappa_bar = {0.5};
    c.delta_bar = {1.0};
    c.tau_points = 2;
    c.observables = {};
    const auto r = run_timeseries(c).records.at(0);
    REQUIRE(r.columns.size() == 4);
    for (const auto& col : r.columns) CHECK(col.values.size() == 2);
    CHECK(r.column("coherence") == nullptr);
}

TEST_CASE("closed-form runs carry a deviation report per point") {
    auto c = small_timeseries();
    c.use_closed_form = true;
    c.kernel = KernelKind::Exponential;
    const auto ds = run_timeseries(c);
    for (const auto& r : ds.records) {
        REQUIRE(r.discrepancy.has_value());
        CHECK(r.discrepancy->kappa_bar == r.kappa_bar);
        if (r.delta_bar == 0.0) CHECK(r.discrepancy->within_tolerance);
    }
    CHECK_FALSE(ds.records[1].discrepancy->within_tolerance);

    const auto dir = testing::scratch_dir("closed_form");
    export_timeseries(ds, dir);
    const auto m = load(dir / "manifest.json");
    for (const auto& p : m["points"]) CHECK(p.contains("discrepancy"));
    CHECK(m["points"][1]["discrepancy"]["max_abs_gamma"].get<double>() > 1e-6);
}

TEST_CASE("numeric failures are recorded per point, not thrown") {
    auto c = small_timeseries();
    c.quadrature.max_subdivisions = 1;
    c.quadrature.abs_tol = c.quadrature.rel_tol = 1e-15;
    c.kappa_bar = {0.01};
    c.delta_bar = {6.0};
    c.tau_max = 40;
    c.tau_points = 3;
    const auto ds = run_timeseries(c);
    CHECK_FALSE(ds.all_ok());
    CHECK(ds.records[0].error.find("did not converge") != std::string::npos);
    const auto dir = testing::scratch_dir("failure");
    export_timeseries(ds, dir);
    const auto m = load(dir / "manifest.json");
    CHECK(m["errors"].size() == 1);
    CHECK(m["points"][0]["status"] == "error");
}

TEST_CASE("mode preconditions") {
    CHECK_THROWS_AS(run_timeseries(small_heatmap()), ConfigError);
    CHECK_THROWS_AS(run_heatmap(small_timeseries()), ConfigError);
}

// ================================================================ export ====

TEST_CASE("17-digit formatting round-trips every double") {
    for (double v : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, 0.0, -0.0, 5e-324, 1.7976931348623157e308}) {
        const auto s = format_double(v);
        double back = 1.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(v));
    }
    CHECK(format_double(NAN) == "nan");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("CSV export re-parses bit-identically") {
    const auto ds = run_timeseries(small_timeseries());
    const auto dir = testing::scratch_dir("roundtrip");
    const auto files = export_timeseries(ds, dir);
    CHECK(files.size() == 5);
    for (const auto& r : ds.records) {
        const auto table = read_csv(dir / timeseries_file_name(r, OutputFormat::Csv));
        REQUIRE(table.header.size() == r.columns.size());
        for (std::size_t c = 0; c < r.columns.size(); ++c) {
            CHECK(table.header[c] == r.columns[c].name);
            const auto col = table.column(r.columns[c].name);
            REQUIRE(col.size() == static_cast<std::size_t>(r.columns[c].values.size()));
            bool identical = true;
            for (std::size_t i = 0; i < col.size(); ++i)
                identical = identical && std::bit_cast<std::uint64_t>(col[i]) ==
                                             std::bit_cast<std::uint64_t>(r.columns[c].values[static_cast<Eigen::Index>(i)]);
            CHECK(identical);
        }
    }
    const auto first = slurp(dir / timeseries_file_name(ds.records[0], OutputFormat::Csv));
    CHECK(first.rfind("tau,gamma,phi,gamma_rate,", 0) == 0);
}

TEST_CASE("JSON export uses the same field names") {
    auto c = small_timeseries();
    c.output_format = OutputFormat::Json;
    c.observables = {Observable::Coherence};
    const auto ds = run_timeseries(c);
    const auto dir = testing::scratch_dir("json");
    export_timeseries(ds, dir);
    const auto doc = load(dir / timeseries_file_name(ds.records[3], OutputFormat::Json));
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc["columns"].items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"tau", "gamma", "phi", "gamma_rate", "coherence"});
    CHECK(doc["columns"]["gamma"][200].get<double>() == ds.records[3].column("gamma")->values[200]);
}

TEST_CASE("manifest records schema, version, config and axis defaults") {
    const auto ds = run_timeseries(small_timeseries());
    const auto dir = testing::scratch_dir("manifest");
    export_timeseries(ds, dir);
    const auto m = load(dir / "manifest.json");
    CHECK(m["schema_version"] == manifest_schema_version);
    CHECK(m["version"] == "0.3.0");
    CHECK(m["config"]["kbar"].size() == 2);
    CHECK(m["config"]["sign_convention"] == "down-up");
    CHECK(m["axis_defaults"]["heatmap"]["dbar"] == "0:6:50");
    CHECK(m["points"].size() == 4);
    CHECK(m["points"][0]["file"] == "timeseries_exponential_k0_d0.csv");
    CHECK_FALSE(m["config"].contains("jobs"));
}

TEST_CASE("export into an unwritable location raises IoError") {
    const auto dir = testing::scratch_dir("blocked");
    std::ofstream(dir / "file") << "x";
    CHECK_THROWS_AS(export_timeseries(run_timeseries(small_timeseries()), dir / "file" / "sub"), IoError);
}

TEST_CASE("csv reader rejects malformed input") {
    const auto dir = testing::scratch_dir("badcsv");
    std::ofstream(dir / "a.csv") << "x,y\n1,2\n3\n";
    CHECK_THROWS_AS(read_csv(dir / "a.csv"), IoError);
    std::ofstream(dir / "b.csv") << "x\n1.5q\n";
    CHECK_THROWS_AS(read_csv(dir / "b.csv"), IoError);
    CHECK_THROWS_AS(read_csv(dir / "missing.csv"), IoError);
    std::ofstream(dir / "c.csv") << "x,y\n1,nan\n";
    CHECK(std::isnan(read_csv(dir / "c.csv").rows[0][1]));
}

// =============================================================== heatmap ====

TEST_CASE("markovian heatmap is identically zero") {
    const auto g = run_heatmap(small_heatmap(KernelKind::Delta));
    CHECK(g.cells.size() == 9);
    for (const auto& c : g.cells) CHECK(c.n_value == 0.0);
}

TEST_CASE("heatmap cells are row-major with kappa outer") {
    const auto g = run_heatmap(small_heatmap());
    REQUIRE(g.cells.size() == 9);
    CHECK(g.all_ok());
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(g.at(i, j).kappa_bar == g.kappa_axis[i]);
            CHECK(g.at(i, j).delta_bar == g.delta_axis[j]);
            CHECK(g.at(i, j).n_value >= 0.0);
            CHECK(g.at(i, j).n_value >= g.at(i, j).canonical_value - 1e-9);
        }
}

TEST_CASE("heatmap export writes matrix, axes and cells") {
    const auto g = run_heatmap(small_heatmap());
    const auto dir = testing::scratch_dir("heatmap");
    export_heatmap(g, dir);
    for (const char* f : {"heatmap_exponential_N.csv", "heatmap_exponential_kbar.csv", "heatmap_exponential_dbar.csv",
                          "heatmap_exponential_cells.csv", "manifest.json"})
        CHECK(fs::exists(dir / f));
    const auto n = read_csv(dir / "heatmap_exponential_N.csv");
    REQUIRE(n.rows.size() == 3);
    CHECK(n.header.size() == 4);
    CHECK(n.rows[2][3] == g.at(2, 2).n_value);
    CHECK(read_csv(dir / "heatmap_exponential_dbar.csv").column("delta_bar") == g.delta_axis);
    const auto m = load(dir / "manifest.json");
    CHECK(m["cells"].size() == 9);
    CHECK(m["shape"][0] == 3);
}

TEST_CASE("heatmap determinism across worker counts") {
    auto a = small_heatmap(KernelKind::Modulated);
    auto b = a;
    b.jobs = 3;
    const auto da = testing::scratch_dir("det_a"), db = testing::scratch_dir("det_b");
    export_heatmap(run_heatmap(a), da);
    export_heatmap(run_heatmap(b), db);
    for (const char* f : {"heatmap_modulated_N.csv", "heatmap_modulated_cells.csv", "manifest.json"})
        CHECK(slurp(da / f) == slurp(db / f));
}

// ================================================================= plots ====

TEST_CASE("plots for a coherence sweep: one figure per detuning") {
    auto c = small_timeseries();
    c.kappa_bar = {0.01, 0.1, 1.0};
    c.delta_bar = {0.0, 1.0, 3.0, 5.0};
    c.observables = {Observable::Coherence};
    const auto dir = testing::scratch_dir("plots_ts");
    export_timeseries(run_timeseries(c), dir);
    const auto files = render_plots(dir);
    int coherence = 0;
    for (const auto& f : files) {
        CHECK(fs::exists(f));
        if (f.filename().string().rfind("coherence_", 0) == 0) ++coherence;
    }
    CHECK(coherence == 4);
    const auto svg = slurp(dir / "plots" / "coherence_exponential_d0.svg");
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("𝕜=0.01") != std::string::npos);
}

TEST_CASE("heatmap plot has labelled axes") {
    const auto dir = testing::scratch_dir("plots_hm");
    export_heatmap(run_heatmap(small_heatmap()), dir);
    const auto files = render_plots(dir);
    REQUIRE(files.size() == 1);
    const auto svg = slurp(files[0]);
    CHECK(svg.find("𝕜") != std::string::npos);
    CHECK(svg.find("Δ̄") != std::string::npos);
}

TEST_CASE("plotting an empty dataset raises NoDataError") {
    const auto dir = testing::scratch_dir("plots_empty");
    CHECK_THROWS_AS(render_plots(dir), NoDataError);
    auto c = small_timeseries();
    c.quadrature.max_subdivisions = 1;
    c.quadrature.abs_tol = c.quadrature.rel_tol = 1e-15;
    c.kappa_bar = {0.01};
    c.delta_bar = {6.0};
    c.tau_points = 3;
    export_timeseries(run_timeseries(c), dir);
    CHECK_THROWS_AS(render_plots(dir), NoDataError);
}

// =================================================================== CLI ====

TEST_CASE("cli exit codes") {
    const auto dir = testing::scratch_dir("cli");
    CHECK(cli({"timeseries", "--kbar", "0.5", "--dbar", "1", "--tau-points", "5", "--out", (dir / "ok").string()}) ==
          ExitSuccess);
    CHECK(fs::exists(dir / "ok" / "manifest.json"));
    std::string err;
    CHECK(cli({"timeseries", "--kbar", "-1", "--out", (dir / "bad").string()}, &err) == ExitConfigError);
    CHECK(err.find("kbar") != std::string::npos);
    CHECK(cli({"heatmap", "--kernel", "gaussian"}) == ExitConfigError);
    CHECK(cli({}) == ExitConfigError);
    CHECK(cli({"timeseries", "--bogus"}) == ExitConfigError);
    CHECK(cli({"timeseries", "--kbar", "0.01", "--dbar", "6", "--tau-max", "40", "--tau-points", "3",
               "--max-subdivisions", "1", "--quad-abs-tol", "1e-15", "--quad-rel-tol", "1e-15", "--out",
               (dir / "fail").string()}) == ExitNumericFailure);
    CHECK(load(dir / "fail" / "manifest.json")["errors"].size() == 1);
    CHECK(cli({"--help"}) == ExitSuccess);
}

TEST_CASE("cli config file mirrors flags and flags win") {
    const auto dir = testing::scratch_dir("cli_config");
    std::ofstream(dir / "run.toml") << "kernel = \"modulated\"\nkbar = \"0.2,0.4\"\ndbar = \"2\"\n"
                                       "tau-max = 8\ntau-points = 9\nobservables = \"coherence\"\n";
    REQUIRE(cli({"timeseries", "--config", (dir / "run.toml").string(), "--tau-points", "5", "--out",
                 (dir / "out").string()}) == ExitSuccess);
    const auto m = load(dir / "out" / "manifest.json");
    CHECK(m["config"]["kernel"] == "modulated");
    CHECK(m["config"]["kbar"].size() == 2);
    CHECK(m["config"]["tau_max"] == 8.0);
    CHECK(m["config"]["tau_points"] == 5);
    CHECK(read_csv(dir / "out" / "timeseries_modulated_k1_d0.csv").rows.size() == 5);

    std::ofstream(dir / "typo.toml") << "tau_maximum = 3\n";
    CHECK(cli({"timeseries", "--config", (dir / "typo.toml").string()}) == ExitConfigError);
}

TEST_CASE("cli heatmap with plots") {
    const auto dir = testing::scratch_dir("cli_hm");
    CHECK(cli({"heatmap", "--kbar", "0.1,1", "--dbar", "0:2:2", "--tau-max", "20", "--plot", "--jobs", "2", "--out",
               dir.string()}) == ExitSuccess);
    CHECK(fs::exists(dir / "plots" / "heatmap_exponential_N.svg"));
}
