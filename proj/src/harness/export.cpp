// export.cpp - Writers for per-point data files, heatmap matrices and the manifest

#include "nmspin/harness/export.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "nmspin/errors.hpp"
#include "nmspin/version.hpp"

namespace nmspin::harness {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// ============================================================================
// Text primitives
// ============================================================================

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    if (ec != std::errc{}) throw IoError("cannot format floating-point value");
    return {buf.data(), ptr};
}

namespace {

double parse_field(const std::string& s, const fs::path& path, std::size_t line) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out.flush()) throw IoError("write failed for " + path.string());
}

std::string csv_row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_double(values[i]);
    }
    return line + '\n';
}

std::string join(const std::vector<std::string>& items) {
    std::string line;
    for (std::size_t i = 0; i < items.size(); ++i) line += (i ? "," : "") + items[i];
    return line + '\n';
}

// JSON has no NaN; failed values become null.
ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson array_json(const Eigen::ArrayXd& a) {
    ojson out = ojson::array();
    for (Eigen::Index i = 0; i < a.size(); ++i) out.push_back(number(a[i]));
    return out;
}

ojson prep_json(const PureStatePrepd& p) { return {{"theta", p.theta}, {"nu", p.nu}}; }

ojson pair_json(const PreparationPair& p) { return {{"a", prep_json(p.a)}, {"b", prep_json(p.b)}}; }

ojson discrepancy_json(const DiscrepancyReport& r) {
    return {{"kernel", to_string(r.kind)},
            {"kappa_bar", r.kappa_bar},
            {"delta_bar", r.delta_bar},
            {"max_abs_gamma", number(r.max_abs_gamma)},
            {"max_abs_phi", number(r.max_abs_phi)},
            {"max_abs_gamma_rate", number(r.max_abs_gamma_rate)},
            {"tau_at_max_gamma", r.tau_at_max_gamma},
            {"tau_at_max_phi", r.tau_at_max_phi},
            {"tolerance", r.tolerance},
            {"within_tolerance", r.within_tolerance}};
}

ojson intervals_json(const std::vector<std::pair<double, double>>& intervals) {
    ojson out = ojson::array();
    for (const auto& [lo, hi] : intervals) out.push_back({lo, hi});
    return out;
}

ojson manifest_head(const RunConfig& cfg) {
    ojson m;
    m["schema_version"] = manifest_schema_version;
    m["tool"] = "nmspin";
    m["version"] = version;
    m["mode"] = to_string(cfg.mode);
    m["config"] = config_to_json(cfg);
    m["tolerances"] = {{"quadrature_abs", cfg.quadrature.abs_tol},
                       {"quadrature_rel", cfg.quadrature.rel_tol},
                       {"quadrature_max_subdivisions", cfg.quadrature.max_subdivisions},
                       {"closed_form_vs_oracle", 1e-6},
                       {"channel_validation", 1e-12}};
    // Axis ranges are a judgment call; record the defaults alongside the run.
    m["axis_defaults"] = {
        {"timeseries", {{"tau_max", 50.0}, {"tau_points", 2001}, {"kbar", "0.01,0.1,1"}, {"dbar", "0,5"}}},
        {"heatmap", {{"tau_max", 1000.0}, {"tau_points", "auto"}, {"kbar", "0.01:1:50:log"}, {"dbar", "0:6:50"}}}};
    return m;
}

} // namespace

std::vector<double> CsvTable::column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == name) {
            std::vector<double> out;
            out.reserve(rows.size());
            for (const auto& r : rows) out.push_back(r[c]);
            return out;
        }
    throw IoError("no column named '" + name + "'");
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string() + ": missing header row");
    t.header = split_csv_line(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != t.header.size())
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": wrong field count");
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_field(f, path, line_no));
        t.rows.push_back(std::move(row));
    }
    return t;
}

ojson config_to_json(const RunConfig& cfg) {
    ojson obs = ojson::array();
    for (auto o : cfg.observables) obs.push_back(to_string(o));
    return {{"mode", to_string(cfg.mode)},
            {"kernel", to_string(cfg.kernel)},
            {"kbar", cfg.kappa_bar},
            {"dbar", cfg.delta_bar},
            {"tau_max", cfg.tau_max},
            {"tau_points", cfg.tau_points},
            {"theta", cfg.prep.theta},
            {"nu", cfg.prep.nu},
            {"observables", obs},
            {"sign_convention", to_string(cfg.sign_convention)},
            {"closed_form", cfg.use_closed_form},
            {"format", to_string(cfg.output_format)},
            {"blp",
             {{"pair_grid_theta", cfg.blp.pair_grid_theta},
              {"pair_grid_nu", cfg.blp.pair_grid_nu},
              {"refine_iterations", cfg.blp.refine_iterations},
              {"include_canonical_pair", cfg.blp.include_canonical_pair}}}};
}

std::string timeseries_file_name(const TimeseriesRecord& rec, OutputFormat fmt) {
    return "timeseries_" + std::string(to_string(rec.kernel)) + "_k" + std::to_string(rec.kappa_index) + "_d" +
           std::to_string(rec.delta_index) + (fmt == OutputFormat::Csv ? ".csv" : ".json");
}

// ============================================================================
// Time series
// ============================================================================

std::vector<fs::path> export_timeseries(const TimeseriesDataset& ds, const fs::path& dir) {
    ensure_dir(dir);
    const auto fmt = ds.config.output_format;
    std::vector<fs::path> written;
    ojson points = ojson::array();
    ojson errors = ojson::array();

    for (const auto& rec : ds.records) {
        ojson p;
        p["kernel"] = to_string(rec.kernel);
        p["kappa_bar"] = rec.kappa_bar;
        p["delta_bar"] = rec.delta_bar;
        p["kappa_index"] = rec.kappa_index;
        p["delta_index"] = rec.delta_index;
        if (!rec.ok()) {
            p["status"] = "error";
            p["error"] = rec.error;
            errors.push_back({{"kappa_bar", rec.kappa_bar}, {"delta_bar", rec.delta_bar}, {"message", rec.error}});
            points.push_back(std::move(p));
            continue;
        }
        const auto name = timeseries_file_name(rec, fmt);
        const auto path = dir / name;
        if (fmt == OutputFormat::Csv) {
            std::vector<std::string> header;
            for (const auto& c : rec.columns) header.push_back(c.name);
            std::string text = join(header);
            const Eigen::Index n = rec.columns.front().values.size();
            std::vector<double> row(rec.columns.size());
            for (Eigen::Index i = 0; i < n; ++i) {
                for (std::size_t c = 0; c < rec.columns.size(); ++c) row[c] = rec.columns[c].values[i];
                text += csv_row(row);
            }
            write_text(path, text);
        } else {
            ojson doc;
            doc["kernel"] = to_string(rec.kernel);
            doc["kappa_bar"] = rec.kappa_bar;
            doc["delta_bar"] = rec.delta_bar;
            ojson cols;
            for (const auto& c : rec.columns) cols[c.name] = array_json(c.values);
            doc["columns"] = std::move(cols);
            write_text(path, doc.dump(1) + '\n');
        }
        written.push_back(path);

        p["status"] = "ok";
        p["file"] = name;
        p["rows"] = rec.columns.front().values.size();
        ojson names = ojson::array();
        for (const auto& c : rec.columns) names.push_back(c.name);
        p["columns"] = std::move(names);
        if (rec.discrepancy) p["discrepancy"] = discrepancy_json(*rec.discrepancy);
        if (rec.qfi_discrepancy)
            p["qfi_printed_vs_bloch"] = {{"max_abs_theta", number(rec.qfi_discrepancy->max_abs_theta)},
                                         {"max_abs_nu", number(rec.qfi_discrepancy->max_abs_nu)}};
        if (rec.blp)
            p["blp"] = {{"n", number(rec.blp->n_value)},
                        {"canonical_value", number(rec.blp->canonical_value)},
                        {"best_pair", pair_json(rec.blp->best_pair)},
                        {"backflow_intervals", intervals_json(rec.blp->backflow_intervals)}};
        p["first_channel_violation_tau"] =
            rec.first_channel_violation ? ojson(*rec.first_channel_violation) : ojson(nullptr);
        points.push_back(std::move(p));
    }

    ojson m = manifest_head(ds.config);
    m["points"] = std::move(points);
    m["errors"] = std::move(errors);
    const auto manifest = dir / "manifest.json";
    write_text(manifest, m.dump(2) + '\n');
    written.push_back(manifest);
    return written;
}

// ============================================================================
// Heatmap
// ============================================================================

std::vector<fs::path> export_heatmap(const SweepGrid& grid, const fs::path& dir) {
    ensure_dir(dir);
    const std::string stem = "heatmap_" + std::string(to_string(grid.config.kernel));
    const std::size_t nk = grid.kappa_axis.size(), nd = grid.delta_axis.size();
    std::vector<fs::path> written;

    if (grid.config.output_format == OutputFormat::Csv) {
        std::vector<std::string> header{"kappa_bar"};
        for (std::size_t j = 0; j < nd; ++j) header.push_back("n_d" + std::to_string(j));
        std::string matrix = join(header);
        for (std::size_t i = 0; i < nk; ++i) {
            std::vector<double> row{grid.kappa_axis[i]};
            for (std::size_t j = 0; j < nd; ++j) row.push_back(grid.at(i, j).ok() ? grid.at(i, j).n_value : NAN);
            matrix += csv_row(row);
        }
        std::string kaxis = "kappa_bar\n", daxis = "delta_bar\n";
        for (double k : grid.kappa_axis) kaxis += format_double(k) + '\n';
        for (double d : grid.delta_axis) daxis += format_double(d) + '\n';

        std::string cells =
            "kappa_bar,delta_bar,n,canonical_value,theta_a,nu_a,theta_b,nu_b,backflow_intervals\n";
        for (const auto& c : grid.cells) {
            const double nan = std::nan("");
            cells += csv_row({c.kappa_bar, c.delta_bar, c.ok() ? c.n_value : nan, c.ok() ? c.canonical_value : nan,
                              c.best_pair.a.theta, c.best_pair.a.nu, c.best_pair.b.theta, c.best_pair.b.nu,
                              static_cast<double>(c.backflow_intervals)});
        }
        for (const auto& [suffix, text] : {std::pair<std::string, const std::string&>{"_N.csv", matrix},
                                           {"_kbar.csv", kaxis},
                                           {"_dbar.csv", daxis},
                                           {"_cells.csv", cells}}) {
            write_text(dir / (stem + suffix), text);
            written.push_back(dir / (stem + suffix));
        }
    } else {
        ojson doc;
        doc["kernel"] = to_string(grid.config.kernel);
        doc["kappa_bar"] = grid.kappa_axis;
        doc["delta_bar"] = grid.delta_axis;
        ojson n = ojson::array();
        for (std::size_t i = 0; i < nk; ++i) {
            ojson row = ojson::array();
            for (std::size_t j = 0; j < nd; ++j) row.push_back(grid.at(i, j).ok() ? number(grid.at(i, j).n_value) : nullptr);
            n.push_back(std::move(row));
        }
        doc["n"] = std::move(n);
        write_text(dir / (stem + ".json"), doc.dump(1) + '\n');
        written.push_back(dir / (stem + ".json"));
    }

    ojson cells = ojson::array();
    ojson errors = ojson::array();
    for (std::size_t i = 0; i < nk; ++i)
        for (std::size_t j = 0; j < nd; ++j) {
            const auto& c = grid.at(i, j);
            ojson e{{"kappa_index", i}, {"delta_index", j}, {"kappa_bar", c.kappa_bar}, {"delta_bar", c.delta_bar}};
            if (c.ok()) {
                e["status"] = "ok";
                e["n"] = number(c.n_value);
                e["canonical_value"] = number(c.canonical_value);
                e["best_pair"] = pair_json(c.best_pair);
                e["backflow_intervals"] = c.backflow_intervals;
                if (c.discrepancy) e["discrepancy"] = discrepancy_json(*c.discrepancy);
            } else {
                e["status"] = "error";
                e["error"] = c.error;
                errors.push_back({{"kappa_bar", c.kappa_bar}, {"delta_bar", c.delta_bar}, {"message", c.error}});
            }
            cells.push_back(std::move(e));
        }

    ojson m = manifest_head(grid.config);
    ojson files = ojson::array();
    for (const auto& p : written) files.push_back(p.filename().string());
    m["files"] = std::move(files);
    m["shape"] = {nk, nd};
    m["cells"] = std::move(cells);
    m["errors"] = std::move(errors);
    const auto manifest = dir / "manifest.json";
    write_text(manifest, m.dump(2) + '\n');
    written.push_back(manifest);
    return written;
}

} // namespace nmspin::harness
