// plot.cpp - Minimal SVG line and heatmap renderer

#include "nmspin/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"
#include "nmspin/errors.hpp"
#include "nmspin/harness/export.hpp"

namespace nmspin::harness {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr double width = 640, height = 420;
constexpr double left = 70, right = 150, top = 40, bottom = 60;

struct Series {
    std::string label;
    std::vector<double> x, y;
};

json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

// Tick label with a little more room than num() for axis ends.
std::string tick(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

const char* palette(std::size_t i) {
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
                                    "#7f7f7f"};
    return colours[i % std::size(colours)];
}

std::string header(const std::string& title) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
       << "</text>\n";
    return os.str();
}

void write_svg(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << body << "</svg>\n";
    if (!out.flush()) throw IoError("write failed for " + path.string());
}

std::string line_plot(const std::string& title, const std::string& ylabel, const std::vector<Series>& series) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double pw = width - left - right, ph = height - top - bottom;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream os;
    os << header(title);
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = xmin + t * (xmax - xmin) / 4, yv = ymin + t * (ymax - ymin) / 4;
        os << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << tick(xv)
           << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << tick(yv)
           << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 18 << "\" text-anchor=\"middle\">τ</text>\n";
    os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 " << top + ph / 2
       << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    if (ymin < 0 && ymax > 0)
        os << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << sy(0) << "\" y2=\"" << sy(0)
           << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        os << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << palette(k) << "\" points=\"";
        // Decimate long series to roughly one vertex per horizontal pixel.
        const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 1000);
        for (std::size_t i = 0; i < s.x.size(); i += stride)
            if (std::isfinite(s.y[i])) os << num(sx(s.x[i])) << ',' << num(sy(s.y[i])) << ' ';
        if (!s.x.empty() && std::isfinite(s.y.back())) os << num(sx(s.x.back())) << ',' << num(sy(s.y.back()));
        os << "\"/>\n";
        const double ly = top + 14 + 18.0 * static_cast<double>(k);
        os << "<line x1=\"" << width - right + 10 << "\" x2=\"" << width - right + 30 << "\" y1=\"" << ly
           << "\" y2=\"" << ly << "\" stroke=\"" << palette(k) << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << width - right + 36 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
    }
    return os.str();
}

// Viridis-like ramp from five anchors.
std::string colour(double t) {
    static const double anchors[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    if (!std::isfinite(t)) return "#cccccc";
    t = std::clamp(t, 0.0, 1.0) * 4;
    const int i = std::min(3, static_cast<int>(t));
    const double f = t - i;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(anchors[i][0] + f * (anchors[i + 1][0] - anchors[i][0])),
                  static_cast<int>(anchors[i][1] + f * (anchors[i + 1][1] - anchors[i][1])),
                  static_cast<int>(anchors[i][2] + f * (anchors[i + 1][2] - anchors[i][2])));
    return buf;
}

std::string heatmap_plot(const std::string& title, const std::vector<double>& kbar, const std::vector<double>& dbar,
                         const std::vector<std::vector<double>>& n) {
    double vmax = 0;
    for (const auto& row : n)
        for (double v : row)
            if (std::isfinite(v)) vmax = std::max(vmax, v);
    const double pw = width - left - right, ph = height - top - bottom;
    const double cw = pw / static_cast<double>(kbar.size()), ch = ph / static_cast<double>(dbar.size());

    std::ostringstream os;
    os << header(title);
    for (std::size_t i = 0; i < kbar.size(); ++i)
        for (std::size_t j = 0; j < dbar.size(); ++j)
            os << "<rect x=\"" << num(left + i * cw) << "\" y=\"" << num(top + ph - (j + 1) * ch) << "\" width=\""
               << num(cw + 0.3) << "\" height=\"" << num(ch + 0.3) << "\" fill=\""
               << colour(vmax > 0 ? n[i][j] / vmax : 0.0) << "\"/>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"start\">" << tick(kbar.front())
       << "</text>\n<text x=\"" << left + pw << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"end\">"
       << tick(kbar.back()) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << top + ph << "\" text-anchor=\"end\">" << tick(dbar.front())
       << "</text>\n<text x=\"" << left - 6 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">"
       << tick(dbar.back()) << "</text>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 18 << "\" text-anchor=\"middle\">𝕜</text>\n";
    os << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\">Δ̄</text>\n";
    // Colour bar.
    const double bx = width - right + 30;
    for (int s = 0; s < 50; ++s)
        os << "<rect x=\"" << bx << "\" y=\"" << num(top + ph - (s + 1) * ph / 50) << "\" width=\"18\" height=\""
           << num(ph / 50 + 0.3) << "\" fill=\"" << colour(s / 49.0) << "\"/>\n";
    os << "<text x=\"" << bx + 24 << "\" y=\"" << top + ph << "\">0</text>\n";
    os << "<text x=\"" << bx + 24 << "\" y=\"" << top + 10 << "\">" << tick(vmax) << "</text>\n";
    os << "<text x=\"" << bx + 4 << "\" y=\"" << top - 8 << "\">𝒩</text>\n";
    return os.str();
}

std::map<std::string, std::vector<double>> load_point(const fs::path& path) {
    std::map<std::string, std::vector<double>> cols;
    if (path.extension() == ".csv") {
        const auto t = read_csv(path);
        for (const auto& name : t.header) cols[name] = t.column(name);
    } else {
        const auto doc = load_json(path);
        for (const auto& [name, values] : doc.at("columns").items()) {
            auto& dst = cols[name];
            for (const auto& v : values) dst.push_back(v.is_null() ? NAN : v.get<double>());
        }
    }
    return cols;
}

std::vector<fs::path> render_timeseries(const fs::path& dir, const json& manifest, const fs::path& out) {
    struct Loaded {
        double kappa, delta;
        std::size_t delta_index;
        std::map<std::string, std::vector<double>> cols;
    };
    std::vector<Loaded> points;
    for (const auto& p : manifest.at("points"))
        if (p.value("status", "") == "ok")
            points.push_back({p.at("kappa_bar").get<double>(), p.at("delta_bar").get<double>(),
                              p.at("delta_index").get<std::size_t>(), load_point(dir / p.at("file").get<std::string>())});
    if (points.empty()) throw NoDataError("no successful time-series points to plot in " + dir.string());

    const std::string kernel = manifest.at("config").at("kernel").get<std::string>();
    std::map<std::size_t, std::vector<const Loaded*>> by_delta;
    for (const auto& p : points) by_delta[p.delta_index].push_back(&p);

    std::vector<fs::path> files;
    for (const auto& [j, group] : by_delta)
        for (const auto& [name, _] : group.front()->cols) {
            if (name == "tau") continue;
            std::vector<Series> series;
            for (const auto* p : group)
                series.push_back({"𝕜=" + tick(p->kappa), p->cols.at("tau"), p->cols.at(name)});
            const auto path = out / (name + "_" + kernel + "_d" + std::to_string(j) + ".svg");
            write_svg(path, line_plot(name + " (" + kernel + ", Δ̄=" + tick(group.front()->delta) + ")", name, series));
            files.push_back(path);
        }
    return files;
}

std::vector<fs::path> render_heatmap(const fs::path& dir, const json& manifest, const fs::path& out) {
    const std::string kernel = manifest.at("config").at("kernel").get<std::string>();
    std::vector<double> kbar, dbar;
    std::vector<std::vector<double>> n;
    const std::string stem = "heatmap_" + kernel;
    if (fs::exists(dir / (stem + "_N.csv"))) {
        kbar = read_csv(dir / (stem + "_kbar.csv")).column("kappa_bar");
        dbar = read_csv(dir / (stem + "_dbar.csv")).column("delta_bar");
        for (auto row : read_csv(dir / (stem + "_N.csv")).rows) n.emplace_back(row.begin() + 1, row.end());
    } else {
        const auto doc = load_json(dir / (stem + ".json"));
        kbar = doc.at("kappa_bar").get<std::vector<double>>();
        dbar = doc.at("delta_bar").get<std::vector<double>>();
        for (const auto& row : doc.at("n")) {
            auto& dst = n.emplace_back();
            for (const auto& v : row) dst.push_back(v.is_null() ? NAN : v.get<double>());
        }
    }
    const bool any = std::any_of(n.begin(), n.end(), [](const auto& row) {
        return std::any_of(row.begin(), row.end(), [](double v) { return std::isfinite(v); });
    });
    if (kbar.empty() || dbar.empty() || !any) throw NoDataError("no heatmap cells to plot in " + dir.string());
    const auto path = out / (stem + "_N.svg");
    write_svg(path, heatmap_plot("BLP measure 𝒩 (" + kernel + ")", kbar, dbar, n));
    return {path};
}

} // namespace

std::vector<fs::path> render_plots(const fs::path& data_dir) {
    const auto manifest_path = data_dir / "manifest.json";
    if (!fs::exists(manifest_path)) throw NoDataError("no manifest.json in " + data_dir.string());
    const auto manifest = load_json(manifest_path);
    const auto out = data_dir / "plots";
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());
    try {
        return manifest.at("mode").get<std::string>() == "heatmap" ? render_heatmap(data_dir, manifest, out)
                                                                   : render_timeseries(data_dir, manifest, out);
    } catch (const json::exception& e) {
        throw IoError("malformed manifest in " + data_dir.string() + ": " + e.what());
    }
}

} // namespace nmspin::harness
