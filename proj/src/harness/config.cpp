// config.cpp - Parsing and validation of run configurations

#include "nmspin/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "nmspin/errors.hpp"

namespace nmspin::harness {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_number(const std::string& s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) throw ConfigError("not a number: '" + s + "'");
    return v;
}

} // namespace

std::string_view to_string(RunMode m) { return m == RunMode::Timeseries ? "timeseries" : "heatmap"; }

std::string_view to_string(Observable o) {
    switch (o) {
        case Observable::Coherence: return "coherence";
        case Observable::Population: return "population";
        case Observable::QfiFlow: return "qfi_flow";
        case Observable::TraceDistance: return "trace_distance";
        case Observable::Blp: return "blp";
    }
    return "unknown";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

std::string_view to_string(SignConvention s) {
    return s == SignConvention::UpMinusDown ? "up-down" : "down-up";
}

Observable parse_observable(std::string_view s) {
    for (auto o : {Observable::Coherence, Observable::Population, Observable::QfiFlow, Observable::TraceDistance,
                   Observable::Blp})
        if (s == to_string(o)) return o;
    throw ConfigError("unknown observable '" + std::string(s) + "'");
}

std::vector<Observable> parse_observables(std::string_view list) {
    std::vector<Observable> out;
    if (trim(list).empty()) return out;
    for (const auto& item : split(list, ',')) {
        const auto o = parse_observable(item);
        if (std::find(out.begin(), out.end(), o) == out.end()) out.push_back(o);
    }
    return out;
}

OutputFormat parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError("unknown output format '" + std::string(s) + "'");
}

SignConvention parse_sign_convention(std::string_view s) {
    if (s == "up-down") return SignConvention::UpMinusDown;
    if (s == "down-up") return SignConvention::DownMinusUp;
    throw ConfigError("unknown sign convention '" + std::string(s) + "'");
}

std::vector<double> parse_axis(std::string_view text) {
    const std::string body = trim(text);
    if (body.empty()) throw ConfigError("empty parameter axis");
    if (body.find(':') == std::string::npos) {
        std::vector<double> values;
        for (const auto& item : split(body, ',')) values.push_back(parse_number(item));
        return values;
    }
    const auto parts = split(body, ':');
    if (parts.size() != 3 && parts.size() != 4) throw ConfigError("range must be lo:hi:n or lo:hi:n:log");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double count = parse_number(parts[2]);
    if (count < 1 || count != std::floor(count)) throw ConfigError("range count must be a positive integer");
    const bool log_spaced = parts.size() == 4;
    if (log_spaced && parts[3] != "log") throw ConfigError("range spacing must be 'log'");
    if (log_spaced && !(lo > 0.0 && hi > 0.0)) throw ConfigError("log range needs positive bounds");
    const int n = static_cast<int>(count);
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        values[static_cast<std::size_t>(i)] =
            log_spaced ? std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo))) : lo + t * (hi - lo);
    }
    if (n > 1) values.back() = hi;
    return values;
}

RunConfig RunConfig::timeseries_defaults() { return RunConfig{}; }

RunConfig RunConfig::heatmap_defaults() {
    RunConfig c;
    c.mode = RunMode::Heatmap;
    c.kappa_bar = parse_axis("0.01:1:50:log");
    c.delta_bar = parse_axis("0:6:50");
    c.tau_max = 1000.0;
    c.tau_points = 0;
    c.observables = {Observable::Blp};
    return c;
}

bool RunConfig::wants(Observable o) const {
    return std::find(observables.begin(), observables.end(), o) != observables.end();
}

void RunConfig::validate() const {
    if (kappa_bar.empty() || delta_bar.empty()) throw ConfigError("parameter lists must be non-empty");
    for (double k : kappa_bar)
        if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("kbar values must be finite and > 0");
    for (double d : delta_bar)
        if (!std::isfinite(d)) throw ConfigError("dbar values must be finite");
    if (!(tau_max > 0.0) || !std::isfinite(tau_max)) throw ConfigError("tau-max must be > 0");
    if (tau_points != 0 && tau_points < 2) throw ConfigError("tau-points must be >= 2 (or 0 for automatic)");
    if (!(prep.theta >= 0.0 && prep.theta <= std::numbers::pi)) throw ConfigError("theta must lie in [0, pi]");
    if (!std::isfinite(prep.nu)) throw ConfigError("nu must be finite");
    if (mode == RunMode::Heatmap && !wants(Observable::Blp))
        throw ConfigError("heatmap mode requires the blp observable");
    if (jobs < 0) throw ConfigError("jobs must be >= 0");
    blp.validate();
    try {
        quadrature.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

} // namespace nmspin::harness
