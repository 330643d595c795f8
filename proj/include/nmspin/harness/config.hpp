// config.hpp - Run configuration for time-series and heatmap sweeps

#pragma once

#include <filesystem>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "nmspin/blp.hpp"
#include "nmspin/channel.hpp"
#include "nmspin/kernels.hpp"
#include "nmspin/quadrature.hpp"

namespace nmspin::harness {

enum class RunMode { Timeseries, Heatmap };
enum class Observable { Coherence, Population, QfiFlow, TraceDistance, Blp };
enum class OutputFormat { Csv, Json };

std::string_view to_string(RunMode m);
std::string_view to_string(Observable o);
std::string_view to_string(OutputFormat f);
std::string_view to_string(SignConvention s);

Observable parse_observable(std::string_view s);
std::vector<Observable> parse_observables(std::string_view list);
OutputFormat parse_format(std::string_view s);
SignConvention parse_sign_convention(std::string_view s);

/// Axis syntax: "a,b,c" (explicit list), "lo:hi:n" (n linear points) or
/// "lo:hi:n:log" (n log-spaced points).
std::vector<double> parse_axis(std::string_view text);

struct RunConfig {
    RunMode mode{RunMode::Timeseries};
    KernelKind kernel{KernelKind::Exponential};
    std::vector<double> kappa_bar{0.01, 0.1, 1.0};
    std::vector<double> delta_bar{0.0, 5.0};
    double tau_max{50.0};
    int tau_points{2001};  // 0: derive the step from the fastest scale of each point
    PureStatePrepd prep{std::numbers::pi / 2, 0.0};
    std::vector<Observable> observables{Observable::Coherence, Observable::Population, Observable::QfiFlow,
                                        Observable::TraceDistance, Observable::Blp};
    SignConvention sign_convention{SignConvention::DownMinusUp};
    BlpConfig blp{};
    QuadratureConfig quadrature{};
    bool use_closed_form{false};
    std::filesystem::path output_dir{"out"};
    OutputFormat output_format{OutputFormat::Csv};
    bool plot{false};
    int jobs{0};

    static RunConfig timeseries_defaults();
    /// 50 × 50 grid, 𝕜 ∈ [0.01, 1] log-spaced, Δ̄ ∈ [0, 6], τ ∈ [0, 1000] on the resolved step.
    static RunConfig heatmap_defaults();

    bool wants(Observable o) const;
    void validate() const;
};

} // namespace nmspin::harness
