// support.hpp - Shared helpers for the unit tests

#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Core>

#include "nmspin/kernels.hpp"

namespace testing {

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// Closed-form exponential/modulated decoherence written directly from the
/// complex exponential c = 𝕜 − iΔ̄:  A(τ) = 𝕜[τ/c − (1 − e^{−cτ})/c²],  α = 𝕜(1 − e^{−cτ})/c.
/// The modulated kernel is the mean over c± = 𝕜 − i(Δ̄ ± 1).
struct ExactDecoherence {
    double gamma, phi, gamma_rate;
};

inline ExactDecoherence exponential_exact(double k, double d, double tau) {
    const std::complex<double> c{k, -d};
    const auto decay = std::exp(-c * tau);
    const auto a = k * (tau / c - (1.0 - decay) / (c * c));
    const auto alpha = k * (1.0 - decay) / c;
    return {a.real(), a.imag(), alpha.real()};
}

inline ExactDecoherence modulated_exact(double k, double d, double tau) {
    const auto p = exponential_exact(k, d + 1.0, tau);
    const auto m = exponential_exact(k, d - 1.0, tau);
    return {(p.gamma + m.gamma) / 2, (p.phi + m.phi) / 2, (p.gamma_rate + m.gamma_rate) / 2};
}

inline ExactDecoherence exact(nmspin::KernelKind kind, double k, double d, double tau) {
    return kind == nmspin::KernelKind::Modulated ? modulated_exact(k, d, tau) : exponential_exact(k, d, tau);
}

/// Trajectory from an arbitrary smooth Γ(τ) with analytic derivative.
template <class G, class DG>
nmspin::DecoherenceTrajectory synthetic(const Eigen::ArrayXd& tau, G gamma, DG rate) {
    nmspin::DecoherenceTrajectory t;
    t.tau = tau;
    t.gamma = tau.unaryExpr(gamma);
    t.phi = 0.3 * tau;
    t.gamma_rate = tau.unaryExpr(rate);
    return t;
}

/// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("nmspin_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing
