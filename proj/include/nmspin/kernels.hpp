// kernels.hpp - Random-coupling memory kernels and the decoherence functions Γ(τ), Φ(τ)
//
// Everything is in dimensionless units: τ = ωt, 𝕜 = κ/ω, Δ̄ = (ω₀ − ω)/ω.
// All bath frequencies are taken equal, so the (1/N)Σ_k average collapses to a
// single term and the kernel normalization enters α(z) directly.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "nmspin/errors.hpp"
#include "nmspin/quadrature.hpp"

namespace nmspin {

enum class KernelKind { Delta, Exponential, Modulated };

inline std::string_view to_string(KernelKind k) {
    switch (k) {
        case KernelKind::Delta: return "delta";
        case KernelKind::Exponential: return "exponential";
        case KernelKind::Modulated: return "modulated";
    }
    return "unknown";
}

inline KernelKind parse_kernel_kind(std::string_view s) {
    if (s == "delta") return KernelKind::Delta;
    if (s == "exponential") return KernelKind::Exponential;
    if (s == "modulated") return KernelKind::Modulated;
    throw ConfigError("unknown kernel '" + std::string(s) + "'");
}

struct KernelSpec {
    KernelKind kind{KernelKind::Exponential};
    double kappa_bar{1.0};

    KernelSpec() = default;
    KernelSpec(KernelKind k, double kappa) : kind(k), kappa_bar(kappa) {
        if (!(kappa > 0.0) || !std::isfinite(kappa))
            throw DomainError("kappa_bar must be finite and > 0, got " + std::to_string(kappa));
    }
};

struct ModelParams {
    KernelSpec kernel;
    double delta_bar{0.0};

    ModelParams() = default;
    ModelParams(KernelSpec k, double delta) : kernel(k), delta_bar(delta) {
        if (!std::isfinite(delta)) throw DomainError("delta_bar must be finite");
    }
};

enum class TrajectorySource { ClosedForm, Quadrature };

inline std::string_view to_string(TrajectorySource s) {
    return s == TrajectorySource::ClosedForm ? "closed_form" : "quadrature";
}

struct DecoherenceTrajectory {
    Eigen::ArrayXd tau;
    Eigen::ArrayXd gamma;
    Eigen::ArrayXd phi;
    Eigen::ArrayXd gamma_rate;  // dΓ/dτ
    TrajectorySource source{TrajectorySource::Quadrature};

    Eigen::Index size() const { return tau.size(); }
};

// --------------------------- τ grids ----------------------------------------

/// Largest grid step that resolves the fastest scale in the integrand.
inline double resolved_step(const ModelParams& p) {
    const double fastest = std::max({1.0, std::abs(p.delta_bar), p.kernel.kappa_bar});
    return std::min(0.05, 0.1 / fastest);
}

inline Eigen::ArrayXd uniform_tau_grid(double tau_max, Eigen::Index points) {
    if (!(tau_max > 0.0) || !std::isfinite(tau_max)) throw DomainError("tau_max must be > 0");
    if (points < 2) throw DomainError("a tau grid needs at least 2 points");
    Eigen::ArrayXd grid(points);
    for (Eigen::Index i = 0; i < points; ++i)
        grid[i] = tau_max * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

inline Eigen::ArrayXd resolved_tau_grid(const ModelParams& p, double tau_max) {
    const auto intervals = static_cast<Eigen::Index>(std::ceil(tau_max / resolved_step(p) - 1e-9));
    return uniform_tau_grid(tau_max, std::max<Eigen::Index>(intervals, 1) + 1);
}

namespace detail {

inline void check_tau_grid(const Eigen::ArrayXd& tau) {
    if (tau.size() == 0) throw DomainError("empty tau grid");
    if (tau[0] != 0.0) throw DomainError("tau grid must start at 0");
    for (Eigen::Index i = 1; i < tau.size(); ++i)
        if (!(tau[i] > tau[i - 1])) throw DomainError("tau grid must be strictly increasing");
    if (!std::isfinite(tau[tau.size() - 1])) throw DomainError("tau grid must be finite");
}

} // namespace detail

// --------------------------- Correlation kernels -----------------------------

/// Ensemble-averaged coupling correlation K(s) at dimensionless lag s = τ − τ′.
template <class Scalar>
Scalar correlation_value(const KernelSpec& kernel, const Scalar& s) {
    using std::cos;
    using std::exp;
    if (kernel.kind == KernelKind::Delta) throw DeltaKernelNotPointwise();
    if (s < 0) throw DomainError("correlation lag must be >= 0");
    const Scalar k = Scalar(kernel.kappa_bar);
    const Scalar decay = k * exp(-k * s);
    if (kernel.kind == KernelKind::Modulated) return Scalar(decay * cos(s));
    return decay;
}

/// α(z) = ∫₀^z K(z − t′) e^{iΔ̄(z − t′)} dt′ by adaptive quadrature.
inline std::complex<double> alpha_numeric(const ModelParams& p, double z,
                                          const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (p.kernel.kind == KernelKind::Delta) throw DeltaKernelNotPointwise();
    if (z < 0.0) throw DomainError("alpha_numeric requires z >= 0");
    if (z == 0.0) return {0.0, 0.0};
    auto integrand = [&](double t_prime) {
        const double lag = std::max(0.0, z - t_prime);
        return correlation_value(p.kernel, lag) * std::polar(1.0, p.delta_bar * lag);
    };
    return integrate_adaptive(integrand, 0.0, z, cfg).value;
}

/// Γ and Φ as Re/Im of ∫₀^τ α(z) dz, accumulated panel by panel.
///
/// With g(s) = K(s)e^{iΔ̄s}, α(τ) = ∫₀^τ g and ∫₀^T α = ∫₀^T (T − s) g(s) ds, so
/// across a grid interval [τ₀, τ₁]:
///   α(τ₁) = α(τ₀) + ∫ g,   A(τ₁) = A(τ₀) + (τ₁ − τ₀)α(τ₀) + ∫ (τ₁ − s) g(s) ds.
/// Both panel integrals are adaptive, so accuracy does not depend on grid spacing.
inline DecoherenceTrajectory decoherence_numeric(const ModelParams& p, const Eigen::ArrayXd& tau,
                                                 const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (p.kernel.kind == KernelKind::Delta) throw DeltaKernelNotPointwise();
    detail::check_tau_grid(tau);

    const Eigen::Index n = tau.size();
    DecoherenceTrajectory out;
    out.tau = tau;
    out.gamma.resize(n);
    out.phi.resize(n);
    out.gamma_rate.resize(n);
    out.source = TrajectorySource::Quadrature;

    std::complex<double> alpha{0.0, 0.0};
    std::complex<double> accumulated{0.0, 0.0};
    out.gamma[0] = 0.0;
    out.phi[0] = 0.0;
    out.gamma_rate[0] = 0.0;

    for (Eigen::Index i = 1; i < n; ++i) {
        const double lo = tau[i - 1];
        const double hi = tau[i];
        auto panel = [&](double s) {
            const std::complex<double> g =
                correlation_value(p.kernel, s) * std::polar(1.0, p.delta_bar * s);
            return Eigen::Vector2cd(g, (hi - s) * g);
        };
        const Eigen::Vector2cd r = integrate_adaptive(panel, lo, hi, cfg).value;
        accumulated += (hi - lo) * alpha + r[1];
        alpha += r[0];
        out.gamma[i] = accumulated.real();
        out.phi[i] = accumulated.imag();
        out.gamma_rate[i] = alpha.real();
    }
    return out;
}

// --------------------------- Closed forms ------------------------------------

/// Closed-form Γ(τ), Φ(τ), dΓ/dτ for the exponential kernel, as printed:
///   Γ = 𝕜²/(𝕜²+Δ̄²) τ − (𝕜³ − 𝕜Δ̄²)/(𝕜²+Δ̄²)² [1 − e^{−𝕜τ} cos Δ̄τ]
///   Φ = 𝕜Δ̄/(𝕜²+Δ̄²) τ − 𝕜²/(𝕜²+Δ̄²)² [2Δ̄ − e^{−𝕜τ}((𝕜²−Δ̄²)/𝕜 sin Δ̄τ + 2Δ̄ cos Δ̄τ)]
/// Note: direct integration also yields −2𝕜²Δ̄/(𝕜²+Δ̄²)² e^{−𝕜τ} sin Δ̄τ in Γ, which the
/// printed form lacks. It is kept as printed; compare against decoherence_numeric.
template <class Derived>
auto exponential_gamma_closed(double k, double d, const Eigen::ArrayBase<Derived>& tau) {
    using Array = Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1>;
    const double den = k * k + d * d;
    const Array decay = (-k * tau.derived()).exp();
    return Array(k * k / den * tau.derived() -
                 (k * k * k - k * d * d) / (den * den) * (1.0 - decay * (d * tau.derived()).cos()));
}

template <class Derived>
auto exponential_phi_closed(double k, double d, const Eigen::ArrayBase<Derived>& tau) {
    using Array = Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1>;
    const double den = k * k + d * d;
    const Array decay = (-k * tau.derived()).exp();
    return Array(k * d / den * tau.derived() -
                 k * k / (den * den) *
                     (2.0 * d - decay * ((k * k - d * d) / k * (d * tau.derived()).sin() +
                                         2.0 * d * (d * tau.derived()).cos())));
}

template <class Derived>
auto exponential_gamma_rate_closed(double k, double d, const Eigen::ArrayBase<Derived>& tau) {
    using Array = Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1>;
    const double den = k * k + d * d;
    const Array decay = (-k * tau.derived()).exp();
    return Array(k * k / den - (k * k * k - k * d * d) / (den * den) * decay *
                                   (k * (d * tau.derived()).cos() + d * (d * tau.derived()).sin()));
}

namespace detail {

// Per-sideband coefficients of the modulated closed form, u = Δ̄ ± 1.
struct Sideband {
    double u, den, a, b;
    Sideband(double k, double u_) : u(u_), den(k * k + u_ * u_) {
        a = (k * k - u * u) / (den * den);
        b = 2.0 * k * u / (den * den);
    }
};

inline void check_modulated_domain(double k, double d) {
    if (k * k + (d + 1.0) * (d + 1.0) == 0.0 || k * k + (d - 1.0) * (d - 1.0) == 0.0)
        throw DomainError("modulated closed form singular: kappa^2 + (delta +- 1)^2 = 0");
}

} // namespace detail

/// Closed-form Γ(τ) for the modulated kernel, as printed (sum over sidebands Δ̄ ± 1).
template <class Derived>
auto modulated_gamma_closed(double k, double d, const Eigen::ArrayBase<Derived>& tau) {
    using Array = Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1>;
    const detail::Sideband plus(k, d + 1.0), minus(k, d - 1.0);
    const Array decay = (-k * tau.derived()).exp();
    const Array osc = plus.a * (plus.u * tau.derived()).cos() - plus.b * (plus.u * tau.derived()).sin() +
                      minus.a * (minus.u * tau.derived()).cos() -
                      minus.b * (minus.u * tau.derived()).sin();
    return Array(k / 2.0 *
                 (-plus.a - minus.a + (1.0 / plus.den + 1.0 / minus.den) * k * tau.derived() + decay * osc));
}

template <class Derived>
auto modulated_phi_closed(double k, double d, const Eigen::ArrayBase<Derived>& tau) {
    using Array = Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1>;
    const detail::Sideband plus(k, d + 1.0), minus(k, d - 1.0);
    const Array decay = (-k * tau.derived()).exp();
    const Array osc = plus.b * (plus.u * tau.derived()).cos() + plus.a * (plus.u * tau.derived()).sin() +
                      minus.a * (minus.u * tau.derived()).sin() +
                      minus.b * (minus.u * tau.derived()).cos();
    return Array(k / 2.0 *
                 ((plus.u / plus.den + minus.u / minus.den) * tau.derived() + decay * osc - plus.b - minus.b));
}

template <class Derived>
auto modulated_gamma_rate_closed(double k, double d, const Eigen::ArrayBase<Derived>& tau) {
    using Array = Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1>;
    const detail::Sideband plus(k, d + 1.0), minus(k, d - 1.0);
    const Array decay = (-k * tau.derived()).exp();
    Array slope = Array::Zero(tau.size());
    for (const auto* sb : {&plus, &minus}) {
        const Array c = (sb->u * tau.derived()).cos();
        const Array s = (sb->u * tau.derived()).sin();
        slope += -k * (sb->a * c - sb->b * s) - sb->u * (sb->a * s + sb->b * c);
    }
    return Array(k / 2.0 * ((1.0 / plus.den + 1.0 / minus.den) * k + decay * slope));
}

inline DecoherenceTrajectory decoherence_closed_exponential(const ModelParams& p,
                                                            const Eigen::ArrayXd& tau) {
    if (p.kernel.kind != KernelKind::Exponential)
        throw DomainError("decoherence_closed_exponential needs an exponential kernel");
    const double k = p.kernel.kappa_bar, d = p.delta_bar;
    if (k * k + d * d == 0.0) throw DomainError("kappa^2 + delta^2 = 0");
    return {tau, exponential_gamma_closed(k, d, tau), exponential_phi_closed(k, d, tau),
            exponential_gamma_rate_closed(k, d, tau), TrajectorySource::ClosedForm};
}

inline DecoherenceTrajectory decoherence_closed_modulated(const ModelParams& p,
                                                          const Eigen::ArrayXd& tau) {
    if (p.kernel.kind != KernelKind::Modulated)
        throw DomainError("decoherence_closed_modulated needs a modulated kernel");
    const double k = p.kernel.kappa_bar, d = p.delta_bar;
    detail::check_modulated_domain(k, d);
    return {tau, modulated_gamma_closed(k, d, tau), modulated_phi_closed(k, d, tau),
            modulated_gamma_rate_closed(k, d, tau), TrajectorySource::ClosedForm};
}

/// Delta-correlated couplings: α = 𝕜, so Γ = 𝕜τ and Φ = 0.
inline DecoherenceTrajectory decoherence_markovian(double kappa_bar, const Eigen::ArrayXd& tau) {
    if (!(kappa_bar > 0.0)) throw DomainError("kappa_bar must be > 0");
    const Eigen::Index n = tau.size();
    return {tau, kappa_bar * tau, Eigen::ArrayXd::Zero(n), Eigen::ArrayXd::Constant(n, kappa_bar),
            TrajectorySource::ClosedForm};
}

enum class DecoherenceMethod { Quadrature, ClosedForm };

/// Dispatch on kernel kind. The delta kernel is always handled symbolically.
inline DecoherenceTrajectory decoherence(const ModelParams& p, const Eigen::ArrayXd& tau,
                                         DecoherenceMethod method, const QuadratureConfig& cfg = {}) {
    switch (p.kernel.kind) {
        case KernelKind::Delta: return decoherence_markovian(p.kernel.kappa_bar, tau);
        case KernelKind::Exponential:
            return method == DecoherenceMethod::ClosedForm ? decoherence_closed_exponential(p, tau)
                                                           : decoherence_numeric(p, tau, cfg);
        case KernelKind::Modulated:
            return method == DecoherenceMethod::ClosedForm ? decoherence_closed_modulated(p, tau)
                                                           : decoherence_numeric(p, tau, cfg);
    }
    throw DomainError("unknown kernel kind");
}

// --------------------------- Closed form vs oracle ---------------------------

struct DiscrepancyReport {
    KernelKind kind{};
    double kappa_bar{}, delta_bar{};
    double max_abs_gamma{}, max_abs_phi{}, max_abs_gamma_rate{};
    double tau_at_max_gamma{}, tau_at_max_phi{};
    double tolerance{};
    bool within_tolerance{true};
};

/// Pointwise comparison of two trajectories on the same grid.
inline DiscrepancyReport compare_trajectories(const ModelParams& p, const DecoherenceTrajectory& closed,
                                              const DecoherenceTrajectory& oracle,
                                              double tolerance = 1e-6) {
    if (closed.size() != oracle.size() || !(closed.tau == oracle.tau).all())
        throw DomainError("trajectories are not on the same grid");
    DiscrepancyReport r;
    r.kind = p.kernel.kind;
    r.kappa_bar = p.kernel.kappa_bar;
    r.delta_bar = p.delta_bar;
    r.tolerance = tolerance;
    Eigen::Index ig = 0, ip = 0;
    r.max_abs_gamma = (closed.gamma - oracle.gamma).abs().maxCoeff(&ig);
    r.max_abs_phi = (closed.phi - oracle.phi).abs().maxCoeff(&ip);
    r.max_abs_gamma_rate = (closed.gamma_rate - oracle.gamma_rate).abs().maxCoeff();
    r.tau_at_max_gamma = closed.tau[ig];
    r.tau_at_max_phi = closed.tau[ip];
    r.within_tolerance = r.max_abs_gamma <= tolerance && r.max_abs_phi <= tolerance;
    return r;
}

} // namespace nmspin
