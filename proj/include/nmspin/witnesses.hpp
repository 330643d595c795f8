// witnesses.hpp - QFI, QFI flow, trace distance and its rate σ(τ)
//
// Bloch vectors here follow the ½-scaled parameterization used for the QFI
// expressions (|r| = ½ for the pure input at τ = 0). It is not the standard
// r = (2Re ρ↓↑, 2Im ρ↓↑, ρ↑↑ − ρ↓↓) map of the evolved state.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nmspin/channel.hpp"
#include "nmspin/errors.hpp"
#include "nmspin/kernels.hpp"

namespace nmspin {

template <class Scalar>
using BlochVector = Eigen::Matrix<Scalar, 3, 1>;
using BlochVectord = BlochVector<double>;

enum class QfiParameter { Theta, Nu };

// --------------------------- Bloch trajectory --------------------------------

template <class Scalar>
BlochVector<Scalar> bloch_scaled(Scalar theta, Scalar nu, Scalar gamma, Scalar phi) {
    const Scalar amp = std::sin(theta) * std::exp(-gamma) / 2;
    return {amp * std::cos(nu + phi), amp * std::sin(nu + phi),
            std::cos(theta) * std::exp(-2 * gamma) / 2};
}

/// Exact parameter derivative of bloch_scaled.
template <class Scalar>
BlochVector<Scalar> bloch_scaled_derivative(Scalar theta, Scalar nu, Scalar gamma, Scalar phi,
                                           QfiParameter wrt) {
    const Scalar e1 = std::exp(-gamma) / 2;
    if (wrt == QfiParameter::Theta)
        return {std::cos(theta) * std::cos(nu + phi) * e1, std::cos(theta) * std::sin(nu + phi) * e1,
                -std::sin(theta) * std::exp(-2 * gamma) / 2};
    return {-std::sin(theta) * std::sin(nu + phi) * e1, std::sin(theta) * std::cos(nu + phi) * e1,
            Scalar(0)};
}

/// Rows are (r_x, r_y, r_z) at each τ of the trajectory.
inline Eigen::Matrix<double, Eigen::Dynamic, 3> bloch_trajectory(double theta, double nu,
                                                                       const DecoherenceTrajectory& traj) {
    Eigen::Matrix<double, Eigen::Dynamic, 3> out(traj.size(), 3);
    for (Eigen::Index i = 0; i < traj.size(); ++i)
        out.row(i) = bloch_scaled(theta, nu, traj.gamma[i], traj.phi[i]).transpose();
    return out;
}

// --------------------------- QFI ---------------------------------------------

/// F = (r·∂r)² / (1 − |r|²) + |∂r|²
template <class Derived1, class Derived2>
typename Derived1::Scalar qfi_bloch(const Eigen::MatrixBase<Derived1>& r, const Eigen::MatrixBase<Derived2>& dr) {
    using Scalar = typename Derived1::Scalar;
    const Scalar overlap = r.dot(dr);
    const Scalar speed = dr.squaredNorm();
    if (overlap == Scalar(0)) return speed;
    const Scalar purity_gap = Scalar(1) - r.squaredNorm();
    if (!(purity_gap > Scalar(0))) throw SingularState("qfi_bloch: |r| >= 1 with r.dr != 0");
    return overlap * overlap / purity_gap + speed;
}

/// Bloch-vector QFI on the ½-scaled trajectory with exact parameter derivatives.
inline double qfi_bloch_exact(double theta, double nu, double gamma, double phi, QfiParameter wrt) {
    return qfi_bloch(bloch_scaled(theta, nu, gamma, phi), bloch_scaled_derivative(theta, nu, gamma, phi, wrt));
}

/// Same, with a centered finite difference in the parameter.
inline double qfi_bloch_numeric(double theta, double nu, double gamma, double phi, QfiParameter wrt,
                                double h = 1e-6) {
    const BlochVectord r = bloch_scaled(theta, nu, gamma, phi);
    BlochVectord dr;
    if (wrt == QfiParameter::Theta)
        dr = (bloch_scaled(theta + h, nu, gamma, phi) - bloch_scaled(theta - h, nu, gamma, phi)) / (2 * h);
    else
        dr = (bloch_scaled(theta, nu + h, gamma, phi) - bloch_scaled(theta, nu - h, gamma, phi)) / (2 * h);
    return qfi_bloch(r, dr);
}

template <class Scalar>
struct QfiPair {
    Scalar theta;
    Scalar nu;
};

/// Printed closed forms F_θ(θ, Γ) and F_ν(θ, Γ).
template <class Scalar>
QfiPair<Scalar> qfi_theta_nu(Scalar theta, Scalar gamma) {
    const Scalar y = std::exp(-2 * gamma);
    const Scalar s2 = std::sin(theta) * std::sin(theta);
    const Scalar c2 = std::cos(theta) * std::cos(theta);
    const Scalar den = Scalar(1) - y * (s2 + c2 * y) / 4;
    if (!(std::abs(den) > std::numeric_limits<Scalar>::epsilon()))
        throw DegenerateDenominator("F_theta denominator vanishes");
    const Scalar overlap = std::sin(theta) * std::cos(theta) * y * (Scalar(1) - y) / 4;
    return {overlap * overlap / den + y * (c2 + s2 * y) / 4, y * s2 / 4};
}

/// Boxed QFI flows 𝓕_θ, 𝓕_ν per unit τ. 𝓕_θ is written with numerator and
/// denominator scaled by e^{−8Γ} (powers of y = e^{−2Γ} instead of e^{2Γ}) so it
/// stays finite for large Γ; the expression is otherwise unchanged.
template <class Scalar>
QfiPair<Scalar> qfi_flow(Scalar theta, Scalar gamma, Scalar gamma_rate) {
    const Scalar y = std::exp(-2 * gamma);
    const Scalar s2 = std::sin(theta) * std::sin(theta);
    const Scalar c2 = std::cos(theta) * std::cos(theta);
    const Scalar den = Scalar(-4) + c2 * y * y + s2 * y;
    if (!(std::abs(den) > std::numeric_limits<Scalar>::epsilon()))
        throw DegenerateDenominator("F_theta flow denominator vanishes");
    const Scalar y2 = y * y, y3 = y2 * y, y4 = y3 * y;
    const Scalar numer = y4 + 2 * y3 - 24 * y2 + 32 * y + 16 +
                         (y4 - 2 * y3 + 8 * y2 - 32 * y + 16) * std::cos(2 * theta);
    const Scalar flow_theta = -(y * numer * gamma_rate) / (4 * den * den);
    const Scalar flow_nu = -s2 * y * gamma_rate / 2;
    return {flow_theta, flow_nu};
}

struct QfiSeries {
    Eigen::ArrayXd f_theta, f_nu, flow_theta, flow_nu;
};

inline QfiSeries qfi_series(double theta, const DecoherenceTrajectory& traj) {
    const Eigen::Index n = traj.size();
    QfiSeries out{Eigen::ArrayXd(n), Eigen::ArrayXd(n), Eigen::ArrayXd(n), Eigen::ArrayXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto f = qfi_theta_nu(theta, traj.gamma[i]);
        const auto flow = qfi_flow(theta, traj.gamma[i], traj.gamma_rate[i]);
        out.f_theta[i] = f.theta;
        out.f_nu[i] = f.nu;
        out.flow_theta[i] = flow.theta;
        out.flow_nu[i] = flow.nu;
    }
    return out;
}

/// Printed F_θ, F_ν against the Bloch-vector QFI on the trajectory (finite-difference
/// parameter derivatives). Reported, never asserted here.
struct QfiDiscrepancy {
    double theta{}, nu{};
    double max_abs_theta{}, max_abs_nu{};
};

inline QfiDiscrepancy qfi_path_discrepancy(double theta, double nu, const DecoherenceTrajectory& traj,
                                           double h = 1e-6) {
    QfiDiscrepancy d{theta, nu, 0.0, 0.0};
    for (Eigen::Index i = 0; i < traj.size(); ++i) {
        const auto printed = qfi_theta_nu(theta, traj.gamma[i]);
        const double ft = qfi_bloch_numeric(theta, nu, traj.gamma[i], traj.phi[i], QfiParameter::Theta, h);
        const double fn = qfi_bloch_numeric(theta, nu, traj.gamma[i], traj.phi[i], QfiParameter::Nu, h);
        d.max_abs_theta = std::max(d.max_abs_theta, std::abs(printed.theta - ft));
        d.max_abs_nu = std::max(d.max_abs_nu, std::abs(printed.nu - fn));
    }
    return d;
}

// --------------------------- Trace distance ----------------------------------

/// D = ½‖ρa − ρb‖₁. For a traceless Hermitian 2×2 difference with diagonal
/// (d, −d) and off-diagonal c the eigenvalues are ±√(d² + |c|²).
template <class Scalar>
Scalar trace_distance(const DensityMatrix<Scalar>& rho_a, const DensityMatrix<Scalar>& rho_b) {
    const DensityMatrix<Scalar> diff = rho_a - rho_b;
    const Scalar d = (diff(0, 0).real() - diff(1, 1).real()) / 2;
    return std::sqrt(d * d + std::norm(diff(0, 1)));
}

/// Pair data that fixes D(τ) under this channel: with Δp = |a₁|² − |a₂|² and
/// Δc = a₁b₁* − a₂b₂*, D = √(Δp² F₀² + |Δc|² F₀).
struct PairInvariants {
    double pop_sq;  // Δp²
    double coh_sq;  // |Δc|²

    static PairInvariants of(const PureStatePrepd& x, const PureStatePrepd& y) {
        const double dp = std::norm(x.a()) - std::norm(y.a());
        const std::complex<double> dc = x.a() * std::conj(x.b()) - y.a() * std::conj(y.b());
        return {dp * dp, std::norm(dc)};
    }

    double distance(double f0) const { return std::sqrt(pop_sq * f0 * f0 + coh_sq * f0); }

    /// σ = dD/dτ by the chain rule through F₀ = e^{−2Γ}, dF₀/dτ = −2Γ′F₀.
    double rate(double f0, double gamma_rate) const {
        const double dist = distance(f0);
        if (dist == 0.0) return 0.0;
        return -(2.0 * pop_sq * f0 + coh_sq) * f0 * gamma_rate / dist;
    }
};

struct SigmaSeries {
    Eigen::ArrayXd tau;
    Eigen::ArrayXd distance;
    Eigen::ArrayXd sigma;
};

/// D(τ) from the evolved states and σ(τ) = dD/dτ using the trajectory's exact Γ′.
inline SigmaSeries sigma_series(const PureStatePrepd& prep_a, const PureStatePrepd& prep_b,
                                const DecoherenceTrajectory& traj) {
    const auto inv = PairInvariants::of(prep_a, prep_b);
    SigmaSeries out{traj.tau, Eigen::ArrayXd(traj.size()), Eigen::ArrayXd(traj.size())};
    for (Eigen::Index i = 0; i < traj.size(); ++i) {
        out.distance[i] = trace_distance(evolve_state(prep_a, traj.gamma[i], traj.phi[i]),
                                         evolve_state(prep_b, traj.gamma[i], traj.phi[i]));
        out.sigma[i] = inv.rate(std::exp(-2.0 * traj.gamma[i]), traj.gamma_rate[i]);
    }
    return out;
}

// --------------------------- Positive-part integration -----------------------

struct PositivePart {
    double value{0.0};
    std::vector<std::pair<double, double>> intervals;
};

namespace detail {

// Trapezoid area of max(σ, 0) over one grid interval, splitting at a sign change.
inline double positive_panel(double h, double s0, double s1) {
    if (s0 > 0.0 && s1 > 0.0) return 0.5 * h * (s0 + s1);
    if (s0 > 0.0) return 0.5 * s0 * (h * s0 / (s0 - s1));
    if (s1 > 0.0) return 0.5 * s1 * (h * s1 / (s1 - s0));
    return 0.0;
}

} // namespace detail

/// ∫ max(σ, 0) dτ by trapezoid with linear interpolation of zero crossings,
/// plus the (τ_start, τ_end) intervals where σ > 0.
inline PositivePart positive_part_integral(const Eigen::ArrayXd& tau, const Eigen::ArrayXd& sigma) {
    PositivePart out;
    const Eigen::Index n = tau.size();
    if (n == 0) return out;
    double start = tau[0];  // left end of the current positive run, valid while σ > 0
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double h = tau[i + 1] - tau[i];
        const double s0 = sigma[i], s1 = sigma[i + 1];
        out.value += detail::positive_panel(h, s0, s1);
        if (s0 > 0.0 && !(s1 > 0.0))
            out.intervals.emplace_back(start, tau[i] + h * s0 / (s0 - s1));
        else if (!(s0 > 0.0) && s1 > 0.0)
            start = s0 < 0.0 ? tau[i] + h * (-s0) / (s1 - s0) : tau[i];
    }
    if (sigma[n - 1] > 0.0) out.intervals.emplace_back(start, tau[n - 1]);
    return out;
}

} // namespace nmspin
