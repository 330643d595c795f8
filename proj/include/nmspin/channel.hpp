// channel.hpp - Amplitude-damping channel generated by (Γ, Φ) and qubit observables
//
// Basis ordering is {|↑⟩, |↓⟩}: index 0 is ↑, index 1 is ↓.

#pragma once

#include <cmath>
#include <numbers>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "nmspin/errors.hpp"
#include "nmspin/kernels.hpp"

namespace nmspin {

template <class Scalar>
using DensityMatrix = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
using DensityMatrixd = DensityMatrix<double>;

/// |ψ⟩ = cos(θ/2)|↑⟩ + sin(θ/2)e^{iν}|↓⟩
template <class Scalar>
struct PureStatePrep {
    Scalar theta{};
    Scalar nu{};

    std::complex<Scalar> a() const { return {std::cos(theta / 2), Scalar(0)}; }
    std::complex<Scalar> b() const { return std::polar(std::sin(theta / 2), nu); }

    DensityMatrix<Scalar> density() const {
        const auto av = a(), bv = b();
        DensityMatrix<Scalar> rho;
        rho << av * std::conj(av), av * std::conj(bv), std::conj(av) * bv, bv * std::conj(bv);
        return rho;
    }
};
using PureStatePrepd = PureStatePrep<double>;

template <class Scalar>
struct KrausPair {
    Eigen::Matrix<std::complex<Scalar>, 2, 2> k0;
    Eigen::Matrix<std::complex<Scalar>, 2, 2> k1;

    Eigen::Matrix<std::complex<Scalar>, 2, 2> completeness() const {
        return k0.adjoint() * k0 + k1.adjoint() * k1;
    }
};

/// ρ(τ) for the damping factor F₀ = e^{−2Γ} and coherence factor F₁ = e^{−(Γ + iΦ)}:
///   ρ↑↑ = |a|²F₀,  ρ↑↓ = a b* F₁,  ρ↓↓ = 1 − |a|²F₀.
/// Γ < 0 yields the formal (possibly non-positive) matrix.
template <class Scalar>
DensityMatrix<Scalar> evolve_state(const PureStatePrep<Scalar>& prep, Scalar gamma, Scalar phi) {
    const std::complex<Scalar> f1 = std::exp(std::complex<Scalar>(-gamma, -phi));
    const Scalar f0 = std::exp(-2 * gamma);
    const auto a = prep.a(), b = prep.b();
    const Scalar pop_up = std::norm(a) * f0;
    const std::complex<Scalar> coh = a * std::conj(b) * f1;
    DensityMatrix<Scalar> rho;
    rho << pop_up, coh, std::conj(coh), Scalar(1) - pop_up;
    return rho;
}

template <class Scalar>
KrausPair<Scalar> kraus_pair(Scalar gamma, Scalar phi) {
    if (gamma < 0) throw NotCompletelyPositive(static_cast<double>(gamma));
    const std::complex<Scalar> f1 = std::exp(std::complex<Scalar>(-gamma, -phi));
    const Scalar f0 = std::exp(-2 * gamma);
    KrausPair<Scalar> k;
    k.k0 << f1, Scalar(0), Scalar(0), Scalar(1);
    k.k1 << Scalar(0), Scalar(0), std::sqrt(Scalar(1) - f0), Scalar(0);
    return k;
}

/// ρ = Σ_m K_m ρ(0) K_m†
template <class Scalar>
DensityMatrix<Scalar> apply_kraus(const PureStatePrep<Scalar>& prep, const KrausPair<Scalar>& kraus) {
    const DensityMatrix<Scalar> rho0 = prep.density();
    return kraus.k0 * rho0 * kraus.k0.adjoint() + kraus.k1 * rho0 * kraus.k1.adjoint();
}

/// l₁ coherence: sum of off-diagonal magnitudes.
template <class Scalar>
Scalar coherence_l1(const DensityMatrix<Scalar>& rho) {
    return std::abs(rho(0, 1)) + std::abs(rho(1, 0));
}

enum class SignConvention { UpMinusDown, DownMinusUp };

template <class Scalar>
Scalar population_difference(const DensityMatrix<Scalar>& rho,
                             SignConvention convention = SignConvention::DownMinusUp) {
    const Scalar up_minus_down = rho(0, 0).real() - rho(1, 1).real();
    return convention == SignConvention::UpMinusDown ? up_minus_down : -up_minus_down;
}

template <class Scalar>
Scalar min_eigenvalue(const DensityMatrix<Scalar>& rho) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix<Scalar>> solver(rho, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

// --------------------------- Channel validation ------------------------------

struct ChannelValidation {
    struct Point {
        double tau;
        bool trace_ok;
        bool positive;
        bool kraus_complete;
    };
    std::vector<Point> points;
    std::optional<double> first_violation_tau;

    bool ok() const { return !first_violation_tau.has_value(); }
};

/// Per-τ CPTP checks of the channel defined by a trajectory. Positivity holds
/// iff 0 ≤ F₀ ≤ 1, i.e. Γ ≥ 0, since det ρ = |a|⁴F₀(1 − F₀) for every input.
inline ChannelValidation validate_channel(const DecoherenceTrajectory& traj, double tol = 1e-12) {
    ChannelValidation report;
    report.points.reserve(static_cast<std::size_t>(traj.size()));
    const PureStatePrepd probe{std::numbers::pi / 3, 0.7};
    for (Eigen::Index i = 0; i < traj.size(); ++i) {
        ChannelValidation::Point pt{traj.tau[i], true, true, true};
        const double g = traj.gamma[i];
        const DensityMatrixd rho = evolve_state(probe, g, traj.phi[i]);
        pt.trace_ok = std::isfinite(g) && std::abs(rho.trace().real() - 1.0) <= tol;
        pt.positive = g >= 0.0;
        if (pt.positive) {
            const auto k = kraus_pair(g, traj.phi[i]);
            pt.kraus_complete =
                (k.completeness() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= tol;
        } else {
            pt.kraus_complete = false;
        }
        if (!(pt.trace_ok && pt.positive && pt.kraus_complete) && !report.first_violation_tau)
            report.first_violation_tau = pt.tau;
        report.points.push_back(pt);
    }
    return report;
}

} // namespace nmspin
