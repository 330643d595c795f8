// quadrature.hpp - Globally adaptive Gauss-Kronrod (7/15) integration
//
// Works for any integrand value type that supports +, scalar * and a norm:
// real scalars, std::complex, and fixed-size Eigen vectors (several integrals
// sharing one set of abscissae).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "nmspin/errors.hpp"

namespace nmspin {

struct QuadratureConfig {
    double abs_tol{1e-10};
    double rel_tol{1e-10};
    int max_subdivisions{2000};

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw DomainError("quadrature tolerances must be positive");
        if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
    }
};

template <class V>
struct QuadratureResult {
    V value;
    double error_estimate;
    int subdivisions;
};

namespace detail {

template <class V>
double quad_norm(const V& v) {
    using std::abs;
    if constexpr (std::is_base_of_v<Eigen::DenseBase<V>, V>) {
        return static_cast<double>(v.cwiseAbs().maxCoeff());
    } else {
        return static_cast<double>(abs(v));
    }
}

template <class V>
V zero_like(const V& v) {
    if constexpr (std::is_base_of_v<Eigen::DenseBase<V>, V>) {
        return V::Zero(v.rows(), v.cols());
    } else {
        return V{};
    }
}

// Kronrod abscissae and weights; Gauss weights belong to the odd-indexed nodes.
inline constexpr std::array<double, 8> kronrod_x{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kronrod_w{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Segment {
    double a, b;
    V value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

} // namespace detail

/// Single 15-point Kronrod panel on [a, b] with the embedded 7-point Gauss
/// rule as the error estimate.
template <class F>
auto gauss_kronrod_15(F&& f, double a, double b) {
    using V = std::decay_t<decltype(f(a))>;
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const V f_center = f(center);
    V kronrod = f_center * detail::kronrod_w[7];
    V gauss = f_center * detail::gauss_w[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * detail::kronrod_x[j];
        const V sum = f(center - dx) + f(center + dx);
        kronrod = kronrod + sum * detail::kronrod_w[j];
        if (j % 2 == 1) gauss = gauss + sum * detail::gauss_w[j / 2];
    }
    kronrod = kronrod * half;
    gauss = gauss * half;
    const double err = detail::quad_norm(V(kronrod - gauss));
    return detail::Segment<V>{a, b, kronrod, err};
}

/// Globally adaptive integration: the panel with the largest error estimate
/// is bisected until the summed estimate meets max(abs_tol, rel_tol * |I|).
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
    using V = std::decay_t<decltype(f(a))>;

    auto first = gauss_kronrod_15(f, a, b);
    if (a == b) return QuadratureResult<V>{detail::zero_like(first.value), 0.0, 0};
    if (first.error <= std::max(cfg.abs_tol, cfg.rel_tol * detail::quad_norm(first.value)))
        return QuadratureResult<V>{first.value, first.error, 0};

    std::priority_queue<detail::Segment<V>> heap;
    V total = first.value;
    double total_err = first.error;
    heap.push(std::move(first));
    int subdivisions = 0;

    auto converged = [&] {
        return total_err <= std::max(cfg.abs_tol, cfg.rel_tol * detail::quad_norm(total));
    };

    while (!converged()) {
        if (subdivisions >= cfg.max_subdivisions) throw QuadratureDidNotConverge(total_err, a, b);
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = gauss_kronrod_15(f, worst.a, mid);
        auto right = gauss_kronrod_15(f, mid, worst.b);
        total = total - worst.value + left.value + right.value;
        total_err += left.error + right.error - worst.error;
        heap.push(std::move(left));
        heap.push(std::move(right));
        ++subdivisions;
    }

    // Re-sum in a fixed order so the result does not carry the update history's rounding.
    std::vector<detail::Segment<V>> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    V value = detail::zero_like(total);
    double err = 0.0;
    for (const auto& p : panels) {
        value = value + p.value;
        err += p.error;
    }
    return QuadratureResult<V>{value, err, subdivisions};
}

} // namespace nmspin
