// test_properties.cpp - Randomised invariants over the channel and witnesses

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nmspin/blp.hpp"
#include "nmspin/channel.hpp"
#include "nmspin/witnesses.hpp"
#include "support.hpp"

using namespace nmspin;
using std::numbers::pi;

namespace {

struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(unsigned seed) : rng(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    PureStatePrepd prep() { return {uniform(0, pi), uniform(0, 2 * pi)}; }
};

} // namespace

TEST_CASE("evolved states are density matrices whenever gamma >= 0") {
    Sampler s(101);
    for (int i = 0; i < 2000; ++i) {
        const auto rho = evolve_state(s.prep(), s.uniform(0, 8), s.uniform(-20, 20));
        CHECK(std::abs(rho.trace() - 1.0) < 1e-14);
        CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-16);
        CHECK(min_eigenvalue(rho) >= -1e-12);
    }
}

TEST_CASE("coherence and excited population never grow with gamma") {
    Sampler s(202);
    for (int i = 0; i < 500; ++i) {
        const auto p = s.prep();
        const double g1 = s.uniform(0, 3), g2 = g1 + s.uniform(0, 3), ph = s.uniform(-5, 5);
        const auto r1 = evolve_state(p, g1, ph), r2 = evolve_state(p, g2, ph);
        CHECK(coherence_l1(r2) <= coherence_l1(r1) + 1e-15);
        CHECK(r2(0, 0).real() <= r1(0, 0).real() + 1e-15);
    }
}

TEST_CASE("trace distance is bounded and contracts under growing gamma") {
    Sampler s(303);
    for (int i = 0; i < 500; ++i) {
        const auto a = s.prep(), b = s.prep();
        const double g1 = s.uniform(0, 3), g2 = g1 + s.uniform(0, 3), ph = s.uniform(-5, 5);
        const double d0 = trace_distance(a.density(), b.density());
        const double d1 = trace_distance(evolve_state(a, g1, ph), evolve_state(b, g1, ph));
        const double d2 = trace_distance(evolve_state(a, g2, ph), evolve_state(b, g2, ph));
        CHECK(d0 <= 1.0 + 1e-15);
        CHECK(d1 <= d0 + 1e-14);
        CHECK(d2 <= d1 + 1e-14);
        CHECK(d2 >= 0.0);
    }
}

TEST_CASE("QFI values are non-negative and theta flow is non-positive under decay") {
    Sampler s(404);
    for (int i = 0; i < 1000; ++i) {
        const double th = s.uniform(0, pi), g = s.uniform(0, 6), rate = s.uniform(0, 2);
        const auto f = qfi_theta_nu(th, g);
        CHECK(f.theta >= 0.0);
        CHECK(f.nu >= 0.0);
        const auto flow = qfi_flow(th, g, rate);
        CHECK(flow.theta <= 1e-15);
        CHECK(flow.nu <= 0.0);
        const auto back = qfi_flow(th, g, -rate);
        CHECK(std::abs(back.theta + flow.theta) <= 1e-15 * std::max(1.0, std::abs(flow.theta)));
    }
}

TEST_CASE("sigma sign follows minus gamma rate for every pair") {
    Sampler s(505);
    for (int i = 0; i < 500; ++i) {
        const auto inv = PairInvariants::of(s.prep(), s.prep());
        if (inv.pop_sq == 0.0 && inv.coh_sq == 0.0) continue;
        const double f0 = std::exp(-2 * s.uniform(0, 4)), rate = s.uniform(-1, 1);
        const double sigma = inv.rate(f0, rate);
        if (rate > 0) CHECK(sigma <= 0.0);
        if (rate < 0) CHECK(sigma >= 0.0);
    }
}

TEST_CASE("BLP value dominates the canonical pair on random oscillating trajectories") {
    Sampler s(606);
    const auto tau = uniform_tau_grid(20.0, 801);
    for (int i = 0; i < 20; ++i) {
        const double slope = s.uniform(0.05, 0.5), amp = s.uniform(0.0, 0.6), w = s.uniform(0.5, 3.0);
        const auto t = testing::synthetic(
            tau, [&](double x) { return slope * x + amp * std::sin(w * x) * (1 - std::exp(-x)); },
            [&](double x) {
                return slope + amp * (w * std::cos(w * x) * (1 - std::exp(-x)) + std::sin(w * x) * std::exp(-x));
            });
        const auto r = blp_measure(t);
        CHECK(r.n_value >= r.canonical_value - 1e-9);
        CHECK(r.n_value >= 0.0);
        if ((t.gamma_rate >= 0.0).all()) CHECK(r.n_value == 0.0);
    }
}
