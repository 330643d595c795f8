// blp.hpp - Trace-distance backflow measure 𝒩 maximized over pure-state pairs
//
// Search: a coarse (θ, ν) grid for both preparations, the equatorial antipodal
// pair, then a few rounds of local refinement around the best candidate.
// Ties within 1e-12 of the maximum go to the lexicographically smallest
// (θ_a, ν_a, θ_b, ν_b).

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nmspin/channel.hpp"
#include "nmspin/errors.hpp"
#include "nmspin/kernels.hpp"
#include "nmspin/witnesses.hpp"

namespace nmspin {

struct BlpConfig {
    int pair_grid_theta{13};
    int pair_grid_nu{8};
    int refine_iterations{2};
    bool include_canonical_pair{true};

    void validate() const {
        if (pair_grid_theta < 2 || pair_grid_nu < 2) throw ConfigError("BLP pair grid counts must be >= 2");
        if (refine_iterations < 0) throw ConfigError("refine_iterations must be >= 0");
    }
};

struct PreparationPair {
    PureStatePrepd a;
    PureStatePrepd b;

    auto key() const { return std::make_tuple(a.theta, a.nu, b.theta, b.nu); }

    /// Unordered pair stored with the lexicographically smaller preparation first.
    static PreparationPair ordered(PureStatePrepd x, PureStatePrepd y) {
        if (std::make_pair(y.theta, y.nu) < std::make_pair(x.theta, x.nu)) std::swap(x, y);
        return {x, y};
    }
};

inline PreparationPair canonical_pair() {
    return {{std::numbers::pi / 2, 0.0}, {std::numbers::pi / 2, std::numbers::pi}};
}

struct BlpResult {
    double n_value{0.0};
    PreparationPair best_pair{canonical_pair()};
    std::vector<std::pair<double, double>> backflow_intervals;
    double canonical_value{0.0};
    std::size_t pairs_evaluated{0};
};

/// Backflow integral ∫ max(σ, 0) dτ for any pair, evaluated from the pair
/// invariants. σ only turns positive where Γ′ < 0, so panels with Γ′ ≥ 0 at
/// both ends contribute exactly zero and are skipped.
class BackflowObjective {
public:
    explicit BackflowObjective(const DecoherenceTrajectory& traj)
        : tau_(traj.tau), f0_((-2.0 * traj.gamma).exp()), rate_(traj.gamma_rate) {
        for (Eigen::Index i = 0; i + 1 < traj.size(); ++i)
            if (rate_[i] < 0.0 || rate_[i + 1] < 0.0) active_.push_back(i);
    }

    bool trivially_zero() const { return active_.empty(); }

    double operator()(const PairInvariants& inv) const {
        double total = 0.0;
        for (const Eigen::Index i : active_) {
            const double s0 = inv.rate(f0_[i], rate_[i]);
            const double s1 = inv.rate(f0_[i + 1], rate_[i + 1]);
            total += detail::positive_panel(tau_[i + 1] - tau_[i], s0, s1);
        }
        return total;
    }

private:
    Eigen::ArrayXd tau_, f0_, rate_;
    std::vector<Eigen::Index> active_;
};

namespace detail {

struct ScoredPair {
    PreparationPair pair;
    double value;
};

// Maximum, then the lexicographically smallest pair within 1e-12 of it.
inline ScoredPair select_best(const std::vector<ScoredPair>& scored) {
    double top = -1.0;
    for (const auto& s : scored) top = std::max(top, s.value);
    const ScoredPair* best = nullptr;
    for (const auto& s : scored)
        if (s.value >= top - 1e-12 && (!best || s.pair.key() < best->pair.key())) best = &s;
    return *best;
}

inline bool degenerate(const PairInvariants& inv) { return inv.pop_sq == 0.0 && inv.coh_sq == 0.0; }

} // namespace detail

/// Coarse candidate set, sorted lexicographically, identical states dropped.
inline std::vector<PreparationPair> blp_candidate_pairs(const BlpConfig& cfg) {
    cfg.validate();
    std::vector<PureStatePrepd> states;
    for (int i = 0; i < cfg.pair_grid_theta; ++i)
        for (int j = 0; j < cfg.pair_grid_nu; ++j)
            states.push_back({std::numbers::pi * i / (cfg.pair_grid_theta - 1),
                              2.0 * std::numbers::pi * j / cfg.pair_grid_nu});
    std::vector<PreparationPair> pairs;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j)
            if (!detail::degenerate(PairInvariants::of(states[i], states[j])))
                pairs.push_back(PreparationPair::ordered(states[i], states[j]));
    if (cfg.include_canonical_pair) pairs.push_back(canonical_pair());
    std::sort(pairs.begin(), pairs.end(), [](const auto& l, const auto& r) { return l.key() < r.key(); });
    pairs.erase(std::unique(pairs.begin(), pairs.end(),
                            [](const auto& l, const auto& r) { return l.key() == r.key(); }),
                pairs.end());
    return pairs;
}

/// Scores each candidate. Pairs sharing invariants (Δp², |Δc|²) to 1e-12 give
/// the same D(τ), so only the first of each class in lexicographic order is
/// integrated; the tie-break would pick that one anyway.
inline std::vector<detail::ScoredPair> score_pairs(const BackflowObjective& objective,
                                                   const std::vector<PreparationPair>& pairs) {
    std::map<std::pair<long long, long long>, double> seen;
    std::vector<detail::ScoredPair> scored;
    scored.reserve(pairs.size());
    for (const auto& p : pairs) {
        const auto inv = PairInvariants::of(p.a, p.b);
        if (detail::degenerate(inv)) continue;
        const std::pair<long long, long long> key{std::llround(inv.pop_sq * 1e12),
                                                  std::llround(inv.coh_sq * 1e12)};
        auto it = seen.find(key);
        if (it == seen.end()) {
            it = seen.emplace(key, objective.trivially_zero() ? 0.0 : objective(inv)).first;
            scored.push_back({p, it->second});
        }
    }
    return scored;
}

/// max over an explicit candidate list (no refinement).
inline BlpResult blp_over_pairs(const DecoherenceTrajectory& traj, const std::vector<PreparationPair>& pairs) {
    if (pairs.empty()) throw DomainError("no candidate pairs");
    const BackflowObjective objective(traj);
    const auto scored = score_pairs(objective, pairs);
    if (scored.empty()) throw DomainError("all candidate pairs are identical states");
    const auto best = detail::select_best(scored);
    BlpResult r;
    r.n_value = best.value;
    r.best_pair = best.pair;
    r.pairs_evaluated = scored.size();
    return r;
}

namespace detail {

inline double wrap_phase(double nu) {
    const double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(nu, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

inline std::vector<PreparationPair> refinement_pairs(const PreparationPair& center, double d_theta,
                                                     double d_nu) {
    std::vector<PreparationPair> out;
    out.reserve(81);
    const int steps[3] = {-1, 0, 1};
    for (int i : steps)
        for (int j : steps)
            for (int k : steps)
                for (int l : steps) {
                    PureStatePrepd a{std::clamp(center.a.theta + i * d_theta, 0.0, std::numbers::pi),
                                     wrap_phase(center.a.nu + j * d_nu)};
                    PureStatePrepd b{std::clamp(center.b.theta + k * d_theta, 0.0, std::numbers::pi),
                                     wrap_phase(center.b.nu + l * d_nu)};
                    out.push_back(PreparationPair::ordered(a, b));
                }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.key() < r.key(); });
    return out;
}

} // namespace detail

/// 𝒩 = max over searched pairs of ∫_{σ>0} σ dτ.
inline BlpResult blp_measure(const DecoherenceTrajectory& traj, const BlpConfig& cfg = {}) {
    cfg.validate();
    const BackflowObjective objective(traj);
    auto scored = score_pairs(objective, blp_candidate_pairs(cfg));
    std::size_t evaluated = scored.size();
    auto best = detail::select_best(scored);

    if (!objective.trivially_zero()) {
        double d_theta = std::numbers::pi / (cfg.pair_grid_theta - 1);
        double d_nu = 2.0 * std::numbers::pi / cfg.pair_grid_nu;
        for (int it = 0; it < cfg.refine_iterations; ++it) {
            d_theta /= 2.0;
            d_nu /= 2.0;
            auto local = score_pairs(objective, detail::refinement_pairs(best.pair, d_theta, d_nu));
            evaluated += local.size();
            local.push_back(best);
            best = detail::select_best(local);
        }
    }

    BlpResult r;
    r.n_value = best.value;
    r.best_pair = best.pair;
    r.pairs_evaluated = evaluated;
    const auto canon = canonical_pair();
    r.canonical_value = objective.trivially_zero() ? 0.0 : objective(PairInvariants::of(canon.a, canon.b));
    const auto series = sigma_series(best.pair.a, best.pair.b, traj);
    r.backflow_intervals = positive_part_integral(series.tau, series.sigma).intervals;
    return r;
}

} // namespace nmspin
