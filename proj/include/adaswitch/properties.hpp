#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "adaswitch/brute_force.hpp"
#include "adaswitch/rng.hpp"

namespace adaswitch {

template <DecisionProblem P>
struct InfluenceSample {
    Trajectory<P> prefix_a;
    Trajectory<P> prefix_b;  // same length as prefix_a
    std::vector<RequestOf<P>> window;
};

template <DecisionProblem P>
struct LipschitzSample {
    Trajectory<P> prefix;
    RequestOf<P> e;
    RequestOf<P> e_prime;
    std::vector<RequestOf<P>> suffix;
    // Strong mode only: one action per period of e ∘ suffix, valid under both.
    std::vector<ActionOf<P>> actions;
};

enum class LipschitzMode { opt, strong };

struct LipschitzResult {
    double max_normalized_gap = 0.0;  // max |gap| / L
    double max_ratio = 0.0;           // max |gap| / (L min(u d, v)); 0 when gap is 0
    int violations = 0;               // gap > L min(u d, v)
};

// Maximum of |Opt(P^I, w) - Opt(P^I', w)| / L over sampled prefix pairs.
template <DecisionProblem P>
double check_bounded_influence(const P& p,
                               const std::function<InfluenceSample<P>(Rng&)>& sampler,
                               int trials, Rng& rng, BruteForceOptions opt = {}) {
    const double L = ProblemTraits(p.traits()).reward_bound;
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        const InfluenceSample<P> s = sampler(rng);
        const Period start = s.prefix_a.length() + 1;
        const std::span<const RequestOf<P>> w(s.window);
        const double a = brute_force_opt_from(p, replay(p, s.prefix_a), start, w, opt).value;
        const double b = brute_force_opt_from(p, replay(p, s.prefix_b), start, w, opt).value;
        worst = std::max(worst, std::abs(a - b) / L);
    }
    return worst;
}

template <DecisionProblem P>
LipschitzResult check_lipschitz(const P& p,
                                const std::function<LipschitzSample<P>(Rng&)>& sampler,
                                int trials, Rng& rng, LipschitzMode mode,
                                BruteForceOptions opt = {}) {
    const ProblemTraits tr = p.traits();
    LipschitzResult out;
    for (int i = 0; i < trials; ++i) {
        const LipschitzSample<P> s = sampler(rng);
        const Period start = s.prefix.length() + 1;
        std::vector<RequestOf<P>> wa{s.e}, wb{s.e_prime};
        wa.insert(wa.end(), s.suffix.begin(), s.suffix.end());
        wb.insert(wb.end(), s.suffix.begin(), s.suffix.end());
        const StateOf<P> s0 = replay(p, s.prefix);
        double a, b;
        if (mode == LipschitzMode::opt) {
            a = brute_force_opt_from(p, s0, start, std::span<const RequestOf<P>>(wa), opt).value;
            b = brute_force_opt_from(p, s0, start, std::span<const RequestOf<P>>(wb), opt).value;
        } else {
            StateOf<P> x = s0, y = s0;
            a = evaluate_from(p, x, start, std::span<const RequestOf<P>>(wa),
                              std::span<const ActionOf<P>>(s.actions));
            b = evaluate_from(p, y, start, std::span<const RequestOf<P>>(wb),
                              std::span<const ActionOf<P>>(s.actions));
        }
        const double gap = std::abs(a - b);
        const double bound =
            tr.reward_bound * std::min(tr.lipschitz_u * p.distance(s.e, s.e_prime), tr.lipschitz_v);
        out.max_normalized_gap = std::max(out.max_normalized_gap, gap / tr.reward_bound);
        if (gap > 0) out.max_ratio = std::max(out.max_ratio, bound > 0 ? gap / bound : kInf);
        if (gap > bound + 1e-9) ++out.violations;
    }
    return out;
}

}  // namespace adaswitch
