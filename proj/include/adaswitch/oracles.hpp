#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <span>
#include <vector>

#include "adaswitch/config.hpp"
#include "adaswitch/problem.hpp"
#include "adaswitch/rng.hpp"

namespace adaswitch {

// Solves the window starting at `start` from state s over exactly the periods
// of w, returning one action per period. gamma() is the asserted guarantee
// (1 for exact oracles).
template <class O, class P>
concept OfflineOracle =
    DecisionProblem<P> &&
    requires(O& o, const StateOf<P>& s, Period start, std::span<const RequestOf<P>> w) {
        { o.solve(s, start, w) } -> std::same_as<std::vector<ActionOf<P>>>;
        { o.gamma() } -> std::convertible_to<double>;
    };

// Oracles that can maintain Opt of a growing window [start, t] one period at a time.
template <class O, class P>
concept IncrementalOracle =
    OfflineOracle<O, P> && requires(O& o, const StateOf<P>& s, Period start, const RequestOf<P>& r) {
        { o.monitor(s, start).push(r) } -> std::convertible_to<double>;
    };

// start(m, s, seed) returns the policy pi_m for a phase whose first period is
// m + 1, with s the state after period m.
template <class F, class P>
concept OnlineOracle =
    DecisionProblem<P> && requires(const F& f, const StateOf<P>& s, Period m, std::uint64_t seed,
                                   const RequestOf<P>& r) {
        { f.start(m, s, seed).act(m + 1, r, s) } -> std::same_as<ActionOf<P>>;
        { f.deterministic() } -> std::convertible_to<bool>;
    };

template <DecisionProblem P, class O>
    requires OfflineOracle<O, P>
double solve_value(const P& p, O& oracle, const StateOf<P>& s, Period start,
                   std::span<const RequestOf<P>> w, std::vector<ActionOf<P>>* actions = nullptr) {
    std::vector<ActionOf<P>> a = oracle.solve(s, start, w);
    if (a.size() != w.size()) throw OracleFailure(start, "oracle returned wrong action count");
    StateOf<P> x = s;
    const double v = evaluate_from(p, x, start, w, std::span<const ActionOf<P>>(a));
    if (actions) *actions = std::move(a);
    return v;
}

// Opt of [start, t] as requests are appended; recomputes from scratch unless
// the oracle supplies its own incremental monitor.
template <DecisionProblem P, class O>
    requires OfflineOracle<O, P>
class OptMonitor {
public:
    OptMonitor(const P& p, O& oracle, const StateOf<P>& s, Period start)
        : p_(&p), oracle_(&oracle), s0_(s), start_(start) {
        if constexpr (IncrementalOracle<O, P>) inc_.emplace_back(oracle.monitor(s, start));
    }

    double push(const RequestOf<P>& r) {
        if constexpr (IncrementalOracle<O, P>) {
            return inc_.front().push(r);
        } else {
            window_.push_back(r);
            return solve_value(*p_, *oracle_, s0_, start_, std::span<const RequestOf<P>>(window_));
        }
    }

private:
    struct NoMonitor {};
    template <class X>
    static auto monitor_type() {
        if constexpr (IncrementalOracle<X, P>)
            return std::type_identity<decltype(std::declval<X&>().monitor(
                std::declval<const StateOf<P>&>(), Period{}))>{};
        else
            return std::type_identity<NoMonitor>{};
    }
    using Inc = typename decltype(monitor_type<O>())::type;
    const P* p_;
    O* oracle_;
    StateOf<P> s0_;
    Period start_;
    std::vector<RequestOf<P>> window_;
    std::vector<Inc> inc_;
};

// Monte Carlo estimate of the online policy's value over [tau, t], extended one
// period at a time. Rollout r of the phase starting at tau draws its randomness
// from derive_seed(root, monte_carlo, tau, r), so extending the window is
// equivalent to re-running every rollout from tau.
template <DecisionProblem P, class F>
    requires OnlineOracle<F, P>
class MonteCarloMonitor {
public:
    MonteCarloMonitor(const P& p, const F& online, const StateOf<P>& s, Period tau,
                      std::uint64_t root)
        : p_(&p), online_(&online), s0_(s), tau_(tau), root_(root) {}

    // min(H t^5, cap), or 1 for a deterministic policy. Sets *capped when the
    // theoretical count was cut.
    static std::uint64_t sample_count(Period t, std::uint64_t H, std::uint64_t cap, bool det,
                                      bool* capped = nullptr) {
        if (capped) *capped = false;
        if (det) return 1;
        const double want = static_cast<double>(H) * std::pow(static_cast<double>(t), 5.0);
        if (want > static_cast<double>(cap)) {
            if (capped) *capped = true;
            return cap;
        }
        return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(want));
    }

    // Appends the request of the next period and returns the mean over the
    // first `count` rollouts.
    double push(const RequestOf<P>& r, std::uint64_t count) {
        window_.push_back(r);
        for (auto& ro : rollouts_) step(ro, window_.size() - 1);
        while (rollouts_.size() < count) {
            Rollout ro{online_->start(tau_ - 1, s0_,
                                      derive_seed(root_, Purpose::monte_carlo,
                                                  static_cast<std::uint64_t>(tau_), rollouts_.size())),
                       s0_, 0.0};
            for (std::size_t i = 0; i < window_.size(); ++i) step(ro, i);
            rollouts_.push_back(std::move(ro));
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < count; ++i) sum += rollouts_[i].value;
        return sum / static_cast<double>(count);
    }

private:
    using Policy = decltype(std::declval<const F&>().start(Period{}, std::declval<const StateOf<P>&>(),
                                                           std::uint64_t{}));
    struct Rollout {
        Policy policy;
        StateOf<P> state;
        double value;
    };

    void step(Rollout& ro, std::size_t i) {
        const Period t = tau_ + static_cast<Period>(i);
        const ActionOf<P> a = ro.policy.act(t, window_[i], ro.state);
        ro.value += p_->apply(ro.state, t, window_[i], a);
    }

    const P* p_;
    const F* online_;
    StateOf<P> s0_;
    Period tau_;
    std::uint64_t root_;
    std::vector<RequestOf<P>> window_;
    std::vector<Rollout> rollouts_;
};

// One-shot estimate of Val(P^I(tau), e_{tau:t}, pi_{tau-1}) with
// min(H t^5, cap) rollouts (one when the policy is deterministic).
template <DecisionProblem P, class F>
    requires OnlineOracle<F, P>
double monte_carlo_estimate(const P& p, const Trajectory<P>& prefix,
                            std::span<const RequestOf<P>> window, const F& online, Period t,
                            const AdaSwitchConfig& cfg) {
    if (window.empty()) return 0.0;
    const std::uint64_t n = MonteCarloMonitor<P, F>::sample_count(
        t, cfg.monte_carlo_base_H, cfg.monte_carlo_cap, online.deterministic());
    MonteCarloMonitor<P, F> mc(p, online, replay(p, prefix), prefix.length() + 1, cfg.seed);
    double v = 0.0;
    for (const auto& r : window) v = mc.push(r, n);
    return v;
}

}  // namespace adaswitch
