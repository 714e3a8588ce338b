#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adaswitch/bounds.hpp"
#include "adaswitch/config.hpp"
#include "adaswitch/oracles.hpp"
#include "adaswitch/problem.hpp"
#include "adaswitch/report.hpp"

namespace adaswitch {

template <DecisionProblem P>
struct RunResult {
    CompetitiveReport report;
    Trajectory<P> trajectory;  // includes any prefix the run was started from
};

struct RunOptions {
    std::string instance_id;
    std::string variant = "adaswitch";
    bool compute_opt = true;  // Opt via the offline oracle over the realized window
};

namespace detail {

template <DecisionProblem P>
struct Plan {
    Period first = 0;
    std::vector<RequestOf<P>> assumed;
    std::vector<ActionOf<P>> actions;

    Period last() const { return first + static_cast<Period>(actions.size()) - 1; }
    bool covers(Period t) const { return !actions.empty() && t >= first && t <= last(); }
    void clear() { actions.clear(), assumed.clear(); }
};

}  // namespace detail

// Fills ratio and the generic theorem bounds once Opt is known.
inline void finalize_report(CompetitiveReport& r, double opt, double L) {
    r.opt = opt;
    r.ratio.reset();
    r.bound_T1.reset();
    r.bound_T2.reset();
    if (opt <= 0) {
        r.flag("ratio_undefined");
        return;
    }
    r.ratio = r.val / opt;
    BoundInputs in{r.eta, r.epsilon, r.gamma, r.alpha, r.b, r.c, L, opt, r.phi_star};
    const bool cost = r.objective == Objective::minimize;
    try {
        r.bound_T1 = theoretical_bound(cost ? Theorem::T3 : Theorem::T1, in);
    } catch (const ConfigError&) {
    }
    try {
        r.bound_T2 = theoretical_bound(cost ? Theorem::T4 : Theorem::T2, in);
    } catch (const ConfigError&) {
    }
}

// The AdaSwitch state machine in all four variants, selected by
// cfg.objective and cfg.oracle_kind. When `prefix` is given the run operates on
// the partial problem it induces and starts at period prefix->length() + 1.
template <DecisionProblem P, class Off, class On>
    requires OfflineOracle<Off, P> && OnlineOracle<On, P>
RunResult<P> run_adaswitch(const P& p, const RequestSequence<RequestOf<P>>& reality,
                           const RequestSequence<RequestOf<P>>& prediction, Off& offline,
                           const On& online, const AdaSwitchConfig& cfg,
                           const std::type_identity_t<Trajectory<P>>* prefix = nullptr, const RunOptions& opts = {}) {
    using R = RequestOf<P>;
    using A = ActionOf<P>;
    validate(cfg);
    const ProblemTraits tr = p.traits();
    if (tr.objective != cfg.objective)
        throw ConfigError("configuration objective does not match the problem");
    const double L = tr.reward_bound;
    const Thresholds th = thresholds(cfg, L);
    const double dcap = cfg.c / cfg.b;
    const bool gamma_mode = cfg.oracle_kind == OracleKind::gamma;
    const R null = p.null_request();
    const std::vector<R>& real = reality.items;
    const std::vector<R>& pred = prediction.items;

    RunResult<P> out;
    CompetitiveReport& rep = out.report;
    rep.instance_id = opts.instance_id;
    rep.seed = cfg.seed;
    rep.variant = opts.variant;
    rep.eta = cfg.eta;
    rep.epsilon = cfg.epsilon;
    rep.b = cfg.b;
    rep.c = cfg.c;
    rep.alpha = cfg.alpha;
    rep.gamma = gamma_mode ? cfg.gamma : 1.0;
    rep.objective = cfg.objective;

    StateOf<P> s = prefix ? replay(p, *prefix) : p.initial_state();
    if (prefix) out.trajectory = *prefix;
    const Period start = prefix ? prefix->length() + 1 : 1;
    const StateOf<P> s_start = s;
    const std::vector<R> real_tail =
        start - 1 < reality.stored() ? std::vector<R>(real.begin() + (start - 1), real.end())
                                     : std::vector<R>{};
    const Period H = std::max<Period>(p.last_active_period(s, start, std::span<const R>(real_tail)),
                                      start - 1);
    rep.start = start;
    rep.horizon = H;

    auto policy_seed = [&](Period m) {
        return derive_seed(cfg.seed, Purpose::online_policy, static_cast<std::uint64_t>(m));
    };

    Mode mode = Mode::conservative;
    auto policy = online.start(start - 1, s, policy_seed(start - 1));
    std::optional<OptMonitor<P, Off>> opt_mon;
    std::optional<MonteCarloMonitor<P, On>> mc_mon;
    auto begin_conservative = [&](Period tau) {
        opt_mon.reset();
        mc_mon.reset();
        if (!gamma_mode || th.require_u_at_least_gamma) opt_mon.emplace(p, offline, s, tau);
        if (gamma_mode) mc_mon.emplace(p, online, s, tau, cfg.seed);
    };
    begin_conservative(start);

    double phi = 0.0;
    Period tau_p = 0;
    bool tau_p_infinite = false;
    detail::Plan<P> plan;
    std::optional<OptMonitor<P, Off>> phase_opt;  // regret-based switching
    double phase_val = 0.0;

    auto horizon_estimate = [&](Period t) {
        return std::max(t, p.estimate_horizon(t, std::span<const R>(pred)));
    };

    for (Period t = start; t <= H; ++t) {
        const R& e = request_at(real, t, null);
        const R& es = request_at(pred, t, null);
        A a;
        if (mode == Mode::conservative) {
            a = policy.act(t, e, s);
            p.check_action(t, e, a);
            const double reward = p.apply(s, t, e, a);
            out.trajectory.push(e, a, reward);
            bool go = false;
            if (!gamma_mode) {
                go = opt_mon->push(e) >= th.conservative_exit;
            } else {
                bool capped = false;
                const auto n = MonteCarloMonitor<P, On>::sample_count(
                    t, cfg.monte_carlo_base_H, cfg.monte_carlo_cap, online.deterministic(), &capped);
                if (capped) rep.monte_carlo_deviation = true;
                const double est = mc_mon->push(e, n);
                go = est >= th.conservative_exit;
                if (th.require_u_at_least_gamma) {
                    const double u = opt_mon->push(e);
                    go = go && u >= cfg.gamma;
                }
            }
            if (go) {
                mode = Mode::predictive;
                phi = 0.0;
                tau_p = t + 1;
                tau_p_infinite = false;
                plan.clear();
                rep.epochs.push_back({t + 1, Mode::predictive});
                ++rep.switches_to_predictive;
                if (cfg.switching_mode == SwitchingMode::regret_based) {
                    phase_opt.emplace(p, offline, s, t + 1);
                    phase_val = 0.0;
                }
            }
            continue;
        }

        // Predictive state.
        if (!gamma_mode) {
            const Period hest = horizon_estimate(t);
            const bool reuse = plan.covers(t) && hest <= plan.last() &&
                               plan.assumed[t - plan.first] == e;
            if (!reuse) {
                plan.first = t;
                plan.assumed = window_of(pred, t, hest, null);
                plan.assumed.front() = e;
                plan.actions = offline.solve(s, t, std::span<const R>(plan.assumed));
                if (plan.actions.size() != plan.assumed.size())
                    throw OracleFailure(t, "oracle returned wrong action count");
            }
            a = plan.actions[t - plan.first];
        } else {
            if (!tau_p_infinite && t == tau_p) {
                const Period hest = horizon_estimate(t);
                std::vector<R> window;
                std::vector<A> acts;
                double batch_val = 0.0;
                while (tau_p <= hest && batch_val < th.batch_target) {
                    window = window_of(pred, t, tau_p, null);
                    window.front() = e;
                    batch_val = solve_value(p, offline, s, t, std::span<const R>(window), &acts);
                    ++tau_p;
                }
                plan.first = t;
                plan.assumed = window;
                plan.actions = acts;
                if (batch_val < th.batch_target) {
                    tau_p_infinite = true;
                    rep.fallback_fired = true;
                    rep.flag("batch_fallback");
                }
            }
            if (plan.covers(t)) {
                a = p.adapt_action(t, e, plan.actions[t - plan.first]);
            } else {
                a = p.candidate_actions(s, t, e).front();
            }
        }
        p.check_action(t, e, a);
        const double reward = p.apply(s, t, e, a);
        out.trajectory.push(e, a, reward);
        phi += std::min(p.distance(e, es), dcap);

        bool back = false;
        if (cfg.switching_mode == SwitchingMode::regret_based) {
            phase_val += reward;
            const double o = phase_opt->push(e);
            back = regret_based_switch_check(cfg.eta, cfg.epsilon, cfg.c, L, o, phase_val);
        } else {
            back = phi >= th.predictive_exit;
        }
        if (back) {
            mode = Mode::conservative;
            plan.clear();
            policy = online.start(t, s, policy_seed(t));
            begin_conservative(t + 1);
            rep.epochs.push_back({t + 1, Mode::conservative});
            ++rep.switches_to_conservative;
        }
    }

    rep.val = out.trajectory.cumulative - (prefix ? prefix->cumulative : 0.0);
    rep.phi_star = sequence_distance(p, reality, prediction, dcap).capped_total;
    if (gamma_mode && !online.deterministic()) rep.flag("monte_carlo");
    if (rep.monte_carlo_deviation) rep.flag("monte_carlo_capped");
    if (opts.compute_opt) {
        const double opt = solve_value(p, offline, s_start, start, std::span<const R>(
            window_of(real, start, H, null)));
        if (offline.gamma() != 1.0) rep.flag("opt_from_gamma_oracle");
        finalize_report(rep, opt, L);
    }
    return out;
}

template <DecisionProblem P, class Off, class On>
    requires OfflineOracle<Off, P> && OnlineOracle<On, P>
RunResult<P> run_adaswitch_exact(const P& p, const RequestSequence<RequestOf<P>>& reality,
                                 const RequestSequence<RequestOf<P>>& prediction, Off& offline,
                                 const On& online, const AdaSwitchConfig& cfg,
                                 const std::type_identity_t<Trajectory<P>>* prefix = nullptr, const RunOptions& opts = {}) {
    if (cfg.oracle_kind != OracleKind::exact || cfg.objective != Objective::maximize)
        throw ConfigError("run_adaswitch_exact requires an exact oracle and the reward objective");
    if (offline.gamma() != 1.0) throw ConfigError("run_adaswitch_exact requires a 1-offline oracle");
    return run_adaswitch(p, reality, prediction, offline, online, cfg, prefix, opts);
}

template <DecisionProblem P, class Off, class On>
    requires OfflineOracle<Off, P> && OnlineOracle<On, P>
RunResult<P> run_adaswitch_gamma(const P& p, const RequestSequence<RequestOf<P>>& reality,
                                 const RequestSequence<RequestOf<P>>& prediction, Off& offline,
                                 const On& online, const AdaSwitchConfig& cfg,
                                 const std::type_identity_t<Trajectory<P>>* prefix = nullptr, const RunOptions& opts = {}) {
    if (cfg.oracle_kind != OracleKind::gamma || cfg.objective != Objective::maximize)
        throw ConfigError("run_adaswitch_gamma requires a gamma oracle and the reward objective");
    return run_adaswitch(p, reality, prediction, offline, online, cfg, prefix, opts);
}

template <DecisionProblem P, class Off, class On>
    requires OfflineOracle<Off, P> && OnlineOracle<On, P>
RunResult<P> run_adaswitch_cost(const P& p, const RequestSequence<RequestOf<P>>& reality,
                                const RequestSequence<RequestOf<P>>& prediction, Off& offline,
                                const On& online, const AdaSwitchConfig& cfg,
                                const std::type_identity_t<Trajectory<P>>* prefix = nullptr, const RunOptions& opts = {}) {
    if (cfg.objective != Objective::minimize)
        throw ConfigError("run_adaswitch_cost requires the cost objective");
    return run_adaswitch(p, reality, prediction, offline, online, cfg, prefix, opts);
}

// Runs the online oracle's policy pi_{start-1} alone; used for baselines.
template <DecisionProblem P, class Off, class On>
    requires OfflineOracle<Off, P> && OnlineOracle<On, P>
RunResult<P> run_online_only(const P& p, const RequestSequence<RequestOf<P>>& reality,
                             const RequestSequence<RequestOf<P>>& prediction, Off& offline,
                             const On& online, std::uint64_t seed, double dcap,
                             const std::type_identity_t<Trajectory<P>>* prefix = nullptr, const RunOptions& opts = {}) {
    using R = RequestOf<P>;
    const R null = p.null_request();
    RunResult<P> out;
    CompetitiveReport& rep = out.report;
    rep.instance_id = opts.instance_id;
    rep.seed = seed;
    rep.variant = opts.variant;
    rep.objective = ProblemTraits(p.traits()).objective;
    StateOf<P> s = prefix ? replay(p, *prefix) : p.initial_state();
    if (prefix) out.trajectory = *prefix;
    const Period start = prefix ? prefix->length() + 1 : 1;
    const StateOf<P> s_start = s;
    const std::vector<R> tail = window_of(reality.items, start, reality.stored(), null);
    const Period H = std::max<Period>(p.last_active_period(s, start, std::span<const R>(tail)), start - 1);
    rep.start = start;
    rep.horizon = H;
    auto policy = online.start(start - 1, s,
                               derive_seed(seed, Purpose::online_policy, static_cast<std::uint64_t>(start - 1)));
    for (Period t = start; t <= H; ++t) {
        const R& e = request_at(reality.items, t, null);
        const ActionOf<P> a = policy.act(t, e, s);
        p.check_action(t, e, a);
        out.trajectory.push(e, a, p.apply(s, t, e, a));
    }
    rep.val = out.trajectory.cumulative - (prefix ? prefix->cumulative : 0.0);
    rep.phi_star = sequence_distance(p, reality, prediction, dcap).capped_total;
    if (opts.compute_opt) {
        rep.opt = solve_value(p, offline, s_start, start,
                              std::span<const R>(window_of(reality.items, start, H, null)));
        if (rep.opt > 0)
            rep.ratio = rep.val / rep.opt;
        else
            rep.flag("ratio_undefined");
    }
    return out;
}

}  // namespace adaswitch
