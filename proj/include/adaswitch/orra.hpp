#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "adaswitch/adaswitch.hpp"
#include "adaswitch/bounds.hpp"
#include "adaswitch/problem.hpp"
#include "adaswitch/rng.hpp"

namespace adaswitch::orra {

using Request = std::uint32_t;  // bit i set: resource i + 1 is eligible
using Action = int;             // 0 rejects, i in 1..n uses resource i
using Availability = std::vector<int>;  // W(i): first period resource i is free

inline constexpr int kMaxResources = 31;

struct OrraParams {
    int n = 1;
    int d = 1;
};

struct StepResult {
    double reward;
    bool served;
};

// Reward 1 iff a > 0, e(a) = 1 and W(a) <= t; then W(a) = t + d.
StepResult orra_step(Availability& w, int d, Period t, Request e, Action a);

class OrraProblem {
public:
    using Request = orra::Request;
    using Action = orra::Action;
    using State = Availability;

    explicit OrraProblem(OrraParams params);

    int n() const { return params_.n; }
    int d() const { return params_.d; }
    ProblemTraits traits() const;
    State initial_state() const { return State(static_cast<std::size_t>(params_.n), 1); }
    Request null_request() const { return 0; }
    double apply(State& s, Period t, const Request& e, const Action& a) const {
        return orra_step(s, params_.d, t, e, a).reward;
    }
    // Eligible free resources by index, then rejection.
    std::vector<Action> candidate_actions(const State& s, Period t, const Request& e) const;
    void check_action(Period t, const Request& e, const Action& a) const;
    Action adapt_action(Period, const Request&, const Action& a) const { return a; }
    double distance(const Request& a, const Request& b) const { return a == b ? 0.0 : 1.0; }
    Period last_active_period(const State& s, Period start, std::span<const Request> w) const;
    Period estimate_horizon(Period i, std::span<const Request> prediction) const;

private:
    OrraParams params_;
};

struct DpResult {
    double value = 0.0;
    std::vector<Action> actions;
};

struct DpBudget {
    std::uint64_t max_states = 1u << 20;        // d^n
    std::uint64_t max_cells = 50'000'000;       // d^n times window length
};

// Exact optimum by backward induction over per-resource busy counters
// (mixed radix d). Among optimal action lists, each period prefers the lowest
// free eligible resource, then rejection.
DpResult orra_offline_dp(const OrraParams& params, const Availability& w, Period start,
                         std::span<const Request> window, const DpBudget& budget = {});

namespace detail {
struct CounterSpace;
}

// Opt of [start, t] as requests arrive, by forward induction.
class DpMonitor {
public:
    DpMonitor(const OrraParams& params, const Availability& w, Period start, const DpBudget& budget);
    double push(Request e);

private:
    OrraParams params_;
    std::shared_ptr<const detail::CounterSpace> cs_;
    std::vector<int> best_;  // -1 marks unreachable counters
    std::vector<int> next_;
};

class DpOracle {
public:
    explicit DpOracle(OrraParams params, DpBudget budget = {}) : params_(params), budget_(budget) {}
    std::vector<Action> solve(const Availability& w, Period start, std::span<const Request> window) const {
        return orra_offline_dp(params_, w, start, window, budget_).actions;
    }
    double gamma() const { return 1.0; }
    DpMonitor monitor(const Availability& w, Period start) const { return {params_, w, start, budget_}; }

private:
    OrraParams params_;
    DpBudget budget_;
};

// Periodic re-ranking after a reset. Started after a prefix of length m > 0 it
// rejects through period m + d - 1; from m + d (period 1 when m = 0) time is cut
// into windows of length d, each with a fresh uniformly random ranking, and a
// request goes to the highest-ranked free eligible resource.
class PrrPolicy {
public:
    PrrPolicy(OrraParams params, Period m, std::uint64_t seed);
    Action act(Period t, const Request& e, const Availability& actual);

private:
    OrraParams params_;
    Period base_;
    long window_ = -1;
    std::vector<int> ranking_;
    Availability own_;
    Rng rng_;
};

class PrrOracle {
public:
    explicit PrrOracle(OrraParams params, double eta = 0.589) : params_(params), eta_(eta) {}
    PrrPolicy start(Period m, const Availability&, std::uint64_t seed) const { return {params_, m, seed}; }
    bool deterministic() const { return params_.n == 1; }
    double eta() const { return eta_; }

private:
    OrraParams params_;
    double eta_;
};

using Sequence = RequestSequence<Request>;

struct OrraSettings {
    double epsilon = 0.1;
    double alpha = 3.0;
    double eta = 0.589;
    std::uint64_t seed = 0;
    std::uint64_t monte_carlo_base_H = 1;
    std::uint64_t monte_carlo_cap = 10'000;
};

// Gamma variant with c = d, b = 2, PRR* online and any offline oracle whose
// gamma() is asserted by the caller.
template <class Off>
    requires OfflineOracle<Off, OrraProblem>
RunResult<OrraProblem> adaswitch_orra_with(const OrraParams& params, const Sequence& requests,
                                           const Sequence& prediction, Off& offline,
                                           const OrraSettings& st) {
    const OrraProblem p(params);
    const PrrOracle on(params, st.eta);
    AdaSwitchConfig cfg;
    cfg.eta = st.eta;
    cfg.epsilon = st.epsilon;
    cfg.alpha = st.alpha;
    cfg.gamma = offline.gamma();
    cfg.c = params.d;
    cfg.b = 2;
    cfg.seed = st.seed;
    cfg.monte_carlo_base_H = st.monte_carlo_base_H;
    cfg.monte_carlo_cap = st.monte_carlo_cap;
    cfg.oracle_kind = OracleKind::gamma;
    RunOptions opts;
    opts.variant = "adaswitch-orra";
    auto res = run_adaswitch_gamma(p, requests, prediction, offline, on, cfg, nullptr, opts);
    if (res.report.opt > 0) {
        BoundInputs in;
        in.eta = cfg.eta;
        in.epsilon = cfg.epsilon;
        in.gamma = cfg.gamma;
        in.alpha = cfg.alpha;
        in.opt = res.report.opt;
        in.phi_star = res.report.phi_star;
        in.d = params.d;
        res.report.bound_app = theoretical_bound(Theorem::Orra, in);
        res.report.bound_app_name = "ORRA";
    }
    return res;
}

RunResult<OrraProblem> adaswitch_orra(const OrraParams& params, const Sequence& requests,
                                      const Sequence& prediction, const OrraSettings& st = {});

RunResult<OrraProblem> prr_only(const OrraParams& params, const Sequence& requests,
                                const Sequence& prediction, std::uint64_t seed = 0);

struct Instance {
    OrraParams params;
    Sequence requests;
};
// "n d T", then T lines of n characters; character i is resource i + 1.
Instance read_instance(std::istream& in);
void write_instance(std::ostream& out, const Instance& inst);

}  // namespace adaswitch::orra
