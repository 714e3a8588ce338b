#pragma once

#include <algorithm>
#include <concepts>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "adaswitch/core.hpp"

namespace adaswitch {

// A sequential decision problem with deterministic rewards. The reward of
// period t depends on the whole history only through State, which apply()
// advances one period at a time; conditioning on a prefix is therefore just
// starting from the state the prefix leaves behind.
template <class P>
concept DecisionProblem =
    std::copyable<typename P::State> && std::totally_ordered<typename P::State> &&
    std::copyable<typename P::Request> && std::equality_comparable<typename P::Request> &&
    std::copyable<typename P::Action> &&
    requires(const P& p, typename P::State& s, const typename P::State& cs,
             const typename P::Request& r, const typename P::Action& a, Period t,
             std::span<const typename P::Request> w) {
        { p.traits() } -> std::convertible_to<ProblemTraits>;
        { p.initial_state() } -> std::same_as<typename P::State>;
        { p.null_request() } -> std::same_as<typename P::Request>;
        { p.apply(s, t, r, a) } -> std::same_as<double>;
        { p.candidate_actions(cs, t, r) } -> std::same_as<std::vector<typename P::Action>>;
        { p.check_action(t, r, a) } -> std::same_as<void>;
        // Maps an action planned for a different request onto a valid action
        // for r (identity whenever a is already valid).
        { p.adapt_action(t, r, a) } -> std::same_as<typename P::Action>;
        { p.distance(r, r) } -> std::same_as<double>;
        // Last period that can carry a nonzero reward when the window w starts
        // at period t from state cs (t - 1 if none).
        { p.last_active_period(cs, t, w) } -> std::same_as<Period>;
        // Effective-length estimate after observing i periods, given the full
        // prediction w indexed from period 1.
        { p.estimate_horizon(t, w) } -> std::same_as<Period>;
    };

template <DecisionProblem P>
using RequestOf = typename P::Request;
template <DecisionProblem P>
using ActionOf = typename P::Action;
template <DecisionProblem P>
using StateOf = typename P::State;

// Finite storage of an infinite request sequence; every period past the end of
// items holds the null request.
template <class R>
struct RequestSequence {
    std::vector<R> items;
    std::optional<Period> declared_effective_length;

    Period stored() const { return static_cast<Period>(items.size()); }
};

template <class R>
const R& request_at(const std::vector<R>& items, Period t, const R& null) {
    return t >= 1 && t <= static_cast<Period>(items.size()) ? items[t - 1] : null;
}

template <DecisionProblem P>
Period effective_length(const P& p, const RequestSequence<RequestOf<P>>& seq) {
    if (seq.declared_effective_length) return *seq.declared_effective_length;
    return p.last_active_period(p.initial_state(), 1, std::span(seq.items));
}

// Requests of periods [from, to], padded with nulls.
template <class R>
std::vector<R> window_of(const std::vector<R>& items, Period from, Period to, const R& null) {
    std::vector<R> out;
    if (to >= from) out.reserve(static_cast<std::size_t>(to - from + 1));
    for (Period t = from; t <= to; ++t) out.push_back(request_at(items, t, null));
    return out;
}

template <DecisionProblem P>
struct Trajectory {
    std::vector<RequestOf<P>> requests;
    std::vector<ActionOf<P>> actions;
    std::vector<double> rewards;
    double cumulative = 0.0;

    Period length() const { return static_cast<Period>(requests.size()); }

    void push(const RequestOf<P>& r, const ActionOf<P>& a, double reward) {
        requests.push_back(r);
        actions.push_back(a);
        rewards.push_back(reward);
        cumulative += reward;
    }
};

// Replays a trajectory from the initial state and returns the resulting state.
template <DecisionProblem P>
StateOf<P> replay(const P& p, const Trajectory<P>& tr) {
    StateOf<P> s = p.initial_state();
    for (Period i = 0; i < tr.length(); ++i) {
        p.check_action(i + 1, tr.requests[i], tr.actions[i]);
        p.apply(s, i + 1, tr.requests[i], tr.actions[i]);
    }
    return s;
}

template <DecisionProblem P>
Trajectory<P> record(const P& p, std::span<const RequestOf<P>> requests,
                     std::span<const ActionOf<P>> actions) {
    Trajectory<P> tr;
    StateOf<P> s = p.initial_state();
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const Period t = static_cast<Period>(i) + 1;
        p.check_action(t, requests[i], actions[i]);
        tr.push(requests[i], actions[i], p.apply(s, t, requests[i], actions[i]));
    }
    return tr;
}

// Sum of rewards over periods start .. start + actions.size() - 1, starting
// from state s (which is advanced).
template <DecisionProblem P>
double evaluate_from(const P& p, StateOf<P>& s, Period start,
                     std::span<const RequestOf<P>> requests,
                     std::span<const ActionOf<P>> actions) {
    if (actions.size() < requests.size())
        throw std::invalid_argument("fewer actions than request periods");
    const RequestOf<P> null = p.null_request();
    double total = 0.0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const Period t = start + static_cast<Period>(i);
        const RequestOf<P>& r = i < requests.size() ? requests[i] : null;
        p.check_action(t, r, actions[i]);
        total += p.apply(s, t, r, actions[i]);
    }
    return total;
}

template <DecisionProblem P>
double evaluate_trajectory(const P& p, const RequestSequence<RequestOf<P>>& requests,
                           std::span<const ActionOf<P>> actions,
                           const std::type_identity_t<Trajectory<P>>* from_prefix = nullptr) {
    StateOf<P> s = from_prefix ? replay(p, *from_prefix) : p.initial_state();
    const Period start = from_prefix ? from_prefix->length() + 1 : 1;
    return evaluate_from(p, s, start, std::span(requests.items), actions);
}

struct DistanceProfile {
    double raw_total = 0.0;
    double capped_total = 0.0;
};

template <DecisionProblem P>
DistanceProfile sequence_distance(const P& p, const RequestSequence<RequestOf<P>>& a,
                                  const RequestSequence<RequestOf<P>>& b,
                                  std::optional<double> cap = std::nullopt) {
    const Period n = std::max(effective_length(p, a), effective_length(p, b));
    const RequestOf<P> null = p.null_request();
    DistanceProfile out;
    for (Period t = 1; t <= n; ++t) {
        const double d = p.distance(request_at(a.items, t, null), request_at(b.items, t, null));
        out.raw_total += d;
        out.capped_total += cap ? std::min(d, *cap) : d;
    }
    return out;
}

}  // namespace adaswitch
