#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "adaswitch/problem.hpp"

namespace adaswitch {

enum class SearchMode {
    memoized,   // exhaustive search with states merged per period
    enumerate,  // plain enumeration of every action sequence
};

struct BruteForceOptions {
    std::uint64_t cap = 10'000'000;
    SearchMode mode = SearchMode::memoized;
};

template <DecisionProblem P>
struct OptResult {
    double value = 0.0;
    std::vector<ActionOf<P>> actions;
};

namespace detail {

template <DecisionProblem P>
class Search {
public:
    using State = StateOf<P>;
    using Action = ActionOf<P>;

    Search(const P& p, Period start, std::vector<RequestOf<P>> window, BruteForceOptions opt)
        : p_(p), start_(start), window_(std::move(window)), opt_(opt),
          obj_(ProblemTraits(p.traits()).objective) {}

    double space(const State& s) const {
        double size = 1.0;
        for (std::size_t i = 0; i < window_.size(); ++i)
            size *= static_cast<double>(
                p_.candidate_actions(s, start_ + static_cast<Period>(i), window_[i]).size());
        return size;
    }

    OptResult<P> run(const State& s0) {
        OptResult<P> out;
        if (window_.empty()) return out;
        const double sz = space(s0);
        if (opt_.mode == SearchMode::enumerate) {
            if (sz > static_cast<double>(opt_.cap)) throw SearchTooLarge(sz, opt_.cap);
            std::vector<Action> cur;
            bool have = false;
            enumerate(s0, 0, 0.0, cur, out, have);
            return out;
        }
        space_ = sz;
        memo_.assign(window_.size(), {});
        out.value = best(0, s0);
        State s = s0;
        for (std::size_t k = 0; k < window_.size(); ++k) {
            const Period t = start_ + static_cast<Period>(k);
            const auto acts = p_.candidate_actions(s, t, window_[k]);
            const Action& a = acts[memo_[k].at(s).choice];
            out.actions.push_back(a);
            p_.apply(s, t, window_[k], a);
        }
        return out;
    }

private:
    struct Entry {
        double value;
        std::size_t choice;
    };

    void tick() {
        if (++evaluations_ > opt_.cap) throw SearchTooLarge(space_, opt_.cap);
    }

    double best(std::size_t k, const State& s) {
        if (k == window_.size()) return 0.0;
        if (auto it = memo_[k].find(s); it != memo_[k].end()) return it->second.value;
        const Period t = start_ + static_cast<Period>(k);
        const auto acts = p_.candidate_actions(s, t, window_[k]);
        Entry e{0.0, 0};
        bool have = false;
        for (std::size_t j = 0; j < acts.size(); ++j) {
            tick();
            State next = s;
            const double r = p_.apply(next, t, window_[k], acts[j]);
            const double v = r + best(k + 1, next);
            if (!have || better(obj_, v, e.value)) {
                e = {v, j};
                have = true;
            }
        }
        memo_[k].emplace(s, e);
        return e.value;
    }

    void enumerate(const State& s, std::size_t k, double acc, std::vector<Action>& cur,
                   OptResult<P>& out, bool& have) {
        if (k == window_.size()) {
            if (!have || better(obj_, acc, out.value)) {
                out.value = acc;
                out.actions = cur;
                have = true;
            }
            return;
        }
        const Period t = start_ + static_cast<Period>(k);
        for (const Action& a : p_.candidate_actions(s, t, window_[k])) {
            State next = s;
            const double r = p_.apply(next, t, window_[k], a);
            cur.push_back(a);
            enumerate(next, k + 1, acc + r, cur, out, have);
            cur.pop_back();
        }
    }

    const P& p_;
    Period start_;
    std::vector<RequestOf<P>> window_;
    BruteForceOptions opt_;
    Objective obj_;
    double space_ = 0.0;
    std::uint64_t evaluations_ = 0;
    std::vector<std::map<State, Entry>> memo_;
};

}  // namespace detail

// Exact optimum over the window starting at `start` from state s. The window is
// extended with null requests up to the last period that can carry reward.
// Ties go to the lexicographically first sequence under candidate_actions order.
template <DecisionProblem P>
OptResult<P> brute_force_opt_from(const P& p, const StateOf<P>& s, Period start,
                                  std::span<const RequestOf<P>> requests,
                                  BruteForceOptions opt = {}) {
    const Period last = std::max<Period>(p.last_active_period(s, start, requests),
                                         start - 1 + static_cast<Period>(requests.size()));
    std::vector<RequestOf<P>> window(requests.begin(), requests.end());
    window.resize(static_cast<std::size_t>(last - start + 1), p.null_request());
    return detail::Search<P>(p, start, std::move(window), opt).run(s);
}

// `requests` holds the whole sequence from period 1; a prefix fixes its first periods.
template <DecisionProblem P>
OptResult<P> brute_force_opt(const P& p, const RequestSequence<RequestOf<P>>& requests,
                             const std::type_identity_t<Trajectory<P>>* from_prefix = nullptr,
                             BruteForceOptions opt = {}) {
    const StateOf<P> s = from_prefix ? replay(p, *from_prefix) : p.initial_state();
    const Period start = from_prefix ? from_prefix->length() + 1 : 1;
    const auto tail = window_of(requests.items, start, requests.stored(), p.null_request());
    return brute_force_opt_from(p, s, start, std::span<const RequestOf<P>>(tail), opt);
}

// Exact optimum over exactly the periods of `requests` (no tail extension).
template <DecisionProblem P>
OptResult<P> brute_force_window(const P& p, const StateOf<P>& s, Period start,
                                std::span<const RequestOf<P>> requests,
                                BruteForceOptions opt = {}) {
    return detail::Search<P>(p, start, {requests.begin(), requests.end()}, opt).run(s);
}

}  // namespace adaswitch
