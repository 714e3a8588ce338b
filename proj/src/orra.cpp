#include "adaswitch/orra.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace adaswitch::orra {

StepResult orra_step(Availability& w, int d, Period t, Request e, Action a) {
    if (a <= 0) return {0.0, false};
    const auto i = static_cast<std::size_t>(a - 1);
    if (!((e >> i) & 1u) || w[i] > t) return {0.0, false};
    w[i] = t + d;
    return {1.0, true};
}

OrraProblem::OrraProblem(OrraParams params) : params_(params) {
    if (params.n < 1 || params.n > kMaxResources)
        throw std::invalid_argument("resource count must lie in [1, " + std::to_string(kMaxResources) + "]");
    if (params.d < 1) throw std::invalid_argument("duration must be at least 1");
}

ProblemTraits OrraProblem::traits() const {
    ProblemTraits t;
    t.reward_bound = 1.0;
    t.lipschitz_u = 1.0;
    t.lipschitz_v = 1.0;
    t.influence_f = params_.d;
    t.objective = Objective::maximize;
    return t;
}

std::vector<Action> OrraProblem::candidate_actions(const State& s, Period t, const Request& e) const {
    std::vector<Action> out;
    for (int i = 0; i < params_.n; ++i)
        if (((e >> i) & 1u) && s[static_cast<std::size_t>(i)] <= t) out.push_back(i + 1);
    out.push_back(0);
    return out;
}

void OrraProblem::check_action(Period t, const Request& e, const Action& a) const {
    if (a < 0 || a > params_.n) throw InvalidAction(t, "resource " + std::to_string(a) + " out of range");
    if (params_.n < 32 && (e >> params_.n) != 0) throw InvalidAction(t, "request names unknown resources");
}

Period OrraProblem::last_active_period(const State&, Period start, std::span<const Request> w) const {
    for (std::size_t i = w.size(); i-- > 0;)
        if (w[i] != 0) return start + static_cast<Period>(i);
    return start - 1;
}

Period OrraProblem::estimate_horizon(Period i, std::span<const Request> prediction) const {
    for (std::size_t t = prediction.size(); t-- > 0;)
        if (prediction[t] != 0) return std::max(i, static_cast<Period>(t) + 1);
    return i;
}

// ---------------------------------------------------------------- dynamic program

namespace detail {

// Busy counters c(i) = periods resource i stays busy from the current period.
struct CounterSpace {
    int n, d;
    std::vector<std::uint64_t> place;  // d^i
    std::uint64_t size = 1;
    std::vector<std::uint32_t> decay;  // state at the next period if nothing is served
    std::vector<Request> free_mask;

    CounterSpace(const OrraParams& p, const DpBudget& b) : n(p.n), d(p.d) {
        double approx = 1.0;
        for (int i = 0; i < n; ++i) approx *= d;
        if (approx > static_cast<double>(b.max_states))
            throw OracleTooLarge("dynamic program needs " + std::to_string(approx) +
                                 " states, budget is " + std::to_string(b.max_states));
        for (int i = 0; i < n; ++i) {
            place.push_back(size);
            size *= static_cast<std::uint64_t>(d);
        }
        decay.resize(size);
        free_mask.resize(size);
        for (std::uint64_t s = 0; s < size; ++s) {
            std::uint64_t rest = s, next = 0;
            Request mask = 0;
            for (int i = 0; i < n; ++i) {
                const auto c = rest % static_cast<std::uint64_t>(d);
                rest /= static_cast<std::uint64_t>(d);
                if (c == 0) mask |= Request{1} << i;
                else next += (c - 1) * place[static_cast<std::size_t>(i)];
            }
            decay[s] = static_cast<std::uint32_t>(next);
            free_mask[s] = mask;
        }
    }

    std::uint64_t encode(const Availability& w, Period start) const {
        std::uint64_t s = 0;
        for (int i = 0; i < n; ++i) {
            const int c = std::clamp(w[static_cast<std::size_t>(i)] - start, 0, d - 1);
            s += static_cast<std::uint64_t>(c) * place[static_cast<std::size_t>(i)];
        }
        return s;
    }

    std::uint64_t serve(std::uint64_t s, int i) const {
        return decay[s] + static_cast<std::uint64_t>(d - 1) * place[static_cast<std::size_t>(i)];
    }
};

}  // namespace detail

using detail::CounterSpace;

DpResult orra_offline_dp(const OrraParams& params, const Availability& w, Period start,
                         std::span<const Request> window, const DpBudget& budget) {
    const CounterSpace cs(params, budget);
    const std::size_t T = window.size();
    if (static_cast<double>(cs.size) * static_cast<double>(T + 1) > static_cast<double>(budget.max_cells))
        throw OracleTooLarge("dynamic program table exceeds " + std::to_string(budget.max_cells) + " cells");
    const std::size_t S = cs.size;
    std::vector<int> V((T + 1) * S, 0);
    for (std::size_t t = T; t-- > 0;) {
        const Request e = window[t];
        const int* nxt = &V[(t + 1) * S];
        int* cur = &V[t * S];
        for (std::size_t s = 0; s < S; ++s) {
            int best = nxt[cs.decay[s]];
            const Request avail = e & cs.free_mask[s];
            for (int i = 0; i < params.n; ++i)
                if ((avail >> i) & 1u) best = std::max(best, 1 + nxt[cs.serve(s, i)]);
            cur[s] = best;
        }
    }
    DpResult res;
    std::uint64_t s = cs.encode(w, start);
    res.value = V[s];
    res.actions.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
        const int target = V[t * S + s];
        const int* nxt = &V[(t + 1) * S];
        const Request avail = window[t] & cs.free_mask[s];
        Action a = 0;
        for (int i = 0; i < params.n && a == 0; ++i)
            if (((avail >> i) & 1u) && 1 + nxt[cs.serve(s, i)] == target) a = i + 1;
        s = a > 0 ? cs.serve(s, a - 1) : cs.decay[s];
        res.actions.push_back(a);
    }
    return res;
}

DpMonitor::DpMonitor(const OrraParams& params, const Availability& w, Period start, const DpBudget& budget)
    : params_(params), cs_(std::make_shared<const CounterSpace>(params, budget)) {
    best_.assign(cs_->size, -1);
    best_[cs_->encode(w, start)] = 0;
}

double DpMonitor::push(Request e) {
    const CounterSpace& cs = *cs_;
    next_.assign(best_.size(), -1);
    int top = 0;
    for (std::size_t s = 0; s < best_.size(); ++s) {
        const int v = best_[s];
        if (v < 0) continue;
        auto relax = [&](std::uint64_t to, int val) {
            next_[to] = std::max(next_[to], val);
            top = std::max(top, val);
        };
        relax(cs.decay[s], v);
        const Request avail = e & cs.free_mask[s];
        for (int i = 0; i < params_.n; ++i)
            if ((avail >> i) & 1u) relax(cs.serve(s, i), v + 1);
    }
    best_.swap(next_);
    return top;
}

// ---------------------------------------------------------------- PRR*

PrrPolicy::PrrPolicy(OrraParams params, Period m, std::uint64_t seed)
    : params_(params),
      base_(m == 0 ? 1 : m + params.d),
      ranking_(static_cast<std::size_t>(params.n)),
      own_(static_cast<std::size_t>(params.n), 1),
      rng_(seed) {}

Action PrrPolicy::act(Period t, const Request& e, const Availability&) {
    if (t < base_) return 0;
    const long w = (t - base_) / params_.d;
    if (w != window_) {
        window_ = w;
        std::iota(ranking_.begin(), ranking_.end(), 0);
        rng_.shuffle(ranking_);
    }
    for (int i : ranking_) {
        auto& avail = own_[static_cast<std::size_t>(i)];
        if (((e >> i) & 1u) && avail <= t) {
            avail = t + params_.d;
            return i + 1;
        }
    }
    return 0;
}

// ---------------------------------------------------------------- wrappers

RunResult<OrraProblem> adaswitch_orra(const OrraParams& params, const Sequence& requests,
                                      const Sequence& prediction, const OrraSettings& st) {
    DpOracle off(params);
    return adaswitch_orra_with(params, requests, prediction, off, st);
}

RunResult<OrraProblem> prr_only(const OrraParams& params, const Sequence& requests,
                                const Sequence& prediction, std::uint64_t seed) {
    const OrraProblem p(params);
    DpOracle off(params);
    const PrrOracle on(params);
    RunOptions opts;
    opts.variant = "prr";
    auto res = run_online_only(p, requests, prediction, off, on, seed, params.d / 2.0, nullptr, opts);
    res.report.eta = on.eta();
    return res;
}

Instance read_instance(std::istream& in) {
    Instance inst;
    long T = 0;
    if (!(in >> inst.params.n >> inst.params.d >> T) || inst.params.n < 1 ||
        inst.params.n > kMaxResources || inst.params.d < 1 || T < 0)
        throw std::runtime_error("bad resource header, expected 'n d T'");
    std::string line;
    for (long t = 0; t < T; ++t) {
        if (!(in >> line)) throw std::runtime_error("expected " + std::to_string(T) + " request lines");
        if (static_cast<int>(line.size()) != inst.params.n)
            throw std::runtime_error("request at period " + std::to_string(t + 1) + " must have " +
                                     std::to_string(inst.params.n) + " characters");
        Request r = 0;
        for (int i = 0; i < inst.params.n; ++i) {
            const char c = line[static_cast<std::size_t>(i)];
            if (c != '0' && c != '1')
                throw std::runtime_error("request at period " + std::to_string(t + 1) + " is not a bitstring");
            if (c == '1') r |= Request{1} << i;
        }
        inst.requests.items.push_back(r);
    }
    return inst;
}

void write_instance(std::ostream& out, const Instance& inst) {
    out << inst.params.n << ' ' << inst.params.d << ' ' << inst.requests.items.size() << '\n';
    for (Request r : inst.requests.items) {
        for (int i = 0; i < inst.params.n; ++i) out << (((r >> i) & 1u) ? '1' : '0');
        out << '\n';
    }
}

}  // namespace adaswitch::orra
