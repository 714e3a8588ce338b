#include "adaswitch/oltq.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace adaswitch::oltq {

double eta_oltq(int ell) {
    if (ell < 1) throw std::invalid_argument("ell must be positive");
    const double l = ell;
    const double g = std::sqrt(1.25 + 1.0 / l) - 0.5;
    const double lo = std::floor(g * l + 1e-12);
    const double hi = std::ceil(g * l - 1e-12);
    return std::min(lo / l, (l + hi) * (l - hi + 1.0) / (l * (l + 1.0)));
}

double alpha_of_gamma(int ell, double gamma) {
    const double l = ell;
    double best = 0.0;
    for (int j = 0; j <= ell; ++j) {
        const double v = (l + j) * (l - j + 1.0) / ((l + 1.0) * l);
        if (v >= gamma) best = std::max(best, j / l);
    }
    return best;
}

OltqProblem::OltqProblem(int ell) : ell_(ell) {
    if (ell < 1) throw std::invalid_argument("ell must be positive");
}

ProblemTraits OltqProblem::traits() const {
    const double l = ell_;
    return {l, 1.0, l, 2.0 * l, Objective::maximize};
}

double OltqProblem::apply(State& s, Period t, const Request&, const Action& a) const {
    for (int slot : a) {
        if (slot == kNever) continue;
        s.reserved.emplace(slot, t + ell_ - slot);  // later claimants of a slot earn nothing
    }
    double reward = 0.0;
    auto it = s.reserved.begin();
    while (it != s.reserved.end() && it->first <= t) {
        if (it->first == t) reward = it->second;
        it = s.reserved.erase(it);
    }
    return reward;
}

std::vector<Action> OltqProblem::candidate_actions(const State&, Period t, const Request& e) const {
    std::vector<Action> out;
    const unsigned limit = 1u << ell_;
    for (unsigned mask = 0; mask < limit; ++mask) {
        if (std::popcount(mask) > e) continue;
        Action a(static_cast<std::size_t>(e), kNever);
        std::size_t j = 0;
        for (int i = 0; i < ell_; ++i)
            if (mask & (1u << i)) a[j++] = t + i;
        out.push_back(std::move(a));
    }
    return out;
}

void OltqProblem::check_action(Period t, const Request& e, const Action& a) const {
    if (static_cast<int>(a.size()) != e)
        throw InvalidAction(t, "expected " + std::to_string(e) + " slots, got " +
                                   std::to_string(a.size()));
    for (int slot : a)
        if (slot != kNever && (slot < t || slot > t + ell_ - 1))
            throw InvalidAction(t, "slot " + std::to_string(slot) + " outside patience window");
}

Action OltqProblem::adapt_action(Period t, const Request& e, const Action& a) const {
    Action out(static_cast<std::size_t>(std::max(e, 0)), kNever);
    for (std::size_t i = 0; i < out.size() && i < a.size(); ++i)
        if (a[i] != kNever && a[i] >= t && a[i] <= t + ell_ - 1) out[i] = a[i];
    return out;
}

double OltqProblem::distance(const Request& a, const Request& b) const { return std::abs(a - b); }

Period OltqProblem::last_active_period(const State& s, Period start,
                                       std::span<const Request> w) const {
    Period last = start - 1;
    if (!s.reserved.empty()) last = std::max(last, s.reserved.rbegin()->first);
    for (std::size_t i = w.size(); i-- > 0;)
        if (w[i] > 0) {
            last = std::max(last, start + static_cast<Period>(i) + ell_ - 1);
            break;
        }
    return last;
}

Period OltqProblem::estimate_horizon(Period i, std::span<const Request> prediction) const {
    Period last = 0;
    for (std::size_t t = prediction.size(); t-- > 0;)
        if (prediction[t] > 0) {
            last = static_cast<Period>(t) + 1;
            break;
        }
    return std::max(i, last) + ell_ - 1;
}

double oltq_reward(int ell, std::span<const Request> requests, std::span<const Action> actions,
                   Period t) {
    // Scan claims in arrival order; the first claimant of slot t earns.
    for (Period s = 1; s <= t && s <= static_cast<Period>(actions.size()); ++s) {
        (void)requests;
        for (int slot : actions[s - 1])
            if (slot == t) return std::max(0, s + ell - slot);
    }
    return 0.0;
}

std::vector<Action> ohrr_star(int ell, const ScheduleState& s, Period start,
                              std::span<const Request> window) {
    const Period n = static_cast<Period>(window.size());
    std::vector<Action> out(window.size());
    for (Period k = 0; k < n; ++k) out[k].assign(static_cast<std::size_t>(std::max(window[k], 0)), kNever);
    struct Pending {
        Period arrival;
        int next;
    };
    std::deque<Pending> pending;
    for (Period t = start; t < start + n; ++t) {
        if (window[t - start] > 0) pending.push_back({t, 0});
        while (!pending.empty() && pending.front().arrival <= t - ell) pending.pop_front();
        if (s.reserved.count(t) || pending.empty()) continue;
        Pending& p = pending.back();
        out[p.arrival - start][p.next++] = t;
        if (p.next == window[p.arrival - start]) pending.pop_back();
    }
    return out;
}

OhrrMonitor::OhrrMonitor(int ell, const ScheduleState& s, Period start)
    : ell_(ell), s_(s), next_(start) {}

double OhrrMonitor::push(Request e) {
    const Period t = next_++;
    if (e > 0) pending_.push_back({t, e});
    while (!pending_.empty() && pending_.front().arrival <= t - ell_) pending_.pop_front();
    if (auto it = s_.reserved.find(t); it != s_.reserved.end()) {
        total_ += it->second;
    } else if (!pending_.empty()) {
        Pending& p = pending_.back();
        total_ += p.arrival + ell_ - t;
        if (--p.left == 0) pending_.pop_back();
    }
    return total_;
}

QFracStep qfrac_star_step(int U, Period t, Request e, int ell, double eta, int offset) {
    const double room = std::floor(t + ell - U + 1 - eta * ell + 1e-9) + offset;
    const int N = std::max(0, std::min(e, static_cast<int>(room)));
    Action a(static_cast<std::size_t>(std::max(e, 0)), kNever);
    for (int i = 0; i < N; ++i) a[i] = U + i;
    return {std::move(a), std::max(t + 1, U + N)};
}

Action QFracPolicy::act(Period t, const Request& e, const ScheduleState&) {
    QFracStep st = qfrac_star_step(U_, t, e, ell_, eta_, offset_);
    U_ = st.next_U;
    return std::move(st.action);
}

QFracOracle::QFracOracle(int ell, int offset) : ell_(ell), eta_(eta_oltq(ell)), offset_(offset) {}

namespace {

AdaSwitchConfig oltq_config(int ell, double epsilon, std::uint64_t seed, SwitchingMode mode) {
    AdaSwitchConfig cfg;
    cfg.eta = eta_oltq(ell);
    cfg.epsilon = epsilon;
    cfg.c = ell + 1;
    cfg.b = 1;
    cfg.seed = seed;
    cfg.switching_mode = mode;
    return cfg;
}

void add_t5(CompetitiveReport& r, int ell) {
    if (r.opt <= 0) return;
    BoundInputs in;
    in.eta = r.eta;
    in.epsilon = r.epsilon;
    in.opt = r.opt;
    in.phi_star = r.phi_star;
    in.ell = ell;
    r.bound_app = theoretical_bound(Theorem::T5, in);
    r.bound_app_name = "T5";
}

}  // namespace

RunResult<OltqProblem> adaswitch_oltq(int ell, const Sequence& requests, const Sequence& prediction,
                                      double epsilon, std::uint64_t seed, SwitchingMode mode) {
    const OltqProblem p(ell);
    OhrrOracle off(ell);
    const QFracOracle on(ell);
    RunOptions opts;
    opts.variant = mode == SwitchingMode::regret_based ? "adaswitch-oltq-regret" : "adaswitch-oltq";
    auto res = run_adaswitch_exact(p, requests, prediction, off, on,
                                   oltq_config(ell, epsilon, seed, mode), nullptr, opts);
    add_t5(res.report, ell);
    return res;
}

RunResult<OltqProblem> qfrac_only(int ell, const Sequence& requests, const Sequence& prediction) {
    const OltqProblem p(ell);
    OhrrOracle off(ell);
    const QFracOracle on(ell);
    RunOptions opts;
    opts.variant = "qfrac";
    auto res = run_online_only(p, requests, prediction, off, on, 0, ell + 1.0, nullptr, opts);
    res.report.eta = on.eta();
    return res;
}

double opt_oltq(int ell, const Sequence& requests) {
    const OltqProblem p(ell);
    OhrrOracle off(ell);
    const Period H = effective_length(p, requests);
    const auto w = window_of(requests.items, 1, H, 0);
    return solve_value(p, off, p.initial_state(), 1, std::span<const Request>(w));
}

OltqRun strengthened_adaswitch_oltq(int ell, const Sequence& requests, const Sequence& prediction,
                                    double gamma, double Z, std::uint64_t seed) {
    const double eta = eta_oltq(ell);
    if (!(gamma > 0 && gamma < eta)) throw ConfigError("strengthened rule requires 0 < gamma < eta");
    if (!(Z > 0)) throw ConfigError("strengthened rule requires Z > 0");
    OltqRun out;
    out.opt_prediction = opt_oltq(ell, prediction);
    const double denom = (eta - gamma) * (1.0 - alpha_of_gamma(ell, gamma));
    out.threshold = denom > 0 ? Z * ell * ell / denom : kInf;
    if (out.opt_prediction >= out.threshold) {
        out.result = adaswitch_oltq(ell, requests, prediction, eta - gamma, seed);
        out.result.report.branch = "adaswitch";
    } else {
        out.result = qfrac_only(ell, requests, prediction);
        out.result.report.branch = "fallback";
        out.result.report.epsilon = eta - gamma;
    }
    out.result.report.variant = "strengthened";
    out.result.report.flag("branch=" + out.result.report.branch);
    return out;
}

Instance read_instance(std::istream& in) {
    Instance inst;
    long T = 0;
    if (!(in >> inst.ell >> T) || inst.ell < 1 || T < 0)
        throw std::runtime_error("bad lead-time header, expected 'ell T'");
    inst.requests.items.reserve(static_cast<std::size_t>(T));
    for (long i = 0; i < T; ++i) {
        int e;
        if (!(in >> e)) throw std::runtime_error("expected " + std::to_string(T) + " arrival counts");
        if (e < 0 || e > inst.ell)
            throw std::runtime_error("arrival count out of range at period " + std::to_string(i + 1));
        inst.requests.items.push_back(e);
    }
    return inst;
}

void write_instance(std::ostream& out, const Instance& inst) {
    out << inst.ell << ' ' << inst.requests.items.size() << '\n';
    for (int e : inst.requests.items) out << e << '\n';
}

}  // namespace adaswitch::oltq
