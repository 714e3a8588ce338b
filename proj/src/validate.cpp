#include "adaswitch/validate.hpp"

#include <chrono>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "adaswitch/brute_force.hpp"
#include "adaswitch/kserver.hpp"
#include "adaswitch/oltq.hpp"
#include "adaswitch/orra.hpp"
#include "adaswitch/properties.hpp"
#include "adaswitch/report.hpp"

namespace adaswitch::checks {

namespace {

using Check = std::function<std::optional<std::string>(Rng&)>;

struct Property {
    std::string suite;
    std::string name;
    Check check;
};

template <class T>
std::string list(const std::vector<T>& v) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    os << ']';
    return os.str();
}

std::string num(double x) { return format_number(x); }

int pick(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); }

// ---------------------------------------------------------------- OLTQ instances

std::vector<int> arrivals(Rng& rng, int ell, int n) {
    std::vector<int> e(static_cast<std::size_t>(n));
    for (auto& x : e) x = pick(rng, 0, ell);
    return e;
}

Trajectory<oltq::OltqProblem> oltq_prefix(const oltq::OltqProblem& p, Rng& rng, int m) {
    const std::vector<int> e = arrivals(rng, p.ell(), m);
    std::vector<oltq::Action> a;
    oltq::ScheduleState s;
    for (int t = 1; t <= m; ++t) {
        auto c = p.candidate_actions(s, t, e[static_cast<std::size_t>(t - 1)]);
        a.push_back(c[rng.below(c.size())]);
        p.apply(s, t, e[static_cast<std::size_t>(t - 1)], a.back());
    }
    return record(p, std::span<const int>(e), std::span<const oltq::Action>(a));
}

std::string oltq_case(int ell, const Trajectory<oltq::OltqProblem>& prefix, const std::vector<int>& w) {
    std::ostringstream os;
    os << "oltq ell=" << ell << " prefix_requests=" << list(prefix.requests) << " prefix_actions=[";
    for (std::size_t i = 0; i < prefix.actions.size(); ++i) {
        os << (i ? " " : "") << '{';
        for (std::size_t j = 0; j < prefix.actions[i].size(); ++j) {
            const int x = prefix.actions[i][j];
            os << (j ? "," : "") << (x == oltq::kNever ? std::string("never") : std::to_string(x));
        }
        os << '}';
    }
    os << "] window=" << list(w);
    return os.str();
}

double oltq_window_value(const oltq::OltqProblem& p, const oltq::ScheduleState& s, Period start,
                         const std::vector<int>& w, const std::vector<oltq::Action>& a) {
    oltq::ScheduleState x = s;
    return evaluate_from(p, x, start, std::span<const int>(w), std::span<const oltq::Action>(a));
}

// ---------------------------------------------------------------- k-server instances

kserver::Metric dyadic_metric(Rng& rng, int n) {
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> d(un * un, 0.0);
    for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = i + 1; j < un; ++j) d[i * un + j] = d[j * un + i] = pick(rng, 1, 8) / 8.0;
    for (std::size_t m = 0; m < un; ++m)
        for (std::size_t i = 0; i < un; ++i)
            for (std::size_t j = 0; j < un; ++j) d[i * un + j] = std::min(d[i * un + j], d[i * un + m] + d[m * un + j]);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return kserver::Metric(names, d);
}

kserver::ServerConfig servers(Rng& rng, int n, int k) {
    kserver::ServerConfig s(static_cast<std::size_t>(k));
    for (auto& x : s) x = pick(rng, 0, n - 1);
    return s;
}

std::vector<kserver::Request> points(Rng& rng, int n, int len, bool nulls = true) {
    std::vector<kserver::Request> r(static_cast<std::size_t>(len));
    for (auto& x : r) {
        const int v = pick(rng, 0, nulls ? n : n - 1);
        x = v == n ? kserver::kBottom : v;
    }
    return r;
}

std::string ks_case(const kserver::Metric& m, const kserver::ServerConfig& s, const std::vector<kserver::Request>& r) {
    std::ostringstream os;
    os << "kserver n=" << m.size() << " dist=[";
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) os << (i || j ? " " : "") << num(m(i, j));
    os << "] servers=" << list(s) << " requests=" << list(r);
    return os.str();
}

double ks_cost(const kserver::Metric& m, kserver::ServerConfig s, const std::vector<kserver::Request>& r,
               const std::vector<kserver::Action>& a) {
    double c = 0;
    for (std::size_t t = 0; t < r.size(); ++t) {
        if (r[t] == kserver::kBottom) continue;
        auto& pos = s[static_cast<std::size_t>(a[t])];
        c += m(pos, r[t]);
        pos = r[t];
    }
    return c;
}

// ---------------------------------------------------------------- ORRA instances

std::vector<orra::Request> masks(Rng& rng, int n, int len) {
    std::vector<orra::Request> w(static_cast<std::size_t>(len));
    for (auto& r : w) r = static_cast<orra::Request>(rng.below(1u << n));
    return w;
}

orra::Availability availability(Rng& rng, const orra::OrraParams& p, Period start) {
    orra::Availability a(static_cast<std::size_t>(p.n));
    for (auto& x : a) x = std::max(1, start - 1 + pick(rng, 0, p.d));
    return a;
}

std::string orra_case(const orra::OrraParams& p, const orra::Availability& w, Period start,
                      const std::vector<orra::Request>& r) {
    std::ostringstream os;
    os << "orra n=" << p.n << " d=" << p.d << " start=" << start << " availability=" << list(w)
       << " requests=" << list(r);
    return os.str();
}

// ---------------------------------------------------------------- suites

void framework_suite(std::vector<Property>& out) {
    out.push_back({"framework", "brute_force_modes_agree", [](Rng& rng) -> std::optional<std::string> {
        const int ell = pick(rng, 2, 3);
        const oltq::OltqProblem p(ell);
        const auto w = arrivals(rng, ell, pick(rng, 1, 4));
        const oltq::Sequence seq{w, std::nullopt};
        const auto a = brute_force_opt(p, seq, nullptr, {10'000'000, SearchMode::memoized});
        const auto b = brute_force_opt(p, seq, nullptr, {10'000'000, SearchMode::enumerate});
        if (a.value != b.value || a.actions != b.actions)
            return oltq_case(ell, {}, w) + " memoized=" + num(a.value) + " enumerate=" + num(b.value);
        return std::nullopt;
    }});
    out.push_back({"framework", "opt_dominates_sampled_sequences", [](Rng& rng) -> std::optional<std::string> {
        const int ell = pick(rng, 2, 4);
        const oltq::OltqProblem p(ell);
        const auto w = arrivals(rng, ell, pick(rng, 1, 6));
        const oltq::Sequence seq{w, std::nullopt};
        const double opt = brute_force_opt(p, seq).value;
        const Period H = std::max(effective_length(p, seq), seq.stored());
        oltq::ScheduleState s;
        std::vector<oltq::Action> acts;
        for (Period t = 1; t <= H; ++t) {
            const int e = request_at(w, t, 0);
            auto c = p.candidate_actions(s, t, e);
            acts.push_back(c[rng.below(c.size())]);
            p.apply(s, t, e, acts.back());
        }
        const double val = evaluate_trajectory(p, seq, std::span<const oltq::Action>(acts));
        if (val > opt) return oltq_case(ell, {}, w) + " sampled=" + num(val) + " opt=" + num(opt);
        return std::nullopt;
    }});
    out.push_back({"framework", "replay_matches_cumulative", [](Rng& rng) -> std::optional<std::string> {
        const int ell = pick(rng, 1, 6);
        const oltq::OltqProblem p(ell);
        const auto tr = oltq_prefix(p, rng, pick(rng, 0, 12));
        const oltq::Sequence seq{tr.requests, std::nullopt};
        const double v = evaluate_trajectory(p, seq, std::span<const oltq::Action>(tr.actions));
        if (v != tr.cumulative) return oltq_case(ell, tr, {}) + " replayed=" + num(v);
        return std::nullopt;
    }});
    out.push_back({"framework", "resolve_each_period_equals_opt", [](Rng& rng) -> std::optional<std::string> {
        const orra::OrraParams prm{pick(rng, 1, 3), pick(rng, 1, 3)};
        const orra::OrraProblem p(prm);
        const auto w = masks(rng, prm.n, pick(rng, 0, 7));
        const orra::Sequence seq{w, std::nullopt};
        const double opt = brute_force_opt(p, seq).value;
        auto s = p.initial_state();
        double val = 0;
        for (Period t = 1; t <= static_cast<Period>(w.size()); ++t) {
            const std::vector<orra::Request> rest(w.begin() + (t - 1), w.end());
            const auto plan = brute_force_opt_from(p, s, t, std::span<const orra::Request>(rest));
            val += p.apply(s, t, w[static_cast<std::size_t>(t - 1)], plan.actions.front());
        }
        if (val != opt)
            return orra_case(prm, p.initial_state(), 1, w) + " resolved=" + num(val) + " opt=" + num(opt);
        return std::nullopt;
    }});
    out.push_back({"framework", "distance_cap_monotone", [](Rng& rng) -> std::optional<std::string> {
        const int ell = pick(rng, 2, 8);
        const oltq::OltqProblem p(ell);
        const oltq::Sequence a{arrivals(rng, ell, pick(rng, 0, 10)), std::nullopt};
        const oltq::Sequence b{arrivals(rng, ell, pick(rng, 0, 10)), std::nullopt};
        const auto raw = sequence_distance(p, a, b);
        double prev = -1;
        for (double cap = 0.5; cap <= ell + 0.5; cap += 0.5) {
            const double c = sequence_distance(p, a, b, cap).capped_total;
            if (c < prev || c > raw.raw_total || (cap >= ell && c != raw.raw_total))
                return "oltq ell=" + std::to_string(ell) + " a=" + list(a.items) + " b=" + list(b.items) +
                       " cap=" + num(cap);
            prev = c;
        }
        return std::nullopt;
    }});
}

void oltq_suite(std::vector<Property>& out, int qfrac_offset) {
    out.push_back({"oltq", "ohrr_equals_brute_force", [](Rng& rng) -> std::optional<std::string> {
        const int ell = pick(rng, 2, 4);
        const oltq::OltqProblem p(ell);
        const auto prefix = oltq_prefix(p, rng, pick(rng, 0, 3));
        const auto s = replay(p, prefix);
        const Period start = prefix.length() + 1;
        const auto w = arrivals(rng, ell, pick(rng, 1, 6));
        const double bf = brute_force_window(p, s, start, std::span<const int>(w)).value;
        const double v = oltq_window_value(p, s, start, w, oltq::ohrr_star(ell, s, start, w));
        if (v != bf) return oltq_case(ell, prefix, w) + " ohrr=" + num(v) + " opt=" + num(bf);
        return std::nullopt;
    }});
    out.push_back({"oltq", "ohrr_monitor_incremental", [](Rng& rng) -> std::optional<std::string> {
        const int ell = pick(rng, 2, 6);
        const oltq::OltqProblem p(ell);
        const auto prefix = oltq_prefix(p, rng, pick(rng, 0, 4));
        const auto s = replay(p, prefix);
        const Period start = prefix.length() + 1;
        const auto w = arrivals(rng, ell, 10);
        oltq::OhrrMonitor mon(ell, s, start);
        std::vector<int> grown;
        for (int x : w) {
            grown.push_back(x);
            const double inc = mon.push(x);
            const double full = oltq_window_value(p, s, start, grown, oltq::ohrr_star(ell, s, start, grown));
            if (inc != full) return oltq_case(ell, prefix, grown) + " monitor=" + num(inc) + " solve=" + num(full);
        }
        return std::nullopt;
    }});
    out.push_back({"oltq", "qfrac_robustness", [qfrac_offset](Rng& rng) -> std::optional<std::string> {
        const int ell = pick(rng, 2, 4);
        const oltq::OltqProblem p(ell);
        const auto prefix = oltq_prefix(p, rng, pick(rng, 0, 2));
        const Period m = prefix.length();
        const auto s0 = replay(p, prefix);
        const auto w = arrivals(rng, ell, pick(rng, 1, 6));
        const double opt = brute_force_opt_from(p, s0, m + 1, std::span<const int>(w)).value;
        const oltq::QFracOracle on(ell, qfrac_offset);
        auto pol = on.start(m, s0, 0);
        auto s = s0;
        const Period H = p.last_active_period(s0, m + 1, std::span<const int>(w));
        double val = 0;
        for (Period t = m + 1; t <= H; ++t) {
            const int e = request_at(w, t - m, 0);
            val += p.apply(s, t, e, pol.act(t, e, s));
        }
        const double slack = m == 0 ? 0.0 : 2.0 * ell * ell;
        if (val < on.eta() * opt - slack - 1e-9)
            return oltq_case(ell, prefix, w) + " qfrac=" + num(val) + " opt=" + num(opt);
        return std::nullopt;
    }});
    out.push_back({"oltq", "bounded_influence_2ell", [](Rng& rng) -> std::optional<std::string> {
        const int ell = pick(rng, 2, 3);
        const oltq::OltqProblem p(ell);
        const int m = pick(rng, 1, 3);
        InfluenceSample<oltq::OltqProblem> smp{oltq_prefix(p, rng, m), oltq_prefix(p, rng, m),
                                               arrivals(rng, ell, pick(rng, 1, 4))};
        Rng inner(rng.next());
        const double gap = check_bounded_influence<oltq::OltqProblem>(
            p, [&](Rng&) { return smp; }, 1, inner);
        if (gap > 2.0 * ell) return oltq_case(ell, smp.prefix_a, smp.window) + " gap=" + num(gap);
        return std::nullopt;
    }});
    out.push_back({"oltq", "lipschitz_1_ell", [](Rng& rng) -> std::optional<std::string> {
        const int ell = pick(rng, 2, 3);
        const oltq::OltqProblem p(ell);
        LipschitzSample<oltq::OltqProblem> smp{oltq_prefix(p, rng, pick(rng, 0, 2)), pick(rng, 0, ell),
                                               pick(rng, 0, ell), arrivals(rng, ell, pick(rng, 0, 3)), {}};
        Rng inner(rng.next());
        const auto res = check_lipschitz<oltq::OltqProblem>(p, [&](Rng&) { return smp; }, 1, inner,
                                                            LipschitzMode::opt);
        if (res.violations)
            return oltq_case(ell, smp.prefix, smp.suffix) + " e=" + std::to_string(smp.e) +
                   " e'=" + std::to_string(smp.e_prime);
        return std::nullopt;
    }});
}

void kserver_suite(std::vector<Property>& out) {
    out.push_back({"kserver", "flow_equals_brute_force", [](Rng& rng) -> std::optional<std::string> {
        const int n = pick(rng, 2, 5), k = pick(rng, 1, 3);
        const auto m = dyadic_metric(rng, n);
        const auto s = servers(rng, n, k);
        const auto r = points(rng, n, pick(rng, 0, 7));
        const double flow = kserver::offline_kserver(s, r, m).cost;
        const double bf = brute_force_opt(kserver::KServerProblem(m, s), kserver::Sequence{r, std::nullopt}).value;
        if (flow != bf) return ks_case(m, s, r) + " flow=" + num(flow) + " opt=" + num(bf);
        return std::nullopt;
    }});
    out.push_back({"kserver", "config_distance_is_metric", [](Rng& rng) -> std::optional<std::string> {
        const int n = pick(rng, 2, 6), k = pick(rng, 1, 4);
        const auto m = dyadic_metric(rng, n);
        const auto a = servers(rng, n, k), b = servers(rng, n, k), c = servers(rng, n, k);
        const double ab = kserver::config_distance(m, a, b), ba = kserver::config_distance(m, b, a);
        const double ac = kserver::config_distance(m, a, c), bc = kserver::config_distance(m, b, c);
        if (ab != ba || ac > ab + bc + 1e-12 || kserver::config_distance(m, a, a) != 0)
            return ks_case(m, a, {}) + " b=" + list(b) + " c=" + list(c);
        return std::nullopt;
    }});
    out.push_back({"kserver", "wfa_within_2k_minus_1", [](Rng& rng) -> std::optional<std::string> {
        const int n = pick(rng, 2, 5), k = pick(rng, 1, 3);
        const auto m = dyadic_metric(rng, n);
        const auto s0 = servers(rng, n, k);
        const auto r = points(rng, n, pick(rng, 0, 12));
        kserver::WfaPolicy pol(m, s0, 100'000);
        auto s = s0;
        std::vector<kserver::Action> a;
        for (std::size_t t = 0; t < r.size(); ++t) {
            a.push_back(pol.act(static_cast<Period>(t + 1), r[t], s));
            if (r[t] != kserver::kBottom) s[static_cast<std::size_t>(a.back())] = r[t];
        }
        const double opt = kserver::offline_kserver(s0, r, m).cost;
        const double wfa = ks_cost(m, s0, r, a);
        if (wfa > (2.0 * k - 1.0) * opt + 1e-12) return ks_case(m, s0, r) + " wfa=" + num(wfa) + " opt=" + num(opt);
        return std::nullopt;
    }});
    out.push_back({"kserver", "lazy_conversion_dominates", [](Rng& rng) -> std::optional<std::string> {
        const int n = pick(rng, 2, 5), k = pick(rng, 1, 3);
        const auto m = dyadic_metric(rng, n);
        const auto s0 = servers(rng, n, k);
        const auto r = points(rng, n, pick(rng, 1, 7), false);
        std::vector<kserver::ServerConfig> path;
        auto cur = s0;
        double multi = 0;
        for (auto e : r) {
            auto next = servers(rng, n, k);
            next[rng.below(static_cast<std::uint64_t>(k))] = e;
            for (std::size_t i = 0; i < next.size(); ++i) multi += m(cur[i], next[i]);
            path.push_back(next);
            cur = next;
        }
        const double lazy = ks_cost(m, s0, r, kserver::lazy_realize(m, s0, path, r));
        if (lazy > multi + 1e-12) return ks_case(m, s0, r) + " lazy=" + num(lazy) + " multi=" + num(multi);
        return std::nullopt;
    }});
    out.push_back({"kserver", "prefix_conditioning_equals_fresh_start", [](Rng& rng) -> std::optional<std::string> {
        const int n = pick(rng, 2, 4), k = pick(rng, 1, 2);
        const auto m = dyadic_metric(rng, n);
        const kserver::KServerProblem p(m, servers(rng, n, k));
        const auto pre_r = points(rng, n, pick(rng, 0, 3));
        std::vector<kserver::Action> pre_a;
        for (std::size_t i = 0; i < pre_r.size(); ++i) pre_a.push_back(pick(rng, 0, k - 1));
        const auto prefix = record(p, std::span<const kserver::Request>(pre_r), std::span<const kserver::Action>(pre_a));
        auto all = pre_r;
        const auto tail = points(rng, n, pick(rng, 0, 4));
        all.insert(all.end(), tail.begin(), tail.end());
        const double cond = brute_force_opt(p, kserver::Sequence{all, std::nullopt}, &prefix).value;
        const double fresh = kserver::offline_kserver(replay(p, prefix), tail, m).cost;
        if (cond != fresh) return ks_case(m, p.initial_state(), all) + " prefix_len=" + std::to_string(pre_r.size());
        return std::nullopt;
    }});
    out.push_back({"kserver", "initial_state_lemma", [](Rng& rng) -> std::optional<std::string> {
        const int n = pick(rng, 2, 5), k = pick(rng, 1, 3);
        const auto m = dyadic_metric(rng, n);
        const auto a = servers(rng, n, k), b = servers(rng, n, k);
        const auto r = points(rng, n, pick(rng, 0, 7));
        double disp = 0;
        for (std::size_t i = 0; i < a.size(); ++i) disp += m(a[i], b[i]);
        const double gap = std::abs(kserver::offline_kserver(a, r, m).cost - kserver::offline_kserver(b, r, m).cost);
        if (gap > disp + 1e-12) return ks_case(m, a, r) + " other=" + list(b);
        return std::nullopt;
    }});
    out.push_back({"kserver", "bounded_influence_k", [](Rng& rng) -> std::optional<std::string> {
        const int n = pick(rng, 2, 4), k = pick(rng, 1, 3);
        const auto m = dyadic_metric(rng, n);
        const kserver::KServerProblem p(m, servers(rng, n, k));
        auto pre = [&](int len) {
            const auto r = points(rng, n, len);
            std::vector<kserver::Action> a;
            for (int i = 0; i < len; ++i) a.push_back(pick(rng, 0, k - 1));
            return record(p, std::span<const kserver::Request>(r), std::span<const kserver::Action>(a));
        };
        const int len = pick(rng, 1, 4);
        InfluenceSample<kserver::KServerProblem> smp{pre(len), pre(len), points(rng, n, pick(rng, 1, 5))};
        Rng inner(rng.next());
        const double gap = check_bounded_influence<kserver::KServerProblem>(p, [&](Rng&) { return smp; }, 1, inner);
        if (gap > k) return ks_case(m, p.initial_state(), smp.window) + " gap=" + num(gap);
        return std::nullopt;
    }});
    out.push_back({"kserver", "strong_lipschitz_2_2", [](Rng& rng) -> std::optional<std::string> {
        const int n = pick(rng, 2, 5), k = pick(rng, 1, 3);
        const auto m = dyadic_metric(rng, n);
        const kserver::KServerProblem p(m, servers(rng, n, k));
        LipschitzSample<kserver::KServerProblem> smp;
        smp.e = points(rng, n, 1)[0];
        smp.e_prime = points(rng, n, 1)[0];
        smp.suffix = points(rng, n, pick(rng, 0, 6));
        for (std::size_t i = 0; i <= smp.suffix.size(); ++i) smp.actions.push_back(pick(rng, 0, k - 1));
        Rng inner(rng.next());
        const auto res = check_lipschitz<kserver::KServerProblem>(p, [&](Rng&) { return smp; }, 1, inner,
                                                                  LipschitzMode::strong);
        if (res.violations)
            return ks_case(m, p.initial_state(), smp.suffix) + " e=" + std::to_string(smp.e) +
                   " e'=" + std::to_string(smp.e_prime);
        return std::nullopt;
    }});
}

void orra_suite(std::vector<Property>& out) {
    out.push_back({"orra", "dp_equals_brute_force", [](Rng& rng) -> std::optional<std::string> {
        const orra::OrraParams prm{pick(rng, 1, 3), pick(rng, 1, 3)};
        const Period start = pick(rng, 1, 4);
        const auto w = availability(rng, prm, start);
        const auto r = masks(rng, prm.n, pick(rng, 0, 8));
        const auto dp = orra::orra_offline_dp(prm, w, start, r);
        const auto bf = brute_force_window(orra::OrraProblem(prm), w, start, std::span<const orra::Request>(r));
        if (dp.value != bf.value || dp.actions != bf.actions)
            return orra_case(prm, w, start, r) + " dp=" + num(dp.value) + " opt=" + num(bf.value);
        return std::nullopt;
    }});
    out.push_back({"orra", "dp_monitor_incremental", [](Rng& rng) -> std::optional<std::string> {
        const orra::OrraParams prm{pick(rng, 1, 3), pick(rng, 1, 3)};
        const Period start = pick(rng, 1, 4);
        const auto w = availability(rng, prm, start);
        const auto r = masks(rng, prm.n, 8);
        orra::DpMonitor mon(prm, w, start, {});
        std::vector<orra::Request> head;
        for (auto x : r) {
            head.push_back(x);
            const double inc = mon.push(x), full = orra::orra_offline_dp(prm, w, start, head).value;
            if (inc != full) return orra_case(prm, w, start, head) + " monitor=" + num(inc) + " dp=" + num(full);
        }
        return std::nullopt;
    }});
    out.push_back({"orra", "served_resource_busy_for_d", [](Rng& rng) -> std::optional<std::string> {
        const orra::OrraParams prm{pick(rng, 1, 4), pick(rng, 1, 4)};
        const orra::OrraProblem p(prm);
        auto s = p.initial_state();
        std::vector<Period> last(static_cast<std::size_t>(prm.n), -1000);
        std::vector<orra::Request> r;
        for (Period t = 1; t <= 30; ++t) {
            const auto e = static_cast<orra::Request>(rng.below(1u << prm.n));
            const int a = pick(rng, 0, prm.n);
            r.push_back(e);
            if (p.apply(s, t, e, a) > 0) {
                if (t < last[static_cast<std::size_t>(a - 1)] + prm.d)
                    return orra_case(prm, p.initial_state(), 1, r) + " resource=" + std::to_string(a);
                last[static_cast<std::size_t>(a - 1)] = t;
            }
        }
        return std::nullopt;
    }});
    out.push_back({"orra", "strong_lipschitz_1_1", [](Rng& rng) -> std::optional<std::string> {
        const orra::OrraParams prm{pick(rng, 1, 3), pick(rng, 1, 3)};
        const orra::OrraProblem p(prm);
        LipschitzSample<orra::OrraProblem> smp;
        smp.e = masks(rng, prm.n, 1)[0];
        smp.e_prime = masks(rng, prm.n, 1)[0];
        smp.suffix = masks(rng, prm.n, pick(rng, 0, 7));
        for (std::size_t i = 0; i <= smp.suffix.size(); ++i) smp.actions.push_back(pick(rng, 0, prm.n));
        Rng inner(rng.next());
        const auto res = check_lipschitz<orra::OrraProblem>(p, [&](Rng&) { return smp; }, 1, inner,
                                                            LipschitzMode::strong);
        if (res.violations)
            return orra_case(prm, p.initial_state(), 1, smp.suffix) + " e=" + std::to_string(smp.e) +
                   " e'=" + std::to_string(smp.e_prime);
        return std::nullopt;
    }});
    out.push_back({"orra", "bounded_influence_d", [](Rng& rng) -> std::optional<std::string> {
        const orra::OrraParams prm{pick(rng, 1, 3), pick(rng, 1, 3)};
        const orra::OrraProblem p(prm);
        auto pre = [&](int len) {
            const auto r = masks(rng, prm.n, len);
            std::vector<orra::Action> a;
            for (int i = 0; i < len; ++i) a.push_back(pick(rng, 0, prm.n));
            return record(p, std::span<const orra::Request>(r), std::span<const orra::Action>(a));
        };
        const int len = pick(rng, 1, 4);
        InfluenceSample<orra::OrraProblem> smp{pre(len), pre(len), masks(rng, prm.n, pick(rng, 1, 6))};
        Rng inner(rng.next());
        const double gap = check_bounded_influence<orra::OrraProblem>(p, [&](Rng&) { return smp; }, 1, inner);
        if (gap > prm.d) return orra_case(prm, replay(p, smp.prefix_a), len + 1, smp.window) + " gap=" + num(gap);
        return std::nullopt;
    }});
    out.push_back({"orra", "prr_prefix_oblivious", [](Rng& rng) -> std::optional<std::string> {
        const orra::OrraParams prm{pick(rng, 1, 4), pick(rng, 1, 4)};
        const Period m = pick(rng, 1, 5);
        const auto r = masks(rng, prm.n, 30);
        const std::uint64_t seed = rng.next();
        const orra::PrrOracle on(prm);
        auto wa = availability(rng, prm, m + 1), wb = availability(rng, prm, m + 1);
        auto x = on.start(m, wa, seed), y = on.start(m, wb, seed);
        for (std::size_t t = 0; t < r.size(); ++t) {
            const Period now = m + 1 + static_cast<Period>(t);
            if (x.act(now, r[t], wa) != y.act(now, r[t], wb))
                return orra_case(prm, wa, m + 1, r) + " other=" + list(wb) + " seed=" + std::to_string(seed);
        }
        return std::nullopt;
    }});
}

// OLTQ runs long enough to leave the conservative state.
struct OltqRunCase {
    int ell;
    oltq::Sequence reality, prediction;
    double epsilon;
};

OltqRunCase oltq_run_case(Rng& rng) {
    OltqRunCase c;
    c.ell = 2;
    const int T = pick(rng, 120, 300);
    c.reality.items = arrivals(rng, c.ell, T);
    c.prediction = c.reality;
    const double noise = pick(rng, 0, 6) / 10.0;
    for (auto& x : c.prediction.items)
        if (rng.bernoulli(noise)) x = pick(rng, 0, c.ell);
    c.epsilon = pick(rng, 6, 9) / 20.0;
    return c;
}

std::string run_case_text(const OltqRunCase& c) {
    return "oltq ell=" + std::to_string(c.ell) + " epsilon=" + num(c.epsilon) + " reality=" +
           list(c.reality.items) + " prediction=" + list(c.prediction.items);
}

void adaswitch_suite(std::vector<Property>& out) {
    out.push_back({"adaswitch", "switch_count_bound", [](Rng& rng) -> std::optional<std::string> {
        const auto c = oltq_run_case(rng);
        const auto& r = oltq::adaswitch_oltq(c.ell, c.reality, c.prediction, c.epsilon).report;
        const double bound = 1.0 + r.eta * r.b * r.phi_star / (2.0 * r.c);
        if (r.switches_to_conservative > bound + 1e-9)
            return run_case_text(c) + " switches=" + std::to_string(r.switches_to_conservative);
        return std::nullopt;
    }});
    out.push_back({"adaswitch", "ratio_meets_T1_and_T5", [](Rng& rng) -> std::optional<std::string> {
        const auto c = oltq_run_case(rng);
        const auto& r = oltq::adaswitch_oltq(c.ell, c.reality, c.prediction, c.epsilon).report;
        if (!r.ratio) return std::nullopt;
        if ((r.bound_T1 && *r.ratio < *r.bound_T1 - 1e-12) || (r.bound_app && *r.ratio < *r.bound_app - 1e-12))
            return run_case_text(c) + " ratio=" + num(*r.ratio);
        return std::nullopt;
    }});
    out.push_back({"adaswitch", "predictive_phase_regret", [](Rng& rng) -> std::optional<std::string> {
        const auto c = oltq_run_case(rng);
        const oltq::OltqProblem p(c.ell);
        const auto res = oltq::adaswitch_oltq(c.ell, c.reality, c.prediction, c.epsilon);
        const auto& rep = res.report;
        const double L = c.ell, cap = rep.c / rep.b;
        for (std::size_t i = 0; i < rep.epochs.size(); ++i) {
            if (rep.epochs[i].to != Mode::predictive) continue;
            const Period tau = rep.epochs[i].period;
            const Period end = i + 1 < rep.epochs.size() ? rep.epochs[i + 1].period - 1 : rep.horizon;
            if (end < tau) continue;
            Trajectory<oltq::OltqProblem> head;
            for (Period t = 1; t < tau; ++t)
                head.push(res.trajectory.requests[static_cast<std::size_t>(t - 1)],
                          res.trajectory.actions[static_cast<std::size_t>(t - 1)], 0.0);
            const auto s = replay(p, head);
            const auto w = window_of(c.reality.items, tau, end, 0);
            double val = 0, dist = 0;
            for (Period t = tau; t <= end; ++t) {
                val += res.trajectory.rewards[static_cast<std::size_t>(t - 1)];
                dist += std::min(p.distance(request_at(c.reality.items, t, 0), request_at(c.prediction.items, t, 0)), cap);
            }
            double opt;
            try {
                opt = brute_force_window(p, s, tau, std::span<const int>(w)).value;
            } catch (const SearchTooLarge&) {
                continue;
            }
            if (val < opt - 2.0 * rep.b * L * dist - rep.c * L - 1e-9)
                return run_case_text(c) + " phase=[" + std::to_string(tau) + "," + std::to_string(end) +
                       "] val=" + num(val) + " opt=" + num(opt);
        }
        return std::nullopt;
    }});
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"framework", "oltq", "kserver", "orra", "adaswitch"};
    return names;
}

std::vector<PropertyOutcome> run_validation(const std::string& suite, const ValidateOptions& opt,
                                            std::ostream* progress) {
    std::vector<Property> props;
    const bool all = suite == "all";
    bool known = all;
    for (const auto& s : suite_names()) known = known || s == suite;
    if (!known) throw std::invalid_argument("unknown suite '" + suite + "'");
    if (all || suite == "framework") framework_suite(props);
    if (all || suite == "oltq") oltq_suite(props, opt.qfrac_offset);
    if (all || suite == "kserver") kserver_suite(props);
    if (all || suite == "orra") orra_suite(props);
    if (all || suite == "adaswitch") adaswitch_suite(props);

    using Clock = std::chrono::steady_clock;
    const auto slice = std::chrono::duration<double>(opt.budget_seconds / static_cast<double>(props.size()));
    std::vector<PropertyOutcome> out;
    for (std::size_t i = 0; i < props.size(); ++i) {
        PropertyOutcome o{props[i].suite, props[i].name, true, 0, {}};
        const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(slice);
        for (long n = 0; n < opt.max_checks; ++n) {
            if (n >= opt.min_checks && Clock::now() >= deadline) break;
            Rng rng(derive_seed(opt.seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(n)}));
            std::optional<std::string> bad;
            try {
                bad = props[i].check(rng);
            } catch (const std::exception& e) {
                bad = std::string("exception: ") + e.what();
            }
            ++o.checked;
            if (bad) {
                o.pass = false;
                o.counterexample = *bad;
                break;
            }
        }
        if (progress)
            *progress << (o.pass ? "PASS " : "FAIL ") << o.suite << '.' << o.name << " (" << o.checked
                      << " checks)" << (o.pass ? "" : "\n  counterexample: " + o.counterexample) << '\n';
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace adaswitch::checks
