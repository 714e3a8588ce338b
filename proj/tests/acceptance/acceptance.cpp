// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "adaswitch/brute_force.hpp"
#include "adaswitch/harness.hpp"
#include "adaswitch/kserver.hpp"
#include "adaswitch/oltq.hpp"
#include "adaswitch/orra.hpp"
#include "adaswitch/properties.hpp"

using namespace adaswitch;
namespace fs = std::filesystem;

namespace {

int pick(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); }

struct Verdict {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

// ---------------------------------------------------------------- instances

std::vector<int> arrivals(Rng& rng, int ell, int n) {
    std::vector<int> e(static_cast<std::size_t>(n));
    for (auto& x : e) x = pick(rng, 0, ell);
    return e;
}

Trajectory<oltq::OltqProblem> oltq_prefix(const oltq::OltqProblem& p, Rng& rng, int m) {
    const auto e = arrivals(rng, p.ell(), m);
    std::vector<oltq::Action> a;
    oltq::ScheduleState s;
    for (int t = 1; t <= m; ++t) {
        auto c = p.candidate_actions(s, t, e[static_cast<std::size_t>(t - 1)]);
        a.push_back(c[rng.below(c.size())]);
        p.apply(s, t, e[static_cast<std::size_t>(t - 1)], a.back());
    }
    return record(p, std::span<const int>(e), std::span<const oltq::Action>(a));
}

kserver::Metric dyadic_metric(Rng& rng, int n) {
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> d(un * un, 0.0);
    for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = i + 1; j < un; ++j) d[i * un + j] = d[j * un + i] = pick(rng, 1, 8) / 8.0;
    for (std::size_t m = 0; m < un; ++m)
        for (std::size_t i = 0; i < un; ++i)
            for (std::size_t j = 0; j < un; ++j) d[i * un + j] = std::min(d[i * un + j], d[i * un + m] + d[m * un + j]);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
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

std::vector<orra::Request> masks(Rng& rng, int n, int len) {
    std::vector<orra::Request> w(static_cast<std::size_t>(len));
    for (auto& r : w) r = static_cast<orra::Request>(rng.below(1u << n));
    return w;
}

template <class Policy>
double run_kserver_policy(const kserver::Metric& m, const kserver::ServerConfig& s0,
                          const std::vector<kserver::Request>& r, Policy& pol) {
    auto s = s0;
    double cost = 0;
    for (std::size_t t = 0; t < r.size(); ++t) {
        const auto a = pol.act(static_cast<Period>(t + 1), r[t], s);
        cost += kserver::kserver_cost(m, s, r[t], a);
        if (r[t] != kserver::kBottom) s[static_cast<std::size_t>(a)] = r[t];
    }
    return cost;
}

// ---------------------------------------------------------------- shared OLTQ suite

struct OltqCase {
    int ell;
    Trajectory<oltq::OltqProblem> prefix;
    std::vector<int> window;
};

std::vector<OltqCase> oltq_suite() {
    Rng rng(derive_seed(11, {1}));
    std::vector<OltqCase> out;
    for (int i = 0; i < 1000; ++i) {
        const int ell = 2 + i % 3;
        const oltq::OltqProblem p(ell);
        const int m = i % 2 == 0 ? 0 : pick(rng, 1, 4);
        auto prefix = oltq_prefix(p, rng, m);
        out.push_back({ell, std::move(prefix), arrivals(rng, ell, pick(rng, 1, 8))});
    }
    return out;
}

struct KsCase {
    kserver::Metric metric;
    kserver::ServerConfig start;
    std::vector<kserver::Request> window;
};

std::vector<KsCase> kserver_suite() {
    Rng rng(derive_seed(11, {2}));
    std::vector<KsCase> out;
    for (int i = 0; i < 500; ++i) {
        const int n = pick(rng, 2, 5), k = pick(rng, 1, 3);
        auto m = dyadic_metric(rng, n);
        auto s = servers(rng, n, k);
        out.push_back({std::move(m), std::move(s), points(rng, n, pick(rng, 0, 7))});
    }
    return out;
}

// ---------------------------------------------------------------- criteria

Verdict criterion1(const std::vector<OltqCase>& oltq_cases, const std::vector<KsCase>& ks_cases) {
    Verdict v;
    for (std::size_t i = 0; i < oltq_cases.size(); ++i) {
        const auto& c = oltq_cases[i];
        const oltq::OltqProblem p(c.ell);
        const auto s = replay(p, c.prefix);
        const Period start = c.prefix.length() + 1;
        const double bf = brute_force_window(p, s, start, std::span<const int>(c.window)).value;
        auto x = s;
        const auto plan = oltq::ohrr_star(c.ell, s, start, c.window);
        const double got = evaluate_from(p, x, start, std::span<const int>(c.window), std::span<const oltq::Action>(plan));
        if (got != bf) v.fail("oltq case " + std::to_string(i) + ": " + format_number(got) + " vs " + format_number(bf));
    }
    for (std::size_t i = 0; i < ks_cases.size(); ++i) {
        const auto& c = ks_cases[i];
        const double flow = kserver::offline_kserver(c.start, c.window, c.metric).cost;
        const double bf =
            brute_force_opt(kserver::KServerProblem(c.metric, c.start), kserver::Sequence{c.window, std::nullopt}).value;
        if (flow != bf) v.fail("kserver case " + std::to_string(i));
    }
    // ORRA: every window where the request space is small, sampled windows otherwise,
    // from a fresh start and from a random mid-run availability.
    long orra_cases = 0;
    Rng rng(derive_seed(11, {3}));
    for (int n = 1; n <= 3; ++n)
        for (int d = 1; d <= 3; ++d) {
            const orra::OrraParams prm{n, d};
            const orra::OrraProblem p(prm);
            for (int len = 0; len <= 8; ++len) {
                const double space = std::pow(double(1u << n), len);
                std::vector<std::vector<orra::Request>> windows;
                if (space <= 4096) {
                    for (long code = 0; code < static_cast<long>(space); ++code) {
                        std::vector<orra::Request> w;
                        long x = code;
                        for (int t = 0; t < len; ++t, x >>= n) w.push_back(static_cast<orra::Request>(x & ((1 << n) - 1)));
                        windows.push_back(std::move(w));
                    }
                } else {
                    for (int s = 0; s < 200; ++s) windows.push_back(masks(rng, n, len));
                }
                for (const auto& w : windows)
                    for (int variant = 0; variant < 2; ++variant) {
                        Period start = 1;
                        orra::Availability av(static_cast<std::size_t>(n), 1);
                        if (variant == 1) {
                            start = pick(rng, 2, 5);
                            for (auto& a : av) a = std::max(1, start - 1 + pick(rng, 0, d));
                        }
                        const auto dp = orra::orra_offline_dp(prm, av, start, w);
                        const auto bf = brute_force_window(p, av, start, std::span<const orra::Request>(w));
                        ++orra_cases;
                        if (dp.value != bf.value) v.fail("orra n=" + std::to_string(n) + " d=" + std::to_string(d));
                    }
            }
        }
    v.detail += (v.detail.empty() ? "" : "; ") + std::string("1000 oltq, 500 kserver, ") + std::to_string(orra_cases) +
                " orra instances";
    return v;
}

Verdict criterion2(const std::vector<OltqCase>& oltq_cases, const std::vector<KsCase>& ks_cases) {
    Verdict v;
    for (std::size_t i = 0; i < oltq_cases.size(); ++i) {
        const auto& c = oltq_cases[i];
        const oltq::OltqProblem p(c.ell);
        const Period m = c.prefix.length();
        const auto s0 = replay(p, c.prefix);
        const double opt = brute_force_opt_from(p, s0, m + 1, std::span<const int>(c.window)).value;
        const oltq::QFracOracle on(c.ell);
        auto pol = on.start(m, s0, 0);
        auto s = s0;
        const Period H = p.last_active_period(s0, m + 1, std::span<const int>(c.window));
        double val = 0;
        for (Period t = m + 1; t <= H; ++t) {
            const int e = request_at(c.window, t - m, 0);
            val += p.apply(s, t, e, pol.act(t, e, s));
        }
        if (val < on.eta() * opt - 2.0 * c.ell * c.ell - 1e-9) v.fail("qfrac case " + std::to_string(i));
    }
    for (std::size_t i = 0; i < ks_cases.size(); ++i) {
        const auto& c = ks_cases[i];
        const int k = static_cast<int>(c.start.size());
        kserver::WfaPolicy pol(c.metric, c.start, 100'000);
        const double wfa = run_kserver_policy(c.metric, c.start, c.window, pol);
        const double opt = kserver::offline_kserver(c.start, c.window, c.metric).cost;
        if (wfa > (2.0 * k - 1.0) * opt + 1e-12) v.fail("wfa case " + std::to_string(i));
    }
    std::ostringstream info;
    Rng gen(derive_seed(11, {4}));
    double worst_marking = 0;
    for (int k : {2, 3, 4})
        for (int inst = 0; inst < 3; ++inst) {
            const auto m = kserver::Metric::uniform(k + 2);
            const auto r = points(gen, k + 2, 40, false);
            kserver::ServerConfig s0(static_cast<std::size_t>(k));
            std::iota(s0.begin(), s0.end(), 0);
            const double opt = kserver::offline_kserver(s0, r, m).cost;
            double sum = 0;
            for (std::uint64_t seed = 0; seed < 500; ++seed) {
                kserver::MarkingPolicy pol(m, s0, seed);
                sum += run_kserver_policy(m, s0, r, pol);
            }
            const double limit = 2.0 * (std::log(k) + 1.0) * opt * 1.05;
            worst_marking = std::max(worst_marking, opt > 0 ? (sum / 500.0) / opt : 0.0);
            if (sum / 500.0 > limit) v.fail("marking k=" + std::to_string(k));
        }
    double worst_prr = kInf;
    for (int inst = 0; inst < 12; ++inst) {
        const orra::OrraParams prm{1 + inst % 3, 1 + (inst / 3) % 3};
        const orra::OrraProblem p(prm);
        const auto r = masks(gen, prm.n, 12);
        const orra::Availability w0(static_cast<std::size_t>(prm.n), 1);
        const double opt = orra::orra_offline_dp(prm, w0, 1, r).value;
        const orra::PrrOracle on(prm);
        double sum = 0;
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            auto pol = on.start(0, w0, seed);
            auto s = w0;
            for (std::size_t t = 0; t < r.size(); ++t) {
                const auto now = static_cast<Period>(t + 1);
                sum += p.apply(s, now, r[t], pol.act(now, r[t], s));
            }
        }
        if (opt > 0) worst_prr = std::min(worst_prr, sum / 500.0 / opt);
        if (sum / 500.0 < 0.5 * opt) v.fail("prr instance " + std::to_string(inst));
    }
    info << "worst marking mean/opt " << format_number(worst_marking) << ", worst prr mean/opt "
         << format_number(worst_prr);
    v.detail += (v.detail.empty() ? "" : "; ") + info.str();
    return v;
}

Verdict criterion3() {
    Verdict v;
    Rng rng(derive_seed(11, {5}));
    const int N = 1000;
    double oltq_inf = 0, ks_inf = 0, orra_inf = 0;
    int lip_violations = 0;
    // OLTQ: influence <= 2 ell, Lipschitz (1, ell) on Opt.
    for (int i = 0; i < N; ++i) {
        const int ell = pick(rng, 2, 3);
        const oltq::OltqProblem p(ell);
        const int m = pick(rng, 1, 3);
        InfluenceSample<oltq::OltqProblem> smp{oltq_prefix(p, rng, m), oltq_prefix(p, rng, m),
                                               arrivals(rng, ell, pick(rng, 1, 4))};
        const double g = check_bounded_influence<oltq::OltqProblem>(p, [&](Rng&) { return smp; }, 1, rng);
        oltq_inf = std::max(oltq_inf, g / (2.0 * ell));
        LipschitzSample<oltq::OltqProblem> ls{oltq_prefix(p, rng, pick(rng, 0, 2)), pick(rng, 0, ell),
                                              pick(rng, 0, ell), arrivals(rng, ell, pick(rng, 0, 3)), {}};
        lip_violations += check_lipschitz<oltq::OltqProblem>(p, [&](Rng&) { return ls; }, 1, rng, LipschitzMode::opt)
                              .violations;
    }
    // k-server: influence <= k, strong Lipschitz (2, 2).
    for (int i = 0; i < N; ++i) {
        const int n = pick(rng, 2, 4), k = pick(rng, 1, 3);
        const auto m = dyadic_metric(rng, n);
        const kserver::KServerProblem p(m, servers(rng, n, k));
        auto pre = [&](int len) {
            const auto r = points(rng, n, len);
            std::vector<kserver::Action> a;
            for (int t = 0; t < len; ++t) a.push_back(pick(rng, 0, k - 1));
            return record(p, std::span<const kserver::Request>(r), std::span<const kserver::Action>(a));
        };
        const int len = pick(rng, 1, 4);
        InfluenceSample<kserver::KServerProblem> smp{pre(len), pre(len), points(rng, n, pick(rng, 1, 5))};
        const double g = check_bounded_influence<kserver::KServerProblem>(p, [&](Rng&) { return smp; }, 1, rng);
        ks_inf = std::max(ks_inf, g / k);
        LipschitzSample<kserver::KServerProblem> ls;
        ls.prefix = pre(pick(rng, 0, 2));
        ls.e = points(rng, n, 1)[0];
        ls.e_prime = points(rng, n, 1)[0];
        ls.suffix = points(rng, n, pick(rng, 0, 6));
        for (std::size_t t = 0; t <= ls.suffix.size(); ++t) ls.actions.push_back(pick(rng, 0, k - 1));
        lip_violations += check_lipschitz<kserver::KServerProblem>(p, [&](Rng&) { return ls; }, 1, rng,
                                                                   LipschitzMode::strong)
                              .violations;
    }
    // ORRA: influence <= d, strong Lipschitz (1, 1).
    for (int i = 0; i < N; ++i) {
        const orra::OrraParams prm{pick(rng, 1, 3), pick(rng, 1, 3)};
        const orra::OrraProblem p(prm);
        auto pre = [&](int len) {
            const auto r = masks(rng, prm.n, len);
            std::vector<orra::Action> a;
            for (int t = 0; t < len; ++t) a.push_back(pick(rng, 0, prm.n));
            return record(p, std::span<const orra::Request>(r), std::span<const orra::Action>(a));
        };
        const int len = pick(rng, 1, 4);
        InfluenceSample<orra::OrraProblem> smp{pre(len), pre(len), masks(rng, prm.n, pick(rng, 1, 6))};
        const double g = check_bounded_influence<orra::OrraProblem>(p, [&](Rng&) { return smp; }, 1, rng);
        orra_inf = std::max(orra_inf, g / prm.d);
        LipschitzSample<orra::OrraProblem> ls;
        ls.prefix = pre(pick(rng, 0, 2));
        ls.e = masks(rng, prm.n, 1)[0];
        ls.e_prime = masks(rng, prm.n, 1)[0];
        ls.suffix = masks(rng, prm.n, pick(rng, 0, 7));
        for (std::size_t t = 0; t <= ls.suffix.size(); ++t) ls.actions.push_back(pick(rng, 0, prm.n));
        lip_violations +=
            check_lipschitz<orra::OrraProblem>(p, [&](Rng&) { return ls; }, 1, rng, LipschitzMode::strong).violations;
    }
    if (oltq_inf > 1 || ks_inf > 1 || orra_inf > 1) v.fail("influence above its constant");
    if (lip_violations) v.fail(std::to_string(lip_violations) + " Lipschitz violations");
    std::ostringstream info;
    info << "max influence / constant: oltq " << format_number(oltq_inf) << ", kserver " << format_number(ks_inf)
         << ", orra " << format_number(orra_inf) << "; 1000 pairs per application";
    v.detail += (v.detail.empty() ? "" : "; ") + info.str();
    return v;
}

struct SwitchTally {
    long runs = 0;
    long violations = 0;
    void add(const CompetitiveReport& r) {
        ++runs;
        if (r.switches_to_conservative > 1.0 + r.eta * r.b * r.phi_star / (2.0 * r.c) + 1e-9) ++violations;
    }
};

Verdict criterion4(SwitchTally& tally) {
    Verdict v;
    Rng rng(derive_seed(11, {6}));
    long oltq_runs = 0, phases = 0, skipped = 0;
    for (int i = 0; i < 500; ++i) {
        const bool small = i % 5 != 0;
        const int ell = small ? 2 : pick(rng, 3, 6);
        const int T = small ? pick(rng, 120, 300) : pick(rng, 200, 600);
        oltq::Sequence reality{arrivals(rng, ell, T), std::nullopt}, pred = reality;
        const double noise = pick(rng, 0, 6) / 10.0;
        for (auto& x : pred.items)
            if (rng.bernoulli(noise)) x = pick(rng, 0, ell);
        const double eps = pick(rng, 6, 9) / 20.0;
        const auto res = oltq::adaswitch_oltq(ell, reality, pred, eps);
        const auto& rep = res.report;
        tally.add(rep);
        ++oltq_runs;
        if (rep.ratio) {
            if (rep.bound_T1 && *rep.ratio < *rep.bound_T1 - 1e-12) v.fail("oltq run " + std::to_string(i) + " below T1");
            if (rep.bound_app && *rep.ratio < *rep.bound_app - 1e-12) v.fail("oltq run " + std::to_string(i) + " below T5");
        }
        if (!small) continue;
        // Regret of every predictive phase against its own window optimum.
        const oltq::OltqProblem p(ell);
        const double L = ell, cap = rep.c / rep.b;
        for (std::size_t e = 0; e < rep.epochs.size(); ++e) {
            if (rep.epochs[e].to != Mode::predictive) continue;
            const Period tau = rep.epochs[e].period;
            const Period end = e + 1 < rep.epochs.size() ? rep.epochs[e + 1].period - 1 : rep.horizon;
            if (end < tau) continue;
            Trajectory<oltq::OltqProblem> head;
            for (Period t = 1; t < tau; ++t)
                head.push(res.trajectory.requests[static_cast<std::size_t>(t - 1)],
                          res.trajectory.actions[static_cast<std::size_t>(t - 1)], 0.0);
            const auto s = replay(p, head);
            const auto w = window_of(reality.items, tau, end, 0);
            double val = 0, dist = 0;
            for (Period t = tau; t <= end; ++t) {
                val += res.trajectory.rewards[static_cast<std::size_t>(t - 1)];
                dist += std::min(p.distance(request_at(reality.items, t, 0), request_at(pred.items, t, 0)), cap);
            }
            double opt;
            try {
                opt = brute_force_window(p, s, tau, std::span<const int>(w)).value;
            } catch (const SearchTooLarge&) {
                ++skipped;
                continue;
            }
            ++phases;
            if (val < opt - 2.0 * rep.b * L * dist - rep.c * L - 1e-9) v.fail("regret in oltq run " + std::to_string(i));
        }
    }
    if (phases == 0) v.fail("no predictive phase was checked");

    // Caching (randomized): mean ratio over 200 seeds within the bound + 0.02.
    std::ostringstream info;
    for (int inst = 0; inst < 3; ++inst) {
        const int k = 2 + inst;
        const auto m = kserver::Metric::uniform(k + 3);
        kserver::Sequence r{points(rng, k + 3, 60, false), std::nullopt}, pred = r;
        for (auto& x : pred.items)
            if (rng.bernoulli(0.15 * inst)) x = pick(rng, 0, k + 2);
        kserver::ServerConfig s0(static_cast<std::size_t>(k));
        std::iota(s0.begin(), s0.end(), 0);
        double sum = 0, bound = 0;
        int n = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const auto res = kserver::adaswitch_kse(m, s0, r, pred, -1.0, kserver::Variant::caching, seed);
            tally.add(res.report);
            if (!res.report.ratio || !res.report.bound_app) continue;
            sum += *res.report.ratio;
            bound = *res.report.bound_app;
            ++n;
        }
        if (n == 0 || sum / n > bound + 0.02) v.fail("caching instance " + std::to_string(inst));
        info << "caching k=" << k << " mean " << format_number(n ? sum / n : 0) << " <= " << format_number(bound)
             << "; ";
    }
    // ORRA (randomized): mean ratio over 200 seeds at least the bound - 0.02.
    for (int inst = 0; inst < 3; ++inst) {
        const orra::OrraParams prm{2, 2 + inst % 2};
        orra::Sequence r{masks(rng, prm.n, 40), std::nullopt}, pred = r;
        for (auto& x : pred.items)
            if (rng.bernoulli(0.1 * inst)) x = static_cast<orra::Request>(rng.below(1u << prm.n));
        orra::OrraSettings st;
        st.eta = 0.5;
        st.epsilon = 0.1;
        st.monte_carlo_cap = 200;
        double sum = 0, bound = 0;
        int n = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            st.seed = seed;
            const auto res = orra::adaswitch_orra(prm, r, pred, st);
            tally.add(res.report);
            if (!res.report.ratio || !res.report.bound_app) continue;
            sum += *res.report.ratio;
            bound = *res.report.bound_app;
            ++n;
        }
        if (n == 0 || sum / n < bound - 0.02) v.fail("orra instance " + std::to_string(inst));
        info << "orra mean " << format_number(n ? sum / n : 0) << " >= " << format_number(bound) << "; ";
    }
    info << oltq_runs << " oltq runs, " << phases << " predictive phases checked, " << skipped << " too large";
    v.detail += (v.detail.empty() ? "" : "; ") + info.str();
    return v;
}

Verdict criterion5(const SwitchTally& tally) {
    Verdict v;
    if (tally.violations) v.fail(std::to_string(tally.violations) + " runs over the bound");
    if (tally.runs == 0) v.fail("no runs");
    v.detail += (v.detail.empty() ? "" : "; ") + std::to_string(tally.runs) + " runs";
    return v;
}

using Table = std::vector<harness::Aggregate>;

double mean_at(const Table& t, const std::string& alg, double x) {
    for (const auto& a : t)
        if (a.algorithm == alg && std::abs(a.sweep_value - x) < 1e-12) return a.mean_ratio;
    throw std::runtime_error("missing aggregate for " + alg);
}

std::vector<double> xs(const Table& t, const std::string& alg) {
    std::vector<double> out;
    for (const auto& a : t)
        if (a.algorithm == alg) out.push_back(a.sweep_value);
    return out;
}

Verdict criterion6(const std::string& spec_dir) {
    Verdict v;
    std::ostringstream info;
    const std::string ada = "AdaSwitch-OLTQ", qf = "Q-FRAC*", st = "Strengthened (Z=4)";
    auto run = [&](const std::string& name) {
        const auto table = harness::run_experiment(harness::load_spec(spec_dir + "/" + name));
        for (const auto& r : table.rows)
            if (r.error) v.fail(name + ": row error " + *r.error);
        return table.aggregates;
    };
    {
        const auto t = run("consistency.spec");
        const double eta = oltq::eta_oltq(30);
        double prev = kInf;
        for (double r : xs(t, ada)) {
            const double a = mean_at(t, ada, r), q = mean_at(t, qf, r), s = mean_at(t, st, r);
            if (a > prev + 1e-12) v.fail("(a) consistency increases at robustness " + format_number(r));
            if (!(a > r)) v.fail("(a) consistency not above eta - epsilon at " + format_number(r));
            if (r <= 0.5 + 1e-12 && !(a > q)) v.fail("(a) not above Q-FRAC* at " + format_number(r));
            if (s < std::max(a, q) - 0.01) v.fail("(a) strengthened below both curves at " + format_number(r));
            prev = a;
        }
        info << "(a) eta=" << format_number(eta) << " ok=" << (v.pass ? "yes" : "no") << "; ";
    }
    {
        const auto t = run("length.spec");
        double prev = -kInf;
        for (double T : xs(t, ada)) {
            const double a = mean_at(t, ada, T);
            if (a < prev - 0.01) v.fail("(b) consistency drops at T=" + format_number(T));
            prev = std::max(prev, a);
        }
        info << "(b) " << xs(t, ada).size() << " lengths; ";
    }
    {
        const auto t = run("model2.spec");
        int wins = 0, points = 0;
        for (double r : xs(t, ada)) {
            ++points;
            wins += mean_at(t, ada, r) >= mean_at(t, qf, r);
        }
        if (points == 0 || wins < 0.9 * points) v.fail("(c) AdaSwitch ahead at only " + std::to_string(wins));
        info << "(c) ahead at " << wins << "/" << points << " grid points";
    }
    v.detail += (v.detail.empty() ? "" : "; ") + info.str();
    return v;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Verdict criterion7(const std::string& cli, const std::string& spec_dir) {
    Verdict v;
    const fs::path base = fs::temp_directory_path() / ("adaswitch_acceptance_" + std::to_string(::getpid()));
    std::string out[2];
    for (int i = 0; i < 2; ++i) {
        const fs::path dir = base / std::to_string(i);
        const std::string cmd = "\"" + cli + "\" run --spec \"" + spec_dir + "/model2.spec\" --out \"" + dir.string() +
                                "\" --seeds 5 --seed 99 --format csv > /dev/null";
        if (std::system(cmd.c_str()) != 0) v.fail("CLI exited nonzero");
        out[i] = slurp(dir / "rows.csv");
    }
    fs::remove_all(base);
    if (out[0].empty()) v.fail("empty CSV");
    if (out[0] != out[1]) v.fail("CSV differs between invocations");
    v.detail += (v.detail.empty() ? "" : "; ") + std::to_string(out[0].size()) + " bytes compared";
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <cli-binary> <spec-dir>\n";
        return 2;
    }
    const std::string cli = argv[1], spec_dir = argv[2];
    int failed = 0;
    auto report = [&](int id, const std::string& name, const std::function<Verdict()>& body) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = body();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !v.pass;
        std::printf("%s criterion %d %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), secs,
                    v.detail.c_str());
        std::fflush(stdout);
    };
    const auto oltq_cases = oltq_suite();
    const auto ks_cases = kserver_suite();
    SwitchTally tally;
    report(1, "offline-oracle exactness", [&] { return criterion1(oltq_cases, ks_cases); });
    report(2, "online-oracle guarantees", [&] { return criterion2(oltq_cases, ks_cases); });
    report(3, "influence and Lipschitz constants", [&] { return criterion3(); });
    report(4, "adaswitch ratio bounds and phase regret", [&] { return criterion4(tally); });
    report(5, "switch-count bound", [&] { return criterion5(tally); });
    report(6, "experiment reproduction", [&] { return criterion6(spec_dir); });
    report(7, "CLI determinism", [&] { return criterion7(cli, spec_dir); });
    return failed ? 1 : 0;
}
