#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "adaswitch/brute_force.hpp"
#include "adaswitch/kserver.hpp"

using namespace adaswitch;
using namespace adaswitch::kserver;

namespace {

Metric line_metric(std::vector<double> xs) {
    std::vector<std::string> names;
    std::vector<double> d;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        names.push_back("p" + std::to_string(i));
        for (double y : xs) d.push_back(std::abs(xs[i] - y));
    }
    return Metric(names, d);
}

// Shortest paths over random weights in {1/8, ..., 1}; every sum stays dyadic.
Metric random_metric(Rng& rng, int n) {
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> d(un * un, 0.0);
    for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = i + 1; j < un; ++j)
            d[i * un + j] = d[j * un + i] = (1.0 + static_cast<double>(rng.below(8))) / 8.0;
    for (std::size_t m = 0; m < un; ++m)
        for (std::size_t i = 0; i < un; ++i)
            for (std::size_t j = 0; j < un; ++j)
                d[i * un + j] = std::min(d[i * un + j], d[i * un + m] + d[m * un + j]);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return Metric(names, d);
}

ServerConfig random_config(Rng& rng, int n, int k) {
    ServerConfig s(static_cast<std::size_t>(k));
    for (auto& x : s) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    return s;
}

std::vector<Request> random_requests(Rng& rng, int n, int len, bool with_null = true) {
    std::vector<Request> r(static_cast<std::size_t>(len));
    for (auto& x : r) {
        const auto v = rng.below(static_cast<std::uint64_t>(n + (with_null ? 1 : 0)));
        x = static_cast<int>(v) == n ? kBottom : static_cast<int>(v);
    }
    return r;
}

// Every assignment of non-null requests to servers.
double enumerate_opt(const Metric& m, const ServerConfig& s0, const std::vector<Request>& r) {
    std::vector<Request> live;
    for (Request e : r)
        if (e != kBottom) live.push_back(e);
    const int k = static_cast<int>(s0.size());
    std::size_t total = 1;
    for (std::size_t i = 0; i < live.size(); ++i) total *= static_cast<std::size_t>(k);
    double best = kInf;
    for (std::size_t code = 0; code < total; ++code) {
        ServerConfig s = s0;
        double c = 0.0;
        std::size_t x = code;
        for (Request e : live) {
            const auto i = x % static_cast<std::size_t>(k);
            x /= static_cast<std::size_t>(k);
            c += m(s[i], e);
            s[i] = e;
        }
        best = std::min(best, c);
    }
    return best;
}

double permutation_distance(const Metric& m, ServerConfig a, ServerConfig b) {
    std::sort(b.begin(), b.end());
    double best = kInf;
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) c += m(a[i], b[i]);
        best = std::min(best, c);
    } while (std::next_permutation(b.begin(), b.end()));
    return best;
}

double trajectory_cost(const Metric& m, ServerConfig s, const std::vector<Request>& r,
                       const std::vector<Action>& a) {
    double c = 0.0;
    for (std::size_t t = 0; t < r.size(); ++t) c += kserver_cost(m, s, r[t], a[t]), s[a[t]] = r[t] == kBottom ? s[a[t]] : r[t];
    return c;
}

std::vector<Action> run_wfa(const Metric& m, const ServerConfig& s0, const std::vector<Request>& r) {
    WfaPolicy pol(m, s0, 100'000);
    ServerConfig s = s0;
    std::vector<Action> a;
    for (std::size_t t = 0; t < r.size(); ++t) {
        a.push_back(pol.act(static_cast<Period>(t + 1), r[t], s));
        if (r[t] != kBottom) s[a.back()] = r[t];
    }
    return a;
}

}  // namespace

TEST(Metric, ValidatesAtLoad) {
    EXPECT_THROW(Metric({"a", "b"}, {0, 0.5, 0.4, 0}), std::invalid_argument);
    EXPECT_THROW(Metric({"a", "b", "c"}, {0, 0.1, 1, 0.1, 0, 0.1, 1, 0.1, 0}), std::invalid_argument);
    EXPECT_THROW(Metric({"a", "b"}, {0, 1.5, 1.5, 0}), std::invalid_argument);
    EXPECT_TRUE(Metric::uniform(4).is_uniform());
    EXPECT_FALSE(line_metric({0, 0.5, 1}).is_uniform());
    const Metric m = line_metric({0, 0.25});
    EXPECT_EQ(m(0, kBottom), 1.0);
    EXPECT_EQ(m(kBottom, kBottom), 0.0);
}

TEST(KServerCost, Examples) {
    const Metric m = line_metric({0, 0.4, 1});
    EXPECT_EQ(kserver_cost(m, {1, 2}, 1, 0), 0.0);
    EXPECT_DOUBLE_EQ(kserver_cost(m, {0, 2}, 1, 0), 0.4);
    EXPECT_EQ(kserver_cost(m, {0, 2}, kBottom, 1), 0.0);
}

TEST(OfflineKServer, Examples) {
    const Metric m = line_metric({0, 0.5, 1});
    EXPECT_DOUBLE_EQ(offline_kserver({0}, std::vector<Request>{1, 2}, m).cost, 1.0);
    EXPECT_DOUBLE_EQ(offline_kserver({0, 2}, std::vector<Request>{1}, m).cost, 0.5);
    EXPECT_EQ(offline_kserver({0, 2}, std::vector<Request>{0, 2, kBottom, 2, 0}, m).cost, 0.0);
    EXPECT_EQ(offline_kserver({0, 2}, std::vector<Request>{}, m).cost, 0.0);
}

TEST(OfflineKServer, MatchesEnumerationAndBruteForce) {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(4));
        const int k = 1 + static_cast<int>(rng.below(3));
        const int len = static_cast<int>(rng.below(8));
        const Metric m = random_metric(rng, n);
        const ServerConfig s0 = random_config(rng, n, k);
        const auto r = random_requests(rng, n, len);
        const OfflineResult res = offline_kserver(s0, r, m);
        EXPECT_EQ(res.cost, enumerate_opt(m, s0, r)) << "trial " << trial;
        EXPECT_EQ(trajectory_cost(m, s0, r, res.actions), res.cost);
        const KServerProblem p(m, s0);
        Sequence seq{r, std::nullopt};
        EXPECT_EQ(brute_force_opt(p, seq).value, res.cost) << "trial " << trial;
    }
}

TEST(ConfigDistance, MatchesPermutationsAndIsAMetric) {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const int k = 1 + static_cast<int>(rng.below(4));
        const Metric m = random_metric(rng, n);
        const auto a = random_config(rng, n, k), b = random_config(rng, n, k),
                   c = random_config(rng, n, k);
        const double ab = config_distance(m, a, b);
        EXPECT_DOUBLE_EQ(ab, permutation_distance(m, a, b));
        EXPECT_DOUBLE_EQ(ab, config_distance(m, b, a));
        EXPECT_LE(config_distance(m, a, c), ab + config_distance(m, b, c) + 1e-12);
        ServerConfig shuffled = a;
        rng.shuffle(shuffled);
        EXPECT_EQ(config_distance(m, a, shuffled), 0.0);
    }
}

TEST(WorkFunction, RecursionMatchesDirectDefinition) {
    // w_t(X): cheapest lazy service of e_1..e_t, then transport to X.
    Rng rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(3));
        const int k = 1 + static_cast<int>(rng.below(3));
        const Metric m = random_metric(rng, n);
        const ServerConfig s0 = random_config(rng, n, k);
        const auto r = random_requests(rng, n, 1 + static_cast<int>(rng.below(5)), false);
        WorkFunctionTable table(m, s0);
        for (Request e : r) table.update(e);
        std::size_t total = 1;
        for (std::size_t i = 0; i < r.size(); ++i) total *= static_cast<std::size_t>(k);
        for (std::size_t x = 0; x < table.configs().size(); ++x) {
            double best = kInf;
            for (std::size_t code = 0; code < total; ++code) {
                ServerConfig s = s0;
                double c = 0.0;
                std::size_t y = code;
                for (Request e : r) {
                    const auto i = y % static_cast<std::size_t>(k);
                    y /= static_cast<std::size_t>(k);
                    c += m(s[i], e);
                    s[i] = e;
                }
                best = std::min(best, c + permutation_distance(m, s, table.configs()[x]));
            }
            EXPECT_NEAR(table.values()[x], best, 1e-12) << "trial " << trial;
        }
    }
}

TEST(WorkFunction, CapRaises) {
    EXPECT_THROW(WorkFunctionTable(Metric::uniform(30), ServerConfig{0, 1, 2, 3, 4}, 1000),
                 OracleTooLarge);
}

TEST(Wfa, CoveredRequestIsFree) {
    const Metric m = line_metric({0, 0.5, 1});
    WorkFunctionTable table(m, {0, 2});
    const WfaStep st = wfa_step(table, {0, 2}, {0, 2}, 2);
    EXPECT_EQ(st.cost, 0.0);
    EXPECT_EQ(st.server, 1);
    EXPECT_EQ(st.virtual_next, (ServerConfig{0, 2}));
}

TEST(Wfa, SingleServerFollowsRequests) {
    Rng rng(3);
    const Metric m = random_metric(rng, 5);
    const auto r = random_requests(rng, 5, 30);
    const auto a = run_wfa(m, {0}, r);
    double expect = 0.0;
    int pos = 0;
    for (Request e : r)
        if (e != kBottom) expect += m(pos, e), pos = e;
    EXPECT_EQ(trajectory_cost(m, {0}, r, a), expect);
}

TEST(Wfa, WithinTwoKMinusOneOfOpt) {
    Rng rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(4));
        const int k = 1 + static_cast<int>(rng.below(3));
        const Metric m = random_metric(rng, n);
        const ServerConfig s0 = random_config(rng, n, k);
        const auto r = random_requests(rng, n, static_cast<int>(rng.below(12)));
        const double opt = offline_kserver(s0, r, m).cost;
        const double wfa = trajectory_cost(m, s0, r, run_wfa(m, s0, r));
        EXPECT_LE(wfa, (2.0 * k - 1.0) * opt + 1e-12) << "trial " << trial;
    }
}

TEST(Lazy, ConversionNeverCostsMore) {
    // Multi-move policies as labelled configuration paths, each covering e_t.
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(4));
        const int k = 1 + static_cast<int>(rng.below(3));
        const Metric m = random_metric(rng, n);
        const ServerConfig s0 = random_config(rng, n, k);
        const auto r = random_requests(rng, n, 1 + static_cast<int>(rng.below(7)), false);
        std::vector<ServerConfig> path;
        ServerConfig cur = s0;
        double multi = 0.0;
        for (Request e : r) {
            ServerConfig next = random_config(rng, n, k);
            next[rng.below(static_cast<std::uint64_t>(k))] = e;
            for (std::size_t i = 0; i < next.size(); ++i) multi += m(cur[i], next[i]);
            path.push_back(next);
            cur = next;
        }
        const auto lazy = lazy_realize(m, s0, path, r);
        const double lazy_cost = trajectory_cost(m, s0, r, lazy);
        EXPECT_LE(lazy_cost, multi + 1e-12);
        EXPECT_GE(lazy_cost, offline_kserver(s0, r, m).cost);
    }
}

TEST(Observation, PrefixConditionedOptEqualsFreshStart) {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(3));
        const int k = 1 + static_cast<int>(rng.below(2));
        const Metric m = random_metric(rng, n);
        const KServerProblem p(m, random_config(rng, n, k));
        const auto pre_r = random_requests(rng, n, static_cast<int>(rng.below(4)));
        std::vector<Action> pre_a;
        for (std::size_t i = 0; i < pre_r.size(); ++i)
            pre_a.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(k))));
        const auto prefix = record(p, std::span<const Request>(pre_r), std::span<const Action>(pre_a));
        auto all = pre_r;
        const auto tail = random_requests(rng, n, static_cast<int>(rng.below(5)));
        all.insert(all.end(), tail.begin(), tail.end());
        Sequence seq{all, std::nullopt};
        const double conditioned = brute_force_opt(p, seq, &prefix).value;
        EXPECT_EQ(conditioned, offline_kserver(replay(p, prefix), tail, m).cost);
    }
}

TEST(InitialState, OptDifferenceBoundedByMatchedDisplacement) {
    Rng rng(51);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(4));
        const int k = 1 + static_cast<int>(rng.below(3));
        const Metric m = random_metric(rng, n);
        const ServerConfig a = random_config(rng, n, k), b = random_config(rng, n, k);
        const auto r = random_requests(rng, n, static_cast<int>(rng.below(7)));
        double disp = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) disp += m(a[i], b[i]);
        EXPECT_LE(std::abs(enumerate_opt(m, a, r) - enumerate_opt(m, b, r)), disp + 1e-12);
    }
}

TEST(Marking, Examples) {
    const Metric m = Metric::uniform(3);
    Rng rng(1);
    MarkingState st{{0}, {false}};
    EXPECT_TRUE(marking_step(st, 0, rng, m).hit);
    EXPECT_TRUE(st.marked[0]);
    for (int i = 0; i < 6; ++i) {
        const auto s = marking_step(st, i % 2 == 0 ? 1 : 0, rng, m);
        EXPECT_FALSE(s.hit);
        EXPECT_EQ(s.cost, 1.0);
    }
    MarkingState st2{{0, 1}, {false, false}};
    EXPECT_EQ(marking_step(st2, 1, rng, m).cost, 0.0);
    EXPECT_TRUE(st2.marked[1]);
    // The only unmarked slot is evicted.
    EXPECT_EQ(marking_step(st2, 2, rng, m).slot, 0);
    EXPECT_THROW(marking_step(st2, 2, rng, line_metric({0, 0.5})), std::logic_error);
}

TEST(Marking, MeanCostWithinHarmonicBound) {
    for (int k : {2, 3, 4}) {
        const Metric m = Metric::uniform(k + 2);
        Rng gen(100 + static_cast<std::uint64_t>(k));
        const auto r = random_requests(gen, k + 2, 40, false);
        ServerConfig s0(static_cast<std::size_t>(k));
        std::iota(s0.begin(), s0.end(), 0);
        const double opt = offline_kserver(s0, r, m).cost;
        double sum = 0.0;
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            MarkingPolicy pol(m, s0, seed);
            ServerConfig s = s0;
            for (std::size_t t = 0; t < r.size(); ++t) {
                const Action a = pol.act(static_cast<Period>(t + 1), r[t], s);
                sum += kserver_cost(m, s, r[t], a);
                s[a] = r[t];
            }
        }
        EXPECT_LE(sum / 500.0, 2.0 * (std::log(k) + 1.0) * opt * 1.05) << "k=" << k;
    }
}

TEST(AdaSwitchKse, StaysInInitialPhase) {
    const Metric m = line_metric({0, 0.5, 1});
    Sequence r{{0, 2, kBottom, 0, 2}, std::nullopt};
    const auto res = adaswitch_kse(m, {0, 2}, r, r, 1.0, Variant::general);
    EXPECT_EQ(res.report.val, 0.0);
    EXPECT_TRUE(res.report.has_flag("ratio_undefined"));
    EXPECT_EQ(res.report.switches(), 0);
}

TEST(AdaSwitchKse, PerfectPredictionCachingMeetsBound) {
    const int k = 3;
    const Metric m = Metric::uniform(6);
    Rng gen(9);
    Sequence r{random_requests(gen, 6, 60, false), std::nullopt};
    double sum = 0.0;
    const int seeds = 200;
    double bound = 0.0;
    for (int seed = 0; seed < seeds; ++seed) {
        const auto res = adaswitch_kse(m, {0, 1, 2}, r, r, -1.0, Variant::caching,
                                       static_cast<std::uint64_t>(seed));
        ASSERT_TRUE(res.report.ratio);
        ASSERT_TRUE(res.report.bound_app);
        sum += *res.report.ratio;
        bound = *res.report.bound_app;
        EXPECT_DOUBLE_EQ(bound, 1.0 + std::min(4.0 * (std::log(k) + 1), 56.0 * k * (std::log(k) + 1) / res.report.opt));
    }
    EXPECT_LE(sum / seeds, bound);
}

TEST(AdaSwitchKse, GeneralMeanRatioWithinTheoremMinBranch) {
    Rng gen(77);
    double sum = 0.0;
    int runs = 0;
    const double eps = 1.0;
    for (int i = 0; i < 200; ++i) {
        const Metric m = random_metric(gen, 4);
        const ServerConfig s0{0, 1};
        Sequence r{random_requests(gen, 4, 12), std::nullopt};
        Sequence pred = r;
        for (auto& x : pred.items)
            if (gen.bernoulli(0.2)) x = static_cast<int>(gen.below(4));
        const auto res = adaswitch_kse(m, s0, r, pred, eps, Variant::general);
        if (!res.report.ratio) continue;
        EXPECT_LE(res.report.switches_to_conservative,
                  1.0 + res.report.eta * 2.0 * res.report.phi_star / (2.0 * 2.0) + 1e-9);
        sum += *res.report.ratio;
        ++runs;
    }
    ASSERT_GT(runs, 100);
    EXPECT_LE(sum / runs, 1.0 + eta_kse(2) + eps + 0.02);
}

TEST(KServerFiles, RoundTrip) {
    std::istringstream mf("3 2\na b c\n0 0.5 1\n0.5 0 0.5\n1 0.5 0\n");
    const MetricFile f = read_metric(mf);
    EXPECT_EQ(f.k, 2);
    EXPECT_EQ(f.metric(0, 2), 1.0);
    std::istringstream rf("a\n-\nc\n");
    const Sequence s = read_requests(rf, f.metric);
    EXPECT_EQ(s.items, (std::vector<Request>{0, kBottom, 2}));
    std::ostringstream out;
    write_requests(out, s, f.metric);
    EXPECT_EQ(out.str(), "a\n-\nc\n");
    std::istringstream uf("4 2 uniform w x y z\n");
    EXPECT_TRUE(read_metric(uf).metric.is_uniform());
    std::istringstream bad("2 1\na b\n0 2\n2 0\n");
    EXPECT_THROW(read_metric(bad), std::runtime_error);
    std::istringstream unknown("q\n");
    EXPECT_THROW(read_requests(unknown, f.metric), std::runtime_error);
}
