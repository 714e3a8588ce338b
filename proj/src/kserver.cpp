#include "adaswitch/kserver.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "adaswitch/bounds.hpp"

namespace adaswitch::kserver {

// ---------------------------------------------------------------- metric

Metric::Metric(std::vector<std::string> names, std::vector<double> dist)
    : n_(static_cast<int>(names.size())), names_(std::move(names)), dist_(std::move(dist)) {
    const auto n = static_cast<std::size_t>(n_);
    if (n == 0) throw std::invalid_argument("metric needs at least one point");
    if (dist_.size() != n * n) throw std::invalid_argument("distance matrix must be n x n");
    uniform_ = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double d = dist_[i * n + j];
            if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("distances must lie in [0, 1]");
            if (i == j && d != 0.0) throw std::invalid_argument("diagonal must be zero");
            if (d != dist_[j * n + i]) throw std::invalid_argument("distance matrix must be symmetric");
            if (i != j && d != 1.0) uniform_ = false;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t m = 0; m < n; ++m)
                if (dist_[i * n + j] > dist_[i * n + m] + dist_[m * n + j] + 1e-12)
                    throw std::invalid_argument("triangle inequality violated at (" + names_[i] +
                                                ", " + names_[m] + ", " + names_[j] + ")");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (names_[i] == names_[j]) throw std::invalid_argument("duplicate point id " + names_[i]);
}

Metric Metric::uniform(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
    const auto un = static_cast<std::size_t>(std::max(n, 0));
    std::vector<double> d(un * un, 1.0);
    for (std::size_t i = 0; i < un; ++i) d[i * un + i] = 0.0;
    return Metric(std::move(names), std::move(d));
}

double Metric::operator()(int a, int b) const {
    if (a == b) return 0.0;
    if (a == kBottom || b == kBottom) return 1.0;
    return dist_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) +
                 static_cast<std::size_t>(b)];
}

int Metric::index_of(const std::string& name) const {
    for (int i = 0; i < n_; ++i)
        if (names_[static_cast<std::size_t>(i)] == name) return i;
    return -1;
}

// ---------------------------------------------------------------- matching

std::vector<int> hungarian(const std::vector<double>& cost, int n) {
    const double inf = std::numeric_limits<double>::infinity();
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> u(un + 1, 0.0), v(un + 1, 0.0), minv(un + 1);
    std::vector<std::size_t> p(un + 1, 0), way(un + 1, 0);
    std::vector<char> used(un + 1);
    auto a = [&](std::size_t i, std::size_t j) { return cost[(i - 1) * un + (j - 1)]; };
    for (std::size_t i = 1; i <= un; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= un; ++j) {
                if (used[j]) continue;
                const double cur = a(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= un; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> col(un, -1);
    for (std::size_t j = 1; j <= un; ++j)
        if (p[j]) col[p[j] - 1] = static_cast<int>(j - 1);
    return col;
}

double config_distance(const Metric& m, std::span<const int> a, std::span<const int> b,
                       std::vector<int>* assignment) {
    if (a.size() != b.size()) throw std::invalid_argument("configurations differ in size");
    const std::size_t k = a.size();
    std::vector<double> cost(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) cost[i * k + j] = m(a[i], b[j]);
    const std::vector<int> col = hungarian(cost, static_cast<int>(k));
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) total += cost[i * k + static_cast<std::size_t>(col[i])];
    if (assignment) *assignment = col;
    return total;
}

// ---------------------------------------------------------------- problem

KServerProblem::KServerProblem(const Metric& metric, ServerConfig initial)
    : metric_(&metric), initial_(std::move(initial)) {
    if (initial_.empty()) throw std::invalid_argument("k must be at least 1");
    for (int x : initial_)
        if (x < 0 || x >= metric.size()) throw std::invalid_argument("server position is not a point");
}

ProblemTraits KServerProblem::traits() const {
    ProblemTraits t;
    t.reward_bound = 1.0;
    t.lipschitz_u = 2.0;
    t.lipschitz_v = 2.0;
    t.influence_f = k();
    t.objective = Objective::minimize;
    return t;
}

double kserver_cost(const Metric& m, const ServerConfig& positions, Request e, Action a) {
    if (e == kBottom) return 0.0;
    return m(positions[static_cast<std::size_t>(a)], e);
}

double KServerProblem::apply(State& s, Period, const Request& e, const Action& a) const {
    if (e == kBottom) return 0.0;
    auto& pos = s[static_cast<std::size_t>(a)];
    const double c = (*metric_)(pos, e);
    pos = e;
    return c;
}

std::vector<Action> KServerProblem::candidate_actions(const State&, Period, const Request& e) const {
    if (e == kBottom) return {0};
    std::vector<Action> out(static_cast<std::size_t>(k()));
    for (int i = 0; i < k(); ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
}

void KServerProblem::check_action(Period t, const Request& e, const Action& a) const {
    if (a < 0 || a >= k()) throw InvalidAction(t, "server index " + std::to_string(a) + " out of range");
    if (e != kBottom && (e < 0 || e >= metric_->size())) throw InvalidAction(t, "request is not a point");
}

Period KServerProblem::last_active_period(const State&, Period start, std::span<const Request> w) const {
    for (std::size_t i = w.size(); i-- > 0;)
        if (w[i] != kBottom) return start + static_cast<Period>(i);
    return start - 1;
}

Period KServerProblem::estimate_horizon(Period i, std::span<const Request> prediction) const {
    for (std::size_t t = prediction.size(); t-- > 0;)
        if (prediction[t] != kBottom) return std::max(i, static_cast<Period>(t) + 1);
    return i;
}

// ---------------------------------------------------------------- flow

namespace {

struct FlowGraph {
    struct Arc {
        int to;
        int cap;
        double cost;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> out;

    explicit FlowGraph(int n) : out(static_cast<std::size_t>(n)) {}

    void add(int from, int to, double cost) {
        out[static_cast<std::size_t>(from)].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({to, 1, cost});
        out[static_cast<std::size_t>(to)].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({from, 0, -cost});
    }
};

}  // namespace

OfflineResult offline_kserver(const ServerConfig& config, std::span<const Request> window,
                              const Metric& metric) {
    const int k = static_cast<int>(config.size());
    std::vector<int> served;  // window indices of non-null requests
    for (std::size_t i = 0; i < window.size(); ++i)
        if (window[i] != kBottom) served.push_back(static_cast<int>(i));
    const int W = static_cast<int>(served.size());
    const double B = W + k + 1.0;

    // Nodes are numbered in topological order.
    const int src = 0;
    auto srv = [&](int i) { return 1 + i; };
    auto in = [&](int j) { return 1 + k + 2 * j; };
    auto outn = [&](int j) { return 2 + k + 2 * j; };
    const int sink = 1 + k + 2 * W;
    const int N = sink + 1;

    FlowGraph g(N);
    for (int i = 0; i < k; ++i) {
        g.add(src, srv(i), 0.0);
        for (int j = 0; j < W; ++j)
            g.add(srv(i), in(j), metric(config[static_cast<std::size_t>(i)],
                                        window[static_cast<std::size_t>(served[static_cast<std::size_t>(j)])]));
        g.add(srv(i), sink, 0.0);
    }
    for (int j = 0; j < W; ++j) {
        const int rj = window[static_cast<std::size_t>(served[static_cast<std::size_t>(j)])];
        g.add(in(j), outn(j), -B);
        for (int j2 = j + 1; j2 < W; ++j2)
            g.add(outn(j), in(j2),
                  metric(rj, window[static_cast<std::size_t>(served[static_cast<std::size_t>(j2)])]));
        g.add(outn(j), sink, 0.0);
    }

    const double inf = std::numeric_limits<double>::infinity();
    const auto uN = static_cast<std::size_t>(N);
    std::vector<double> pot(uN, inf);
    pot[0] = 0.0;
    for (int v = 0; v < N; ++v) {
        if (pot[static_cast<std::size_t>(v)] == inf) continue;
        for (int id : g.out[static_cast<std::size_t>(v)]) {
            const auto& a = g.arcs[static_cast<std::size_t>(id)];
            if (a.cap > 0 && pot[static_cast<std::size_t>(v)] + a.cost < pot[static_cast<std::size_t>(a.to)])
                pot[static_cast<std::size_t>(a.to)] = pot[static_cast<std::size_t>(v)] + a.cost;
        }
    }
    for (double& x : pot)
        if (x == inf) x = 0.0;

    std::vector<double> dist(uN);
    std::vector<int> via(uN);
    std::vector<char> done(uN);
    for (int unit = 0; unit < k; ++unit) {
        std::fill(dist.begin(), dist.end(), inf);
        std::fill(via.begin(), via.end(), -1);
        std::fill(done.begin(), done.end(), 0);
        dist[0] = 0.0;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.push({0.0, src});
        while (!pq.empty()) {
            const auto [d, v] = pq.top();
            pq.pop();
            const auto uv = static_cast<std::size_t>(v);
            if (done[uv]) continue;
            done[uv] = 1;
            for (int id : g.out[uv]) {
                const auto& a = g.arcs[static_cast<std::size_t>(id)];
                if (a.cap <= 0) continue;
                const auto ut = static_cast<std::size_t>(a.to);
                const double rc = std::max(0.0, a.cost + pot[uv] - pot[ut]);
                if (d + rc < dist[ut]) {
                    dist[ut] = d + rc;
                    via[ut] = id;
                    pq.push({dist[ut], a.to});
                }
            }
        }
        if (dist[static_cast<std::size_t>(sink)] == inf)
            throw std::logic_error("k-server flow network is infeasible");
        for (std::size_t v = 0; v < uN; ++v)
            if (dist[v] < inf) pot[v] += dist[v];
        for (int v = sink; v != src;) {
            const int id = via[static_cast<std::size_t>(v)];
            g.arcs[static_cast<std::size_t>(id)].cap -= 1;
            g.arcs[static_cast<std::size_t>(id ^ 1)].cap += 1;
            v = g.arcs[static_cast<std::size_t>(id ^ 1)].to;
        }
    }

    OfflineResult res;
    res.actions.assign(window.size(), 0);
    std::vector<char> covered(static_cast<std::size_t>(W), 0);
    auto next_of = [&](int v) {
        for (int id : g.out[static_cast<std::size_t>(v)])
            if ((id & 1) == 0 && g.arcs[static_cast<std::size_t>(id)].cap == 0)
                return g.arcs[static_cast<std::size_t>(id)].to;
        return sink;
    };
    for (int i = 0; i < k; ++i) {
        int v = next_of(srv(i));
        while (v != sink) {
            const int j = (v - 1 - k) / 2;
            covered[static_cast<std::size_t>(j)] = 1;
            res.actions[static_cast<std::size_t>(served[static_cast<std::size_t>(j)])] = i;
            v = next_of(outn(j));
        }
    }
    if (std::find(covered.begin(), covered.end(), 0) != covered.end())
        throw std::logic_error("k-server flow left a request unserved");

    ServerConfig s = config;
    for (std::size_t i = 0; i < window.size(); ++i) {
        if (window[i] == kBottom) continue;
        auto& pos = s[static_cast<std::size_t>(res.actions[i])];
        res.cost += metric(pos, window[i]);
        pos = window[i];
    }
    return res;
}

// ---------------------------------------------------------------- work function

namespace {

double multiset_count(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n + i - 1) / i;
    return std::round(c);
}

void enumerate_multisets(int n, int k, ServerConfig& cur, std::vector<ServerConfig>& out) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int x = cur.empty() ? 0 : cur.back(); x < n; ++x) {
        cur.push_back(x);
        enumerate_multisets(n, k, cur, out);
        cur.pop_back();
    }
}

ServerConfig sorted(ServerConfig c) {
    std::sort(c.begin(), c.end());
    return c;
}

}  // namespace

WorkFunctionTable::WorkFunctionTable(const Metric& m, const ServerConfig& start, std::size_t cap)
    : m_(&m), k_(static_cast<int>(start.size())) {
    const double count = multiset_count(m.size(), k_);
    if (count > static_cast<double>(cap))
        throw OracleTooLarge("work function needs " + std::to_string(static_cast<long long>(count)) +
                             " configurations, cap is " + std::to_string(cap));
    ServerConfig cur;
    enumerate_multisets(m.size(), k_, cur, configs_);
    w_.reserve(configs_.size());
    for (std::size_t i = 0; i < configs_.size(); ++i) {
        index_.emplace(configs_[i], static_cast<int>(i));
        w_.push_back(config_distance(m, start, configs_[i]));
    }
}

int WorkFunctionTable::index(const ServerConfig& s) const {
    const auto it = index_.find(s);
    if (it == index_.end()) throw std::out_of_range("configuration outside the metric");
    return it->second;
}

double WorkFunctionTable::value(const ServerConfig& sorted_config) const {
    return w_[static_cast<std::size_t>(index(sorted_config))];
}

void WorkFunctionTable::update(Request e) {
    if (e == kBottom) return;
    std::vector<double> next(w_.size());
    ServerConfig y;
    for (std::size_t i = 0; i < configs_.size(); ++i) {
        const ServerConfig& x = configs_[i];
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (j > 0 && x[j] == x[j - 1]) continue;
            y = x;
            y[j] = e;
            std::sort(y.begin(), y.end());
            best = std::min(best, w_[static_cast<std::size_t>(index(y))] + (*m_)(x[j], e));
        }
        next[i] = best;
    }
    w_ = std::move(next);
}

Action lazy_serve(const Metric& m, const ServerConfig& actual, const ServerConfig& virtual_next,
                  Request e) {
    const auto k = static_cast<int>(actual.size());
    for (int i = 0; i < k; ++i)
        if (actual[static_cast<std::size_t>(i)] == e) return i;
    Action best = -1;
    double cost = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        if (virtual_next[static_cast<std::size_t>(i)] != e) continue;
        const double c = m(actual[static_cast<std::size_t>(i)], e);
        if (c < cost) {
            cost = c;
            best = i;
        }
    }
    if (best < 0) throw std::invalid_argument("virtual configuration does not cover the request");
    return best;
}

std::vector<Action> lazy_realize(const Metric& m, const ServerConfig& start,
                                 std::span<const ServerConfig> path, std::span<const Request> requests) {
    ServerConfig actual = start;
    std::vector<Action> out;
    for (std::size_t t = 0; t < requests.size(); ++t) {
        const Request e = requests[t];
        if (e == kBottom) {
            out.push_back(0);
            continue;
        }
        const Action a = lazy_serve(m, actual, path[t], e);
        actual[static_cast<std::size_t>(a)] = e;
        out.push_back(a);
    }
    return out;
}

WfaStep wfa_step(WorkFunctionTable& table, const ServerConfig& virtual_positions,
                 const ServerConfig& actual_positions, Request e) {
    const Metric& m = table.metric();
    if (e == kBottom) return {virtual_positions, 0, 0.0};
    table.update(e);
    const ServerConfig v_sorted = sorted(virtual_positions);
    const auto& cfgs = table.configs();
    const auto& w = table.values();
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        if (!std::binary_search(cfgs[i].begin(), cfgs[i].end(), e)) continue;
        const double score = w[i] + config_distance(m, cfgs[i], v_sorted);
        if (score < best) {
            best = score;
            arg = i;
        }
    }
    std::vector<int> assign;
    config_distance(m, virtual_positions, cfgs[arg], &assign);
    WfaStep st;
    st.virtual_next.resize(virtual_positions.size());
    for (std::size_t i = 0; i < assign.size(); ++i)
        st.virtual_next[i] = cfgs[arg][static_cast<std::size_t>(assign[i])];

    st.server = lazy_serve(m, actual_positions, st.virtual_next, e);
    st.cost = m(actual_positions[static_cast<std::size_t>(st.server)], e);
    return st;
}

WfaPolicy::WfaPolicy(const Metric& m, const ServerConfig& start, std::size_t cap)
    : table_(m, start, cap), virtual_(start) {}

Action WfaPolicy::act(Period, const Request& e, const ServerConfig& actual) {
    if (e == kBottom) return 0;
    WfaStep st = wfa_step(table_, virtual_, actual, e);
    virtual_ = std::move(st.virtual_next);
    return st.server;
}

// ---------------------------------------------------------------- marking

MarkingStep marking_step(MarkingState& st, Request e, Rng& rng, const Metric& m) {
    if (!m.is_uniform()) throw std::logic_error("marking requires the uniform metric");
    if (e == kBottom) return {0, true, 0.0};
    for (std::size_t i = 0; i < st.cache.size(); ++i)
        if (st.cache[i] == e) {
            st.marked[i] = true;
            return {static_cast<Action>(i), true, 0.0};
        }
    if (std::all_of(st.marked.begin(), st.marked.end(), [](bool b) { return b; }))
        std::fill(st.marked.begin(), st.marked.end(), false);
    std::vector<int> unmarked;
    for (std::size_t i = 0; i < st.marked.size(); ++i)
        if (!st.marked[i]) unmarked.push_back(static_cast<int>(i));
    const int slot = unmarked[static_cast<std::size_t>(rng.below(unmarked.size()))];
    st.cache[static_cast<std::size_t>(slot)] = e;
    st.marked[static_cast<std::size_t>(slot)] = true;
    return {slot, false, 1.0};
}

MarkingPolicy::MarkingPolicy(const Metric& m, const ServerConfig& start, std::uint64_t seed)
    : m_(&m), st_{start, std::vector<bool>(start.size(), false)}, rng_(seed) {}

Action MarkingPolicy::act(Period, const Request& e, const ServerConfig&) {
    return marking_step(st_, e, rng_, *m_).slot;
}

MarkingOracle::MarkingOracle(const Metric& m) : m_(&m) {
    if (!m.is_uniform()) throw ConfigError("marking requires the uniform metric");
}

// ---------------------------------------------------------------- wrappers

double eta_kse(int k) { return 2.0 * k - 1.0; }
double eta_caching(int k) { return 2.0 * (std::log(static_cast<double>(k)) + 1.0); }

namespace {

void add_bound(CompetitiveReport& r, const KServerProblem& p, const Sequence& requests,
               const Sequence& prediction, Variant variant) {
    if (r.opt <= 0) return;
    BoundInputs in;
    in.eta = r.eta;
    in.epsilon = r.epsilon;
    in.opt = r.opt;
    in.k = p.k();
    in.phi_star = sequence_distance(p, requests, prediction).raw_total;
    const Theorem th = variant == Variant::general ? Theorem::T6 : Theorem::T7;
    r.bound_app = theoretical_bound(th, in);
    r.bound_app_name = to_string(th);
}

template <class On>
RunResult<KServerProblem> run_with(const KServerProblem& p, const Sequence& requests,
                                   const Sequence& prediction, const On& online, double eta,
                                   double epsilon, std::uint64_t seed, const char* variant) {
    const Metric& m = p.metric();
    Trajectory<KServerProblem> pre;
    ServerConfig s = p.initial_state();
    for (Request e : requests.items) {
        Action a = 0;
        if (e != kBottom) {
            const auto it = std::find(s.begin(), s.end(), e);
            if (it == s.end()) break;
            a = static_cast<Action>(it - s.begin());
        }
        pre.push(e, a, 0.0);
    }
    AdaSwitchConfig cfg;
    cfg.eta = eta;
    cfg.epsilon = epsilon;
    cfg.c = p.k();
    cfg.b = 2;
    cfg.seed = seed;
    cfg.objective = Objective::minimize;
    cfg.oracle_kind = OracleKind::exact;
    FlowOracle off(m);
    RunOptions opts;
    opts.variant = variant;
    auto res = run_adaswitch_cost(p, requests, prediction, off, online, cfg, &pre, opts);
    res.report.flag("initial_phase=" + std::to_string(pre.length()));
    return res;
}

}  // namespace

RunResult<KServerProblem> adaswitch_kse(const Metric& m, const ServerConfig& start,
                                        const Sequence& requests, const Sequence& prediction,
                                        double epsilon, Variant variant, std::uint64_t seed) {
    const KServerProblem p(m, start);
    const int k = p.k();
    RunResult<KServerProblem> res;
    if (variant == Variant::general) {
        if (epsilon < 0) epsilon = 1.0;
        res = run_with(p, requests, prediction, WfaOracle(m), eta_kse(k), epsilon, seed,
                       "adaswitch-kse");
        res.report.flag("eta_kse=2k-1");
    } else {
        if (!m.is_uniform()) throw ConfigError("caching variant requires the uniform metric");
        if (epsilon < 0) epsilon = eta_caching(k);
        res = run_with(p, requests, prediction, MarkingOracle(m), eta_caching(k), epsilon, seed,
                       "adaswitch-ca");
    }
    add_bound(res.report, p, requests, prediction, variant);
    return res;
}

RunResult<KServerProblem> online_only(const Metric& m, const ServerConfig& start,
                                      const Sequence& requests, const Sequence& prediction,
                                      Variant variant, std::uint64_t seed) {
    const KServerProblem p(m, start);
    FlowOracle off(m);
    RunOptions opts;
    const double dcap = p.k() / 2.0;
    RunResult<KServerProblem> res;
    if (variant == Variant::general) {
        opts.variant = "wfa";
        res = run_online_only(p, requests, prediction, off, WfaOracle(m), seed, dcap, nullptr, opts);
        res.report.eta = eta_kse(p.k());
    } else {
        opts.variant = "marking";
        res = run_online_only(p, requests, prediction, off, MarkingOracle(m), seed, dcap, nullptr, opts);
        res.report.eta = eta_caching(p.k());
    }
    return res;
}

// ---------------------------------------------------------------- files

MetricFile read_metric(std::istream& in) {
    MetricFile mf;
    int n = 0;
    if (!(in >> n >> mf.k) || n < 1 || mf.k < 1)
        throw std::runtime_error("bad metric header, expected 'n k'");
    if (mf.k > n) throw std::runtime_error("k exceeds the number of points");
    std::string tok;
    if (!(in >> tok)) throw std::runtime_error("missing point ids");
    const bool uniform = tok == "uniform";
    std::vector<std::string> names;
    if (!uniform) names.push_back(tok);
    while (static_cast<int>(names.size()) < n) {
        if (!(in >> tok)) throw std::runtime_error("expected " + std::to_string(n) + " point ids");
        if (tok == "-") throw std::runtime_error("'-' is reserved for the null request");
        names.push_back(tok);
    }
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> d(un * un, 1.0);
    if (uniform) {
        for (std::size_t i = 0; i < un; ++i) d[i * un + i] = 0.0;
    } else {
        for (double& x : d)
            if (!(in >> x)) throw std::runtime_error("distance matrix is incomplete");
    }
    try {
        mf.metric = Metric(std::move(names), std::move(d));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("invalid metric: ") + e.what());
    }
    return mf;
}

Sequence read_requests(std::istream& in, const Metric& m) {
    Sequence s;
    std::string tok;
    while (in >> tok) {
        if (tok == "-") {
            s.items.push_back(kBottom);
            continue;
        }
        const int idx = m.index_of(tok);
        if (idx < 0)
            throw std::runtime_error("unknown point '" + tok + "' at period " +
                                     std::to_string(s.items.size() + 1));
        s.items.push_back(idx);
    }
    return s;
}

void write_requests(std::ostream& out, const Sequence& s, const Metric& m) {
    for (Request e : s.items) out << (e == kBottom ? std::string("-") : m.names()[static_cast<std::size_t>(e)]) << '\n';
}

}  // namespace adaswitch::kserver
