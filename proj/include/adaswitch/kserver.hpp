#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "adaswitch/adaswitch.hpp"
#include "adaswitch/problem.hpp"
#include "adaswitch/rng.hpp"

namespace adaswitch::kserver {

inline constexpr int kBottom = -1;  // the null request

using Request = int;  // point index or kBottom
using Action = int;   // server index, 0-based

class Metric {
public:
    Metric() = default;
    // Throws std::invalid_argument unless dist is a symmetric n x n matrix with
    // entries in [0, 1], zero diagonal and the triangle inequality.
    Metric(std::vector<std::string> names, std::vector<double> dist);
    static Metric uniform(int n);

    int size() const { return n_; }
    bool is_uniform() const { return uniform_; }
    double operator()(int a, int b) const;  // accepts kBottom
    const std::vector<std::string>& names() const { return names_; }
    int index_of(const std::string& name) const;  // -1 if unknown

private:
    int n_ = 0;
    bool uniform_ = false;
    std::vector<std::string> names_;
    std::vector<double> dist_;
};

using ServerConfig = std::vector<int>;  // labelled positions, one per server

// Minimum-cost perfect matching between two equal-size configurations.
double config_distance(const Metric& m, std::span<const int> a, std::span<const int> b,
                       std::vector<int>* assignment = nullptr);

// Square assignment problem; returns column for each row.
std::vector<int> hungarian(const std::vector<double>& cost, int n);

class KServerProblem {
public:
    using Request = kserver::Request;
    using Action = kserver::Action;
    using State = ServerConfig;

    KServerProblem(const Metric& metric, ServerConfig initial);

    int k() const { return static_cast<int>(initial_.size()); }
    const Metric& metric() const { return *metric_; }
    ProblemTraits traits() const;
    State initial_state() const { return initial_; }
    Request null_request() const { return kBottom; }
    double apply(State& s, Period t, const Request& e, const Action& a) const;
    // Servers in index order; a single action for the null request.
    std::vector<Action> candidate_actions(const State& s, Period t, const Request& e) const;
    void check_action(Period t, const Request& e, const Action& a) const;
    Action adapt_action(Period, const Request&, const Action& a) const { return a; }
    double distance(const Request& a, const Request& b) const { return (*metric_)(a, b); }
    Period last_active_period(const State& s, Period start, std::span<const Request> w) const;
    Period estimate_horizon(Period i, std::span<const Request> prediction) const;

private:
    const Metric* metric_;
    ServerConfig initial_;
};

double kserver_cost(const Metric& m, const ServerConfig& positions, Request e, Action a);

struct OfflineResult {
    double cost = 0.0;
    std::vector<Action> actions;
};

// Exact offline optimum by min-cost flow on the acyclic request network.
OfflineResult offline_kserver(const ServerConfig& config, std::span<const Request> window,
                              const Metric& metric);

class FlowOracle {
public:
    explicit FlowOracle(const Metric& m) : m_(&m) {}
    std::vector<Action> solve(const ServerConfig& s, Period, std::span<const Request> w) const {
        return offline_kserver(s, w, *m_).actions;
    }
    double gamma() const { return 1.0; }

private:
    const Metric* m_;
};

// Work function over unordered configurations, stored as sorted point lists.
class WorkFunctionTable {
public:
    WorkFunctionTable(const Metric& m, const ServerConfig& start, std::size_t cap = 100'000);

    void update(Request e);  // w_t(X) = min_{x in X} w_{t-1}(X - x + e) + d(x, e)
    double value(const ServerConfig& sorted_config) const;
    const std::vector<ServerConfig>& configs() const { return configs_; }
    const std::vector<double>& values() const { return w_; }
    int k() const { return k_; }
    const Metric& metric() const { return *m_; }

private:
    int index(const ServerConfig& sorted) const;

    const Metric* m_;
    int k_;
    std::vector<ServerConfig> configs_;
    std::map<ServerConfig, int> index_;
    std::vector<double> w_;
};

// Lazy serving rule: a server already at e, else the server labelled to
// reach e in the virtual configuration whose actual position is closest.
Action lazy_serve(const Metric& m, const ServerConfig& actual, const ServerConfig& virtual_next,
                  Request e);

// Lazy conversion of a labelled configuration path (path[t-1] holds e_t).
std::vector<Action> lazy_realize(const Metric& m, const ServerConfig& start,
                                 std::span<const ServerConfig> path, std::span<const Request> requests);

struct WfaStep {
    ServerConfig virtual_next;  // labelled virtual positions after the step
    Action server;
    double cost;  // lazy cost actually paid
};

// One step of the Work Function Algorithm with lazy realization: the virtual
// configuration follows the argmin (ties to the lexicographically smallest
// configuration), virtual servers are relabelled by a min-cost matching, and
// only the server whose virtual position is e_t physically moves.
WfaStep wfa_step(WorkFunctionTable& table, const ServerConfig& virtual_positions,
                 const ServerConfig& actual_positions, Request e);

class WfaPolicy {
public:
    WfaPolicy(const Metric& m, const ServerConfig& start, std::size_t cap);
    Action act(Period t, const Request& e, const ServerConfig& actual);

private:
    WorkFunctionTable table_;
    ServerConfig virtual_;
};

class WfaOracle {
public:
    explicit WfaOracle(const Metric& m, std::size_t cap = 100'000) : m_(&m), cap_(cap) {}
    WfaPolicy start(Period, const ServerConfig& s, std::uint64_t) const { return {*m_, s, cap_}; }
    bool deterministic() const { return true; }

private:
    const Metric* m_;
    std::size_t cap_;
};

struct MarkingState {
    ServerConfig cache;
    std::vector<bool> marked;
};

struct MarkingStep {
    Action slot;
    bool hit;
    double cost;
};

// Throws std::logic_error on a non-uniform metric.
MarkingStep marking_step(MarkingState& st, Request e, Rng& rng, const Metric& m);

class MarkingPolicy {
public:
    MarkingPolicy(const Metric& m, const ServerConfig& start, std::uint64_t seed);
    Action act(Period t, const Request& e, const ServerConfig& actual);

private:
    const Metric* m_;
    MarkingState st_;
    Rng rng_;
};

class MarkingOracle {
public:
    explicit MarkingOracle(const Metric& m);
    MarkingPolicy start(Period, const ServerConfig& s, std::uint64_t seed) const {
        return {*m_, s, seed};
    }
    bool deterministic() const { return false; }

private:
    const Metric* m_;
};

double eta_kse(int k);      // 2k - 1, the certified Work Function bound
double eta_caching(int k);  // 2(ln k + 1)

enum class Variant { general, caching };

using Sequence = RequestSequence<Request>;

// Zero-cost initial phase, then the cost variant with c = k, b = 2. epsilon
// defaults to 2(ln k + 1) for caching when not given (negative).
RunResult<KServerProblem> adaswitch_kse(const Metric& m, const ServerConfig& start,
                                        const Sequence& requests, const Sequence& prediction,
                                        double epsilon, Variant variant, std::uint64_t seed = 0);

// The online oracle alone, from period 1.
RunResult<KServerProblem> online_only(const Metric& m, const ServerConfig& start,
                                      const Sequence& requests, const Sequence& prediction,
                                      Variant variant, std::uint64_t seed = 0);

// Metric files: "n k", n point ids, then an n x n matrix; or "n k uniform"
// followed by the point ids. The initial configuration is the first k ids.
struct MetricFile {
    Metric metric;
    int k = 1;
};
MetricFile read_metric(std::istream& in);
Sequence read_requests(std::istream& in, const Metric& m);
void write_requests(std::ostream& out, const Sequence& s, const Metric& m);

}  // namespace adaswitch::kserver
