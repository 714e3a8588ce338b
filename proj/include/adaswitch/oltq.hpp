#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "adaswitch/adaswitch.hpp"
#include "adaswitch/problem.hpp"

namespace adaswitch::oltq {

// Slot value meaning "lead time of at least ell", i.e. never processed.
inline constexpr int kNever = std::numeric_limits<int>::max();

using Request = int;               // number of orders arriving this period
using Action = std::vector<int>;   // one processing slot per order

// Committed slots and the reward each will credit when processed.
struct ScheduleState {
    std::map<int, int> reserved;  // slot -> reward
    auto operator<=>(const ScheduleState&) const = default;
};

double eta_oltq(int ell);

// Largest alpha in [0, 1] with (ell + ceil(alpha ell))(ell - ceil(alpha ell) + 1) / ((ell + 1) ell) >= gamma.
double alpha_of_gamma(int ell, double gamma);

class OltqProblem {
public:
    using Request = oltq::Request;
    using Action = oltq::Action;
    using State = ScheduleState;

    explicit OltqProblem(int ell);

    int ell() const { return ell_; }
    ProblemTraits traits() const;
    State initial_state() const { return {}; }
    Request null_request() const { return 0; }
    double apply(State& s, Period t, const Request& e, const Action& a) const;
    // Canonical candidates: the first j orders take distinct slots in increasing
    // order and the rest are never processed. Candidates are listed by the
    // bitmask of used slots (bit i is slot t + i) in increasing numeric order.
    std::vector<Action> candidate_actions(const State& s, Period t, const Request& e) const;
    void check_action(Period t, const Request& e, const Action& a) const;
    Action adapt_action(Period t, const Request& e, const Action& a) const;
    double distance(const Request& a, const Request& b) const;
    Period last_active_period(const State& s, Period start, std::span<const Request> w) const;
    Period estimate_horizon(Period i, std::span<const Request> prediction) const;

private:
    int ell_;
};

// Reward credited at period t by the history (requests, actions) of periods
// 1..t; the per-period form of the slot-exclusive lead-time reward.
double oltq_reward(int ell, std::span<const Request> requests, std::span<const Action> actions,
                   Period t);

// Exact offline scheduler: sweeps the window's slots in order, skipping slots
// already committed in s, and gives each free slot to the latest pending
// arrival (lowest unscheduled index within it).
std::vector<Action> ohrr_star(int ell, const ScheduleState& s, Period start,
                              std::span<const Request> window);

class OhrrMonitor {
public:
    OhrrMonitor(int ell, const ScheduleState& s, Period start);
    double push(Request e);  // Opt over [start, t] after appending period t

private:
    struct Pending {
        Period arrival;
        int left;
    };
    int ell_;
    ScheduleState s_;
    Period next_;
    std::deque<Pending> pending_;
    double total_ = 0.0;
};

class OhrrOracle {
public:
    explicit OhrrOracle(int ell) : ell_(ell) {}
    std::vector<Action> solve(const ScheduleState& s, Period start, std::span<const Request> w) const {
        return ohrr_star(ell_, s, start, w);
    }
    double gamma() const { return 1.0; }
    OhrrMonitor monitor(const ScheduleState& s, Period start) const { return {ell_, s, start}; }

private:
    int ell_;
};

struct QFracStep {
    Action action;
    int next_U;
};

// One period of the threshold policy; `offset` perturbs N_t and exists only
// for mutation testing.
QFracStep qfrac_star_step(int U, Period t, Request e, int ell, double eta, int offset = 0);

class QFracPolicy {
public:
    QFracPolicy(int ell, double eta, Period m, int offset = 0)
        : ell_(ell), eta_(eta), U_(m + 1), offset_(offset) {}
    Action act(Period t, const Request& e, const ScheduleState&);
    int U() const { return U_; }

private:
    int ell_;
    double eta_;
    int U_;
    int offset_;
};

// Prefix-oblivious online oracle: pi_m starts with U = m + 1.
class QFracOracle {
public:
    explicit QFracOracle(int ell, int offset = 0);
    QFracPolicy start(Period m, const ScheduleState&, std::uint64_t) const {
        return {ell_, eta_, m, offset_};
    }
    bool deterministic() const { return true; }
    double eta() const { return eta_; }

private:
    int ell_;
    double eta_;
    int offset_;
};

using Sequence = RequestSequence<Request>;

struct OltqRun {
    RunResult<OltqProblem> result;
    double opt_prediction = 0.0;  // strengthened rule only
    double threshold = 0.0;       // strengthened rule only
};

RunResult<OltqProblem> adaswitch_oltq(int ell, const Sequence& requests, const Sequence& prediction,
                                      double epsilon, std::uint64_t seed = 0,
                                      SwitchingMode mode = SwitchingMode::error_based);

// Runs Q-FRAC* alone from period 1.
RunResult<OltqProblem> qfrac_only(int ell, const Sequence& requests, const Sequence& prediction);

OltqRun strengthened_adaswitch_oltq(int ell, const Sequence& requests, const Sequence& prediction,
                                    double gamma, double Z, std::uint64_t seed = 0);

double opt_oltq(int ell, const Sequence& requests);

// Instance files: first line "ell T", then T integers.
struct Instance {
    int ell = 1;
    Sequence requests;
};
Instance read_instance(std::istream& in);
void write_instance(std::ostream& out, const Instance& inst);

}  // namespace adaswitch::oltq
