#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adaswitch/config.hpp"

namespace adaswitch {

enum class Mode { conservative, predictive };

struct EpochEvent {
    Period period;  // first period spent in the new mode
    Mode to;
};

struct CompetitiveReport {
    std::string instance_id;
    std::uint64_t seed = 0;
    std::string variant;
    double eta = 0.0;
    double epsilon = 0.0;
    double b = 0.0;
    double c = 0.0;
    double alpha = 0.0;
    double gamma = 1.0;
    Objective objective = Objective::maximize;
    double val = 0.0;
    double opt = 0.0;
    std::optional<double> ratio;  // unset when Opt = 0
    double phi_star = 0.0;
    int switches_to_predictive = 0;
    int switches_to_conservative = 0;
    std::vector<EpochEvent> epochs;
    Period start = 1;    // first period run by the meta-algorithm
    Period horizon = 0;  // last period simulated
    // For cost runs these hold the exact-oracle (T3-family) and gamma-oracle
    // (T4-family) bounds respectively.
    std::optional<double> bound_T1;
    std::optional<double> bound_T2;
    // Application-level bound (T5, T6, T7 or the ORRA bound) when one applies.
    std::optional<double> bound_app;
    std::string bound_app_name;
    bool monte_carlo_deviation = false;
    bool fallback_fired = false;
    std::string branch;
    std::vector<std::string> flags;

    int switches() const { return switches_to_predictive + switches_to_conservative; }
    void flag(const std::string& f);
    bool has_flag(const std::string& f) const;
    std::string flags_joined() const;  // ';'-separated, in insertion order
};

std::string report_csv_header();
std::string to_csv_row(const CompetitiveReport& r);

// Fixed-precision, locale-independent number formatting used by every CSV.
std::string format_number(double x);

}  // namespace adaswitch
