#pragma once

#include <cstdint>
#include <string>

#include "adaswitch/core.hpp"

namespace adaswitch {

enum class OracleKind { exact, gamma };
enum class SwitchingMode { error_based, regret_based };

struct AdaSwitchConfig {
    double eta = 0.5;      // guarantee of the online oracle used in thresholds
    double epsilon = 0.1;
    double b = 1.0;
    double c = 1.0;
    double alpha = 3.0;    // batch parameter, gamma variants only
    double gamma = 1.0;    // asserted offline-oracle guarantee, gamma variants only
    double Z = 24.0;       // strengthened OLTQ rule only
    std::uint64_t monte_carlo_base_H = 1;
    std::uint64_t monte_carlo_cap = 10'000;
    std::uint64_t seed = 0;
    SwitchingMode switching_mode = SwitchingMode::error_based;
    Objective objective = Objective::maximize;
    OracleKind oracle_kind = OracleKind::exact;
};

struct Thresholds {
    double conservative_exit = 0.0;  // s threshold
    double predictive_exit = 0.0;    // phi threshold
    double batch_target = 0.0;       // alpha c L, gamma variants
    bool require_u_at_least_gamma = false;
};

// Throws ConfigError naming the first violated condition.
void validate(const AdaSwitchConfig& cfg);

Thresholds thresholds(const AdaSwitchConfig& cfg, double L);

// Remark-style regret rule: true iff (eta - eps) opt - val >= 9cL - 2(eta - eps)cL - (eta - eps)L.
bool regret_based_switch_check(double eta, double epsilon, double c, double L, double opt_phase,
                               double val_phase);
double regret_threshold(double eta, double epsilon, double c, double L);

std::string to_string(OracleKind k);
std::string to_string(Objective o);

}  // namespace adaswitch
