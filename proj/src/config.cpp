#include "adaswitch/config.hpp"

#include <algorithm>

namespace adaswitch {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("configuration violates " + what);
}

}  // namespace

void validate(const AdaSwitchConfig& cfg) {
    require(cfg.epsilon > 0, "epsilon > 0");
    require(cfg.eta > 0, "eta > 0");
    require(cfg.monte_carlo_base_H >= 1 && cfg.monte_carlo_cap >= 1, "positive Monte Carlo budget");
    if (cfg.objective == Objective::maximize) {
        require(cfg.epsilon < cfg.eta, "epsilon < eta");
        require(cfg.b >= 1, "b >= 1");
        require(cfg.c >= cfg.b, "c >= b");
        if (cfg.oracle_kind == OracleKind::gamma) {
            require(cfg.gamma > 0 && cfg.gamma <= 1, "0 < gamma <= 1");
            require(cfg.alpha >= 3, "alpha >= 3");
            require(cfg.gamma * cfg.alpha / (cfg.alpha + cfg.gamma) >=
                        cfg.eta - 15.0 * cfg.epsilon / 16.0,
                    "gamma alpha / (alpha + gamma) >= eta - 15 epsilon / 16");
        }
    } else {
        require(cfg.b >= 1 && cfg.c >= 1, "b >= 1 and c >= 1");
        if (cfg.oracle_kind == OracleKind::gamma) {
            require(cfg.gamma >= 1, "gamma >= 1");
            require(cfg.alpha >= std::max(16.0 * cfg.gamma,
                                          cfg.gamma + 2.0 * cfg.gamma * cfg.gamma / cfg.epsilon),
                    "alpha >= max(16 gamma, gamma + 2 gamma^2 / epsilon)");
        }
    }
    if (cfg.switching_mode == SwitchingMode::regret_based)
        require(cfg.objective == Objective::maximize && cfg.oracle_kind == OracleKind::exact,
                "regret-based switching requires the reward objective and an exact oracle");
}

Thresholds thresholds(const AdaSwitchConfig& cfg, double L) {
    const double eta = cfg.eta, eps = cfg.epsilon, b = cfg.b, c = cfg.c;
    const double a = cfg.alpha, g = cfg.gamma;
    Thresholds t;
    t.batch_target = a * c * L;
    if (cfg.objective == Objective::maximize) {
        if (cfg.oracle_kind == OracleKind::exact) {
            t.conservative_exit = 10.0 * c * L / eps;
            t.predictive_exit = 2.0 * c / (eta * b);
        } else {
            t.conservative_exit = 16.0 * eta / eps * a * c * L;
            t.predictive_exit = g * a / ((eta - 15.0 * eps / 16.0) * (a + g)) * 5.0 * a * c / b;
        }
    } else {
        if (cfg.oracle_kind == OracleKind::exact) {
            t.conservative_exit = 10.0 * (eta + eps) * c * L / eps;
            t.predictive_exit = 2.0 * (eta + eps) * c / b;
        } else {
            t.conservative_exit = 18.0 * eta / eps * (eta + eps) * g * a * c * L;
            t.predictive_exit = 5.0 * (eta + eps) * a * c / b;
            t.require_u_at_least_gamma = true;
        }
    }
    return t;
}

double regret_threshold(double eta, double epsilon, double c, double L) {
    const double r = eta - epsilon;
    return 9.0 * c * L - 2.0 * r * c * L - r * L;
}

bool regret_based_switch_check(double eta, double epsilon, double c, double L, double opt_phase,
                               double val_phase) {
    return (eta - epsilon) * opt_phase - val_phase >= regret_threshold(eta, epsilon, c, L);
}

std::string to_string(OracleKind k) { return k == OracleKind::exact ? "exact" : "gamma"; }
std::string to_string(Objective o) { return o == Objective::maximize ? "max" : "min"; }

}  // namespace adaswitch
