#include "adaswitch/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "adaswitch/core.hpp"

namespace adaswitch {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("bound precondition failed: " + what);
}

void reward_common(const BoundInputs& in) {
    require(in.epsilon > 0 && in.epsilon < in.eta, "0 < epsilon < eta");
    require(in.c >= in.b && in.b >= 1, "c >= b >= 1");
    require(in.L > 0, "L > 0");
    require(in.opt > 0, "Opt > 0");
    require(in.phi_star >= 0, "phi* >= 0");
}

void gamma_reward(const BoundInputs& in) {
    reward_common(in);
    require(in.gamma > 0 && in.gamma <= 1, "0 < gamma <= 1");
    require(in.alpha >= 3, "alpha >= 3");
    require(in.gamma * in.alpha / (in.alpha + in.gamma) >= in.eta - 15.0 * in.epsilon / 16.0,
            "gamma alpha / (alpha + gamma) >= eta - 15 epsilon / 16");
}

void cost_common(const BoundInputs& in) {
    require(in.epsilon > 0, "epsilon > 0");
    require(in.b >= 1 && in.c >= 1, "b >= 1 and c >= 1");
    require(in.L > 0, "L > 0");
    require(in.opt > 0, "Opt > 0");
    require(in.phi_star >= 0, "phi* >= 0");
}

}  // namespace

double theoretical_bound(Theorem th, const BoundInputs& in) {
    const double eta = in.eta, eps = in.epsilon, g = in.gamma, a = in.alpha;
    const double b = in.b, c = in.c, L = in.L, opt = in.opt, phi = in.phi_star;
    switch (th) {
        case Theorem::T1:
            reward_common(in);
            return std::max(eta - eps, 1.0 - L * (12.0 * c + 8.0 * b * eta * phi) / (eps * opt));
        case Theorem::T1pre:
            reward_common(in);
            return std::max(eta - eps, 1.0 - L * (14.0 * c + 9.0 * b * eta * phi) / (eps * opt));
        case Theorem::T2:
            gamma_reward(in);
            return std::max(eta - eps, g - g * g / a -
                                           L * (18.0 * a * c + 7.0 * b * eta * phi / g) / (eps * opt));
        case Theorem::T2pre:
            gamma_reward(in);
            return std::max(eta - eps, g - g * g / a -
                                           L * (21.0 * a * c + 8.0 * b * eta * phi / g) / (eps * opt));
        case Theorem::T3:
            cost_common(in);
            return std::min(eta + eps, 1.0 + L / (eps * opt) *
                                                 (14.0 * eta * (eta + eps) * c +
                                                  (7.0 * eta + 2.0 * eps) * b * phi));
        case Theorem::T4:
            cost_common(in);
            require(g >= 1, "gamma >= 1");
            require(a >= std::max(16.0 * g, g + 2.0 * g * g / eps),
                    "alpha >= max(16 gamma, gamma + 2 gamma^2 / epsilon)");
            return std::min(eta + eps,
                            g + g * g / (a - g) +
                                L / (eps * opt) *
                                    (19.0 * g * a * eta * (eta + eps) * c +
                                     (4.0 * eta + 3.0 * eps) * g * b * phi));
        case Theorem::T5: {
            require(in.ell >= 1, "ell >= 1");
            require(eps > 0 && eps < eta, "0 < epsilon < eta");
            require(opt > 0, "Opt > 0");
            const double l = in.ell;
            return std::max(eta - eps, 1.0 - l * (24.0 * l + 8.0 * eta * phi) / (eps * opt));
        }
        case Theorem::T6: {
            require(in.k >= 1, "k >= 1");
            require(eps > 0, "epsilon > 0");
            require(opt > 0, "Opt > 0");
            const double k = in.k;
            return 1.0 + std::min(eta + eps, (14.0 * eta * (eta + eps) * k +
                                              (14.0 * eta + 4.0 * eps) * phi) /
                                                 (eps * opt));
        }
        case Theorem::T7: {
            require(in.k >= 1, "k >= 1");
            require(opt > 0, "Opt > 0");
            const double k = in.k, h = std::log(k) + 1.0;
            return 1.0 + std::min(4.0 * h, (56.0 * k * h + 18.0 * phi) / opt);
        }
        case Theorem::Orra: {
            require(in.d >= 1, "d >= 1");
            BoundInputs chk = in;
            chk.c = in.d;
            chk.b = 2;
            chk.L = 1;
            gamma_reward(chk);
            const double d = in.d;
            return std::max(eta - eps,
                            g - g * g / a - (18.0 * a * d + 14.0 * eta * phi / g) / (eps * opt));
        }
    }
    return 0.0;
}

std::string to_string(Theorem th) {
    switch (th) {
        case Theorem::T1: return "T1";
        case Theorem::T1pre: return "T1pre";
        case Theorem::T2: return "T2";
        case Theorem::T2pre: return "T2pre";
        case Theorem::T3: return "T3";
        case Theorem::T4: return "T4";
        case Theorem::T5: return "T5";
        case Theorem::T6: return "T6";
        case Theorem::T7: return "T7";
        case Theorem::Orra: return "ORRA";
    }
    return "?";
}

}  // namespace adaswitch
