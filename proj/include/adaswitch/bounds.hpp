#pragma once

#include <string>

namespace adaswitch {

enum class Theorem {
    T1,     // reward, exact oracle
    T1pre,  // reward, exact oracle, in terms of Opt of the prediction
    T2,     // reward, gamma oracle
    T2pre,
    T3,     // cost, exact oracle
    T4,     // cost, gamma oracle
    T5,     // lead-time quotation
    T6,     // k-server
    T7,     // caching
    Orra,   // reusable resource allocation
};

struct BoundInputs {
    double eta = 0.0;
    double epsilon = 0.0;
    double gamma = 1.0;
    double alpha = 3.0;
    double b = 1.0;
    double c = 1.0;
    double L = 1.0;
    double opt = 0.0;  // Opt of reality, or of the prediction for the *pre bounds
    double phi_star = 0.0;
    int ell = 0;
    int k = 0;
    int d = 0;
};

// Closed-form competitive-ratio bounds. Reward bounds are lower bounds on
// Val/Opt; cost bounds are upper bounds. Throws ConfigError naming the failed
// precondition.
double theoretical_bound(Theorem th, const BoundInputs& in);

std::string to_string(Theorem th);

}  // namespace adaswitch
