#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace adaswitch {

// Periods are 1-based and absolute; a window starting after a prefix of
// length m begins at period m + 1.
using Period = int;

enum class Objective { maximize, minimize };

struct ProblemTraits {
    double reward_bound = 1.0;  // L
    double lipschitz_u = 1.0;
    double lipschitz_v = 1.0;
    double influence_f = 1.0;
    Objective objective = Objective::maximize;
};

inline bool better(Objective o, double a, double b) {
    return o == Objective::maximize ? a > b : a < b;
}

class InvalidAction : public std::runtime_error {
public:
    InvalidAction(Period t, const std::string& what)
        : std::runtime_error("invalid action at period " + std::to_string(t) + ": " + what),
          period(t) {}
    Period period;
};

class SearchTooLarge : public std::runtime_error {
public:
    SearchTooLarge(double space, std::uint64_t cap)
        : std::runtime_error("search space too large: " + std::to_string(space) +
                             " exceeds cap " + std::to_string(cap)),
          space_size(space) {}
    double space_size;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class OracleTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OracleFailure : public std::runtime_error {
public:
    OracleFailure(Period t, const std::string& what)
        : std::runtime_error("oracle failure at period " + std::to_string(t) + ": " + what),
          period(t) {}
    Period period;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace adaswitch
