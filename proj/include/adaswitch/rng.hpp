#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace adaswitch {

// Seed splitting: a child stream is keyed by (root, purpose, a, b). Each
// component is folded through splitmix64 so that any single decision can be
// reproduced from its key alone.
enum class Purpose : std::uint64_t {
    online_policy = 1,
    monte_carlo = 2,
    generator = 3,
    prediction = 4,
    trial = 5,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = splitmix64(root);
    for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k));
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t root, Purpose p, std::uint64_t a = 0,
                                 std::uint64_t b = 0) {
    return derive_seed(root, {static_cast<std::uint64_t>(p), a, b});
}

// Distributions are implemented here rather than through <random> adaptors so
// that streams are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do x = engine_();
        while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Geometric on {1, 2, ...} with success probability p.
    std::int64_t geometric(double p) {
        if (p >= 1.0) return 1;
        const double u = 1.0 - uniform();  // (0, 1]
        const double k = std::ceil(std::log(u) / std::log1p(-p));
        return std::max<std::int64_t>(1, static_cast<std::int64_t>(k));
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace adaswitch
