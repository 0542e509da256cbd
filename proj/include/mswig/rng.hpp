#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace mswig {

// Deterministic random source. Normal draws use Box-Muller on raw uniforms so
// that streams do not depend on standard-library distribution internals.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    double uniform() {
        // 53-bit mantissa in [0,1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    bool bernoulli(double p) { return uniform() < p; }

    int bounded(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[bounded(static_cast<int>(i))]);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace mswig
