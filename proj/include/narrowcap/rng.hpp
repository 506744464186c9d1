#pragma once

#include <cstdint>
#include <random>

#include "narrowcap/linalg.hpp"

namespace narrowcap {

/// Seeded RNG with hand-rolled draws. std::uniform_real_distribution output
/// is implementation-defined, and bit-identical reproducibility across
/// builds is part of the contract here, so only the raw mt19937_64 stream
/// is consumed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Box-Muller, one value per call (the cosine branch only).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // modulo bias is irrelevant at these ranges but rejection is cheap
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % n;
    }

    Vec unit_vector(std::size_t dim) {
        Vec v(dim);
        double n = 0.0;
        while (n < 1e-8) {
            for (auto& x : v) x = normal();
            n = norm2(v);
        }
        return vscale(1.0 / n, v);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace narrowcap
