#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tmcts {

// splitmix64 finalizer; used to turn (master seed, indices) into independent
// stream seeds so that parallel and serial execution see the same streams.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seedable stream owned by a single trial. The uniform/normal transforms are
// fixed here rather than taken from <random> distributions so a given seed
// reproduces the same reward sequence on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(mix64(seed)) {}

    static Rng stream(uint64_t master, uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) {
        uint64_t s = mix64(master);
        s = mix64(s ^ a);
        s = mix64(s ^ b);
        s = mix64(s ^ c);
        s = mix64(s ^ d);
        return Rng(s);
    }

    uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1), 53 bits
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; the paired value is cached
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace tmcts
