#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace rt {

inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator: output i is mix64(key + i * golden).
// split() derives an independent stream from (key, tag).
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : key_(mix64(seed ^ 0x5851f42d4c957f2dULL)) {}

    Rng split(uint64_t tag) const {
        Rng r;
        r.key_ = mix64(key_ ^ mix64(tag + 0x632be59bd9b4e019ULL));
        return r;
    }

    uint64_t next() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * (++ctr_)); }

    // Uniform in [0, bound). Lemire's multiply-shift with rejection.
    uint64_t below(uint64_t bound) {
        if (bound <= 1) return 0;
        unsigned __int128 m = (unsigned __int128)next() * bound;
        uint64_t lo = (uint64_t)m;
        if (lo < bound) {
            uint64_t t = (0 - bound) % bound;
            while (lo < t) {
                m = (unsigned __int128)next() * bound;
                lo = (uint64_t)m;
            }
        }
        return (uint64_t)(m >> 64);
    }

    double uniform() { return (double)(next() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

    template <class T>
    const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

private:
    uint64_t key_ = 0;
    uint64_t ctr_ = 0;
};

}  // namespace rt
