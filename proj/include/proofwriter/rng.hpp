#ifndef PROOFWRITER_RNG_HPP
#define PROOFWRITER_RNG_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace proofwriter {

// Deterministic RNG helpers. mt19937_64 output is pinned by the standard and
// the derived draws below avoid std::uniform_*_distribution (whose sequences
// are implementation-defined), so seeded runs are byte-identical everywhere.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    // Uniform in [0, n) by masked rejection.
    uint64_t below(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t mask = ~uint64_t{0};
        uint64_t limit = n - 1;
        while (mask >> 1 >= limit) mask >>= 1;
        uint64_t v;
        do {
            v = engine_() & mask;
        } while (v >= n);
        return v;
    }

    int range(int lo, int hi) { // inclusive bounds
        if (hi <= lo) return lo;
        return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // Distinct sample of k items, order-stable draw.
    template <typename T>
    std::vector<T> sample(const std::vector<T>& v, size_t k) {
        std::vector<T> pool = v;
        shuffle(pool);
        if (pool.size() > k) pool.resize(k);
        return pool;
    }

private:
    std::mt19937_64 engine_;
};

inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace proofwriter

#endif
