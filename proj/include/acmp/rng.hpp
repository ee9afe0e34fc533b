#ifndef ACMP_RNG_HPP
#define ACMP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace acmp {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seedable 64-bit generator (mt19937_64) with hand-rolled uniform/normal
// draws so the stream is identical across standard libraries.
//
// Stream splitting: sub-stream k of master seed s is seeded with
// splitmix64(s ^ (k+1)*0x9E3779B97F4A7C15). Graph generation uses stream 0
// for topology and stream 1 for features, so topology is invariant under
// feature-dimension changes.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    static Rng stream(std::uint64_t master_seed, std::uint64_t k) {
        return Rng(master_seed ^ ((k + 1) * 0x9E3779B97F4A7C15ULL));
    }

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double normal(double mu, double sigma) {
        if (has_spare_) {
            has_spare_ = false;
            return mu + sigma * spare_;
        }
        // Box-Muller
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return mu + sigma * r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace acmp

#endif
