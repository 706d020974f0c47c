#ifndef BILLIARD_RNG_HPP
#define BILLIARD_RNG_HPP

#include <cmath>
#include <cstdint>

namespace billiard {

// splitmix64, used to expand seeds into xoshiro state.
inline std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++.  Behaviour is fixed by the algorithm, not the platform, so
// trial streams are reproducible across machines and thread schedules.
class Rng {
public:
    Rng() : Rng(0, 0) {}

    // Counter-style stream: the state is a hash of (master_seed, stream_id),
    // so streams are independent of evaluation order.
    Rng(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t s = master_seed;
        std::uint64_t h = splitmix64(s) ^ (0xA0761D6478BD642FULL * (stream_id + 1));
        for (auto& w : state_) w = splitmix64(h);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1) with 53 random bits; bit-stable everywhere.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t uniform_index(std::uint64_t n) {
        // Lemire-style rejection-free enough for diagnostics; exactness of the
        // modulus does not matter for any statistic we compute.
        return next_u64() % n;
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }
    std::uint64_t state_[4];
};

} // namespace billiard

#endif
