#pragma once

#include <cmath>
#include <cstdint>

namespace qn {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11 constants).
// Streams are addressed, not seeked: the counter encodes
// (particle id, step, draw index) and the key is the run seed, so any
// worker can produce any particle's draws independently and the results
// do not depend on the worker count.
struct Philox4x32 {
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static void round(std::uint32_t ctr[4], std::uint32_t k0, std::uint32_t k1) {
        const std::uint64_t p0 = std::uint64_t(kM0) * ctr[0];
        const std::uint64_t p1 = std::uint64_t(kM1) * ctr[2];
        const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        const std::uint32_t hi1 = std::uint64_t(p1) >> 32, lo1 = std::uint32_t(p1);
        const std::uint32_t n0 = hi1 ^ ctr[1] ^ k0;
        const std::uint32_t n1 = lo1;
        const std::uint32_t n2 = hi0 ^ ctr[3] ^ k1;
        const std::uint32_t n3 = lo0;
        ctr[0] = n0; ctr[1] = n1; ctr[2] = n2; ctr[3] = n3;
    }

    static void generate(const std::uint32_t counter[4], std::uint64_t key,
                         std::uint32_t out[4]) {
        std::uint32_t ctr[4] = {counter[0], counter[1], counter[2], counter[3]};
        std::uint32_t k0 = std::uint32_t(key), k1 = std::uint32_t(key >> 32);
        for (int r = 0; r < 10; ++r) {
            round(ctr, k0, k1);
            k0 += kW0;
            k1 += kW1;
        }
        out[0] = ctr[0]; out[1] = ctr[1]; out[2] = ctr[2]; out[3] = ctr[3];
    }
};

// Sequential view of the (seed, particle, step) stream.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t particle, std::uint32_t step)
        : seed_(seed), pid_(particle), step_(step) {}

    std::uint64_t next_u64() {
        if (phase_ == 0) {
            const std::uint32_t ctr[4] = {std::uint32_t(pid_), std::uint32_t(pid_ >> 32),
                                          step_, draw_++};
            Philox4x32::generate(ctr, seed_, block_);
            phase_ = 1;
            return (std::uint64_t(block_[0]) << 32) | block_[1];
        }
        phase_ = 0;
        return (std::uint64_t(block_[2]) << 32) | block_[3];
    }

    // uniform in [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller (deterministic, no rejection)
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t seed_, pid_;
    std::uint32_t step_, draw_ = 0;
    std::uint32_t block_[4] = {};
    int phase_ = 0;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

// Reserved step tags for draws outside the time loop.
inline constexpr std::uint32_t kRngTagPositions = 0xFFFFFFFFu;
inline constexpr std::uint32_t kRngTagVelocities = 0xFFFFFFFEu;

// Halton radical-inverse sequence, used for low-discrepancy (quiet start)
// sampling.
inline double halton(std::uint64_t index, std::uint32_t base) {
    double f = 1.0, r = 0.0;
    std::uint64_t i = index + 1; // skip the origin
    while (i > 0) {
        f /= base;
        r += f * double(i % base);
        i /= base;
    }
    return r;
}

} // namespace qn
