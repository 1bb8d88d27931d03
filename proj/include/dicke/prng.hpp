#pragma once
// Counter-based Philox 4x32-10 generator.  The output stream is a pure
// function of (seed, stream, block counter), so histories are reproducible
// across platforms and independent streams never overlap.  Multipliers
// 0xD2511F53 / 0xCD9E8D57 and Weyl increments 0x9E3779B9 / 0xBB67AE85 are the
// standard Philox constants.

#include <array>
#include <cmath>
#include <cstdint>

namespace dicke {

class Philox4x32 {
public:
    explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    // Counter word layout: [block_lo, block_hi, stream_lo, stream_hi];
    // key = [seed_lo, seed_hi].  Each block yields four 32-bit words.
    static std::array<std::uint32_t, 4> block(std::uint64_t seed,
                                              std::uint64_t stream,
                                              std::uint64_t counter) {
        std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(counter),
            static_cast<std::uint32_t>(counter >> 32),
            static_cast<std::uint32_t>(stream),
            static_cast<std::uint32_t>(stream >> 32)};
        std::uint32_t key0 = static_cast<std::uint32_t>(seed);
        std::uint32_t key1 = static_cast<std::uint32_t>(seed >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t product0 = 0xD2511F53ULL * ctr[0];
            const std::uint64_t product1 = 0xCD9E8D57ULL * ctr[2];
            ctr = {static_cast<std::uint32_t>(product1 >> 32) ^ ctr[1] ^ key0,
                   static_cast<std::uint32_t>(product1),
                   static_cast<std::uint32_t>(product0 >> 32) ^ ctr[3] ^ key1,
                   static_cast<std::uint32_t>(product0)};
            key0 += 0x9E3779B9U;
            key1 += 0xBB67AE85U;
        }
        return ctr;
    }

    std::uint32_t next_u32() {
        if (word_ == 4) {
            buffer_ = block(seed_, stream_, counter_++);
            word_ = 0;
        }
        return buffer_[word_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; draws come in cached pairs.
    double next_gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
        const double u2 = next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int word_ = 4;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace dicke
