#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hglass {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32-10 block function (Salmon et al., Random123).
constexpr PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept
{
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

constexpr PhiloxKey philox_key(std::uint64_t seed) noexcept
{
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// Maps 64 random bits to a double in the open interval (0, 1).
constexpr double bits_to_open_unit(std::uint64_t bits) noexcept
{
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Sequential random stream on top of the Philox block function. The whole
/// state is (key, stream id, position), so streams with different ids under one
/// key are independent and a copied engine replays the same sequence.
/// Satisfies UniformRandomBitGenerator with 64-bit output.
class PhiloxEngine {
public:
    using result_type = std::uint64_t;

    PhiloxEngine() = default;
    PhiloxEngine(std::uint64_t seed, std::uint32_t stream) noexcept
        : key_(philox_key(seed)), stream_(stream) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        if (lane_ == 2) {
            refill();
        }
        return buffer_[lane_++];
    }

    double uniform() noexcept { return bits_to_open_unit((*this)()); }

    std::uint64_t position() const noexcept { return block_; }

    bool operator==(const PhiloxEngine&) const = default;

private:
    void refill() noexcept
    {
        const PhiloxCounter out = philox4x32(
            {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32), stream_,
             0x5EEDu},
            key_);
        buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
        buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
        ++block_;
        lane_ = 0;
    }

    PhiloxKey key_{0, 0};
    std::uint32_t stream_ = 0;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int lane_ = 2;
};

} // namespace hglass
