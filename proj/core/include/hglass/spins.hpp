#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hglass {

/// Bit-packed Ising configuration. Bit b holds spin S_{b+1}: 1 means +1,
/// 0 means -1. Bits past size() are always zero.
class SpinConfiguration {
public:
    SpinConfiguration() = default;

    /// All spins -1.
    explicit SpinConfiguration(std::size_t n_spins);

    /// Spins taken from the low n_spins bits of `code` (n_spins <= 64).
    static SpinConfiguration from_code(std::size_t n_spins, std::uint64_t code);

    static SpinConfiguration from_spins(std::span<const int> spins);

    std::size_t size() const noexcept { return n_; }

    int spin(std::size_t i) const noexcept
    {
        return ((words_[i >> 6] >> (i & 63)) & 1u) ? 1 : -1;
    }

    void set(std::size_t i, int value) noexcept
    {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value > 0) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }

    void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    /// Bits [offset, offset + width) as an integer, width <= 64.
    std::uint64_t bits(std::size_t offset, std::size_t width) const noexcept;

    /// Integer code of the whole configuration (size() <= 64).
    std::uint64_t code() const noexcept { return words_.empty() ? 0 : words_[0]; }

    /// Spin-reversed copy.
    SpinConfiguration reversed() const;

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    /// "+-+..." rendering, spin 1 first.
    std::string to_string() const;

    bool operator==(const SpinConfiguration&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Q = N^-1 sum_i S_i S'_i. Throws DimensionError on length mismatch.
double overlap(const SpinConfiguration& a, const SpinConfiguration& b);

/// Number of sites where the two configurations agree.
std::size_t agreement_count(const SpinConfiguration& a, const SpinConfiguration& b);

} // namespace hglass
