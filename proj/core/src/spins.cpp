#include "hglass/spins.hpp"

#include "hglass/errors.hpp"

#include <bit>

namespace hglass {

SpinConfiguration::SpinConfiguration(std::size_t n_spins)
    : n_(n_spins), words_((n_spins + 63) / 64, 0)
{
}

SpinConfiguration SpinConfiguration::from_code(std::size_t n_spins, std::uint64_t code)
{
    if (n_spins > 64) {
        throw DimensionError("from_code supports at most 64 spins");
    }
    SpinConfiguration out(n_spins);
    if (n_spins > 0) {
        out.words_[0] = n_spins == 64 ? code : code & ((std::uint64_t{1} << n_spins) - 1);
    }
    return out;
}

SpinConfiguration SpinConfiguration::from_spins(std::span<const int> spins)
{
    SpinConfiguration out(spins.size());
    for (std::size_t i = 0; i < spins.size(); ++i) {
        if (spins[i] != 1 && spins[i] != -1) {
            throw DomainError("spins must be +1 or -1");
        }
        out.set(i, spins[i]);
    }
    return out;
}

std::uint64_t SpinConfiguration::bits(std::size_t offset, std::size_t width) const noexcept
{
    const std::size_t word = offset >> 6;
    const std::size_t shift = offset & 63;
    std::uint64_t value = words_[word] >> shift;
    if (shift != 0 && shift + width > 64 && word + 1 < words_.size()) {
        value |= words_[word + 1] << (64 - shift);
    }
    if (width < 64) {
        value &= (std::uint64_t{1} << width) - 1;
    }
    return value;
}

SpinConfiguration SpinConfiguration::reversed() const
{
    SpinConfiguration out = *this;
    for (auto& w : out.words_) {
        w = ~w;
    }
    if (n_ % 64 != 0) {
        out.words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
    }
    return out;
}

std::string SpinConfiguration::to_string() const
{
    std::string out;
    out.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        out.push_back(spin(i) > 0 ? '+' : '-');
    }
    return out;
}

std::size_t agreement_count(const SpinConfiguration& a, const SpinConfiguration& b)
{
    if (a.size() != b.size()) {
        throw DimensionError("overlap of configurations with different lengths");
    }
    std::size_t differ = 0;
    const auto wa = a.words();
    const auto wb = b.words();
    for (std::size_t w = 0; w < wa.size(); ++w) {
        differ += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
    }
    return a.size() - differ;
}

double overlap(const SpinConfiguration& a, const SpinConfiguration& b)
{
    const std::size_t agree = agreement_count(a, b);
    const auto n = static_cast<double>(a.size());
    return (2.0 * static_cast<double>(agree) - n) / n;
}

} // namespace hglass
