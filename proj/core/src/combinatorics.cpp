#include "hglass/combinatorics.hpp"

#include "hglass/errors.hpp"

#include <algorithm>

namespace hglass {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept
{
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i is exact at every step.
        result = result / i * (n - k + i) + result % i * (n - k + i) / i;
    }
    return result;
}

std::uint64_t colex_rank(std::span<const std::uint32_t> descending)
{
    const std::size_t k = descending.size();
    std::uint64_t rank = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (j + 1 < k && descending[j] <= descending[j + 1]) {
            throw RangeError("tuple", "indices must be strictly decreasing");
        }
        // descending[j] is the (k - j)-th smallest element.
        rank += binomial(descending[j], k - j);
    }
    return rank;
}

void colex_unrank(std::uint64_t rank, std::span<std::uint32_t> descending)
{
    const std::size_t k = descending.size();
    for (std::size_t j = 0; j < k; ++j) {
        const std::uint64_t order = k - j;
        // Largest c with C(c, order) <= rank.
        std::uint64_t c = order - 1;
        while (binomial(c + 1, order) <= rank) {
            ++c;
        }
        descending[j] = static_cast<std::uint32_t>(c);
        rank -= binomial(c, order);
    }
}

bool next_colex(std::span<std::uint32_t> ascending, std::uint32_t n) noexcept
{
    const std::size_t k = ascending.size();
    for (std::size_t j = 0; j < k; ++j) {
        const std::uint32_t limit = j + 1 < k ? ascending[j + 1] : n;
        if (ascending[j] + 1 < limit) {
            ++ascending[j];
            for (std::size_t i = 0; i < j; ++i) {
                ascending[i] = static_cast<std::uint32_t>(i);
            }
            return true;
        }
    }
    return false;
}

double elementary_symmetric_pm1(std::uint64_t n, std::uint64_t plus, std::uint64_t k) noexcept
{
    double total = 0.0;
    for (std::uint64_t j = 0; j <= k; ++j) {
        const double term = static_cast<double>(binomial(plus, j)) *
                            static_cast<double>(binomial(n - plus, k - j));
        total += ((k - j) % 2 == 0) ? term : -term;
    }
    return total;
}

} // namespace hglass
