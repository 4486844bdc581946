#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hglass {

/// C(n, k) in 64-bit arithmetic; exact for every value this project needs
/// (block sizes <= 256, k <= 8). Returns 0 for k > n.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

/// Colexicographic rank of a k-subset of {0, 1, ...} given in strictly
/// decreasing order (i_1 > ... > i_k), combinatorial number system:
/// rank = sum_j C(c_j, j) over the ascending elements c_1 < ... < c_k.
std::uint64_t colex_rank(std::span<const std::uint32_t> descending);

/// Inverse of colex_rank; writes the subset in strictly decreasing order.
void colex_unrank(std::uint64_t rank, std::span<std::uint32_t> descending);

/// Advances an ascending k-subset of {0..n-1} to its colex successor.
/// Returns false after the last subset.
bool next_colex(std::span<std::uint32_t> ascending, std::uint32_t n) noexcept;

/// Elementary symmetric polynomial e_k of a +-1 vector with `plus` entries
/// equal to +1 out of `n`: sum_j C(plus, j) C(n - plus, k - j) (-1)^(k - j).
double elementary_symmetric_pm1(std::uint64_t n, std::uint64_t plus, std::uint64_t k) noexcept;

} // namespace hglass
