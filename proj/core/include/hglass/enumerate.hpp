#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace hglass {

/// Streaming log-sum-exp of Boltzmann weights with the weighted energy sum
/// accumulated in the same pass, relative to the running maximum exponent.
class LogSumExp {
public:
    void add(double log_weight, double energy) noexcept
    {
        if (log_weight > max_) {
            const double scale = std::exp(max_ - log_weight);
            sum_ = sum_ * scale + 1.0;
            energy_sum_ = energy_sum_ * scale + energy;
            max_ = log_weight;
        } else {
            const double w = std::exp(log_weight - max_);
            sum_ += w;
            energy_sum_ += w * energy;
        }
        min_energy_ = std::min(min_energy_, energy);
    }

    void merge(const LogSumExp& other) noexcept;

    double log_value() const noexcept { return max_ + std::log(sum_); }
    double mean_energy() const noexcept { return energy_sum_ / sum_; }
    double min_energy() const noexcept { return min_energy_; }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
    double energy_sum_ = 0.0;
    double min_energy_ = std::numeric_limits<double>::infinity();
};

struct PartitionResult {
    double log_z = 0.0;
    double mean_energy = 0.0; // thermal average <H>
    double min_energy = 0.0;  // ground-state energy
};

/// Fills `out` with the energies of configurations [begin, begin + out.size()).
/// Any fixed visiting order inside a chunk is allowed.
using ChunkEnergies = std::function<void(std::uint64_t begin, std::span<double> out)>;

inline constexpr std::uint64_t kEnumerationChunk = std::uint64_t{1} << 14;

/// Exact log Z and <H> for each beta over `n_configs` configurations.
/// The configuration range is cut into fixed chunks of kEnumerationChunk,
/// reduced in ascending chunk order, so the result does not depend on
/// `workers`. At beta = 0 log Z is returned as `log_config_count` exactly.
std::vector<PartitionResult> enumerate_partition(std::uint64_t n_configs,
                                                 std::span<const double> betas,
                                                 double log_config_count, unsigned workers,
                                                 const ChunkEnergies& energies);

} // namespace hglass
