#include "hglass/enumerate.hpp"

#include "hglass/parallel.hpp"

#include <algorithm>

namespace hglass {

void LogSumExp::merge(const LogSumExp& other) noexcept
{
    if (other.sum_ == 0.0) {
        return;
    }
    if (sum_ == 0.0) {
        *this = other;
        return;
    }
    if (other.max_ > max_) {
        const double scale = std::exp(max_ - other.max_);
        sum_ = sum_ * scale + other.sum_;
        energy_sum_ = energy_sum_ * scale + other.energy_sum_;
        max_ = other.max_;
    } else {
        const double scale = std::exp(other.max_ - max_);
        sum_ += other.sum_ * scale;
        energy_sum_ += other.energy_sum_ * scale;
    }
    min_energy_ = std::min(min_energy_, other.min_energy_);
}

std::vector<PartitionResult> enumerate_partition(std::uint64_t n_configs,
                                                 std::span<const double> betas,
                                                 double log_config_count, unsigned workers,
                                                 const ChunkEnergies& energies)
{
    const std::size_t nb = betas.size();
    const std::uint64_t n_chunks = (n_configs + kEnumerationChunk - 1) / kEnumerationChunk;
    std::vector<LogSumExp> partial(static_cast<std::size_t>(n_chunks) * nb);

    parallel_for(static_cast<std::size_t>(n_chunks), workers, [&](std::size_t chunk) {
        const std::uint64_t begin = chunk * kEnumerationChunk;
        const std::uint64_t len = std::min(kEnumerationChunk, n_configs - begin);
        std::vector<double> buffer(static_cast<std::size_t>(len));
        energies(begin, buffer);
        LogSumExp* acc = &partial[chunk * nb];
        for (double e : buffer) {
            for (std::size_t j = 0; j < nb; ++j) {
                acc[j].add(-betas[j] * e, e);
            }
        }
    });

    std::vector<PartitionResult> out(nb);
    for (std::size_t j = 0; j < nb; ++j) {
        LogSumExp total;
        for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) {
            total.merge(partial[chunk * nb + j]);
        }
        out[j].log_z = betas[j] == 0.0 ? log_config_count : total.log_value();
        out[j].mean_energy = total.mean_energy();
        out[j].min_energy = total.min_energy();
    }
    return out;
}

} // namespace hglass
