#include "hglass/hrem.hpp"

#include "hglass/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hglass {

namespace {

constexpr int kMaxCachedLevel = 4;                          // 16-bit block codes
constexpr std::uint64_t kMaxCacheEntries = std::uint64_t{1} << 20;

std::uint64_t code_count(std::uint64_t block_size) noexcept
{
    return std::uint64_t{1} << block_size;
}

} // namespace

Tau2 variance_tau2(int depth, double sigma)
{
    if (depth < 0) {
        throw RangeError("K", "depth must be non-negative");
    }
    Tau2 out;
    for (int l = 0; l <= depth; ++l) {
        out.sum += std::exp2(depth - l) * std::exp2(l * (1.0 - sigma));
    }
    const double two_sigma = std::exp2(sigma);
    out.bound = sigma > 0.0 ? std::exp2(depth) * two_sigma / (two_sigma - 1.0)
                            : std::numeric_limits<double>::infinity();
    return out;
}

double hrem_level_scale(int level, double sigma) noexcept
{
    return std::exp2(level * (1.0 - sigma) / 2.0);
}

HremSystem::HremSystem(const ModelParams& params, const DisorderOracle& oracle, double top_weight)
    : params_(params), oracle_(oracle), n_(static_cast<std::size_t>(params.n_spins()))
{
    if (params.kind != ModelKind::Hrem) {
        throw RangeError("model", "HremSystem needs HREM parameters");
    }
    validate(params);
    scales_.resize(static_cast<std::size_t>(params.depth) + 1);
    for (int l = 0; l <= params.depth; ++l) {
        scales_[static_cast<std::size_t>(l)] = hrem_level_scale(l, params.sigma);
    }
    scales_.back() *= top_weight;

    cache_.resize(scales_.size());
    for (int l = 0; l <= std::min(params.depth, kMaxCachedLevel); ++l) {
        const std::uint64_t codes = code_count(params.block_size(l));
        const std::uint64_t blocks = params.block_count(l);
        if (blocks * codes > kMaxCacheEntries) {
            break;
        }
        auto& table = cache_[static_cast<std::size_t>(l)];
        table.resize(static_cast<std::size_t>(blocks * codes));
        for (std::uint64_t b = 0; b < blocks; ++b) {
            for (std::uint64_t c = 0; c < codes; ++c) {
                table[static_cast<std::size_t>(b * codes + c)] =
                    oracle_.value(DisorderFamily::Hrem, l, b, c);
            }
        }
    }
}

double HremSystem::epsilon(int level, std::uint64_t block, std::uint64_t code) const noexcept
{
    const auto& table = cache_[static_cast<std::size_t>(level)];
    if (!table.empty()) {
        return table[static_cast<std::size_t>((block << params_.block_size(level)) | code)];
    }
    return oracle_.value(DisorderFamily::Hrem, level, block, code);
}

double HremSystem::energy(const SpinConfiguration& config) const
{
    if (config.size() != n_) {
        throw DimensionError("HREM depth " + std::to_string(params_.depth) + " needs " +
                             std::to_string(n_) + " spins, got " + std::to_string(config.size()));
    }
    double total = 0.0;
    for (int l = 0; l <= params_.depth; ++l) {
        const std::uint64_t width = params_.block_size(l);
        const std::uint64_t blocks = params_.block_count(l);
        double level_sum = 0.0;
        for (std::uint64_t b = 0; b < blocks; ++b) {
            level_sum += epsilon(l, b, config.bits(b * width, width));
        }
        total += scale(l) * level_sum;
    }
    return total;
}

double HremSystem::flip_delta(const SpinConfiguration& config, std::size_t site) const noexcept
{
    double delta = 0.0;
    for (int l = 0; l <= params_.depth; ++l) {
        const std::uint64_t width = params_.block_size(l);
        const std::uint64_t block = site >> l;
        const std::uint64_t offset = block << l;
        const std::uint64_t code = config.bits(offset, width);
        const std::uint64_t flipped = code ^ (std::uint64_t{1} << (site - offset));
        delta += scale(l) * (epsilon(l, block, flipped) - epsilon(l, block, code));
    }
    return delta;
}

std::vector<std::vector<double>> HremSystem::block_energy_tables(int level) const
{
    if (level > kMaxCachedLevel) {
        throw CapacityError("block energy tables are limited to 16-spin blocks");
    }
    std::vector<std::vector<double>> tables(params_.block_count(0));
    for (std::uint64_t b = 0; b < tables.size(); ++b) {
        tables[b] = {scale(0) * epsilon(0, b, 0), scale(0) * epsilon(0, b, 1)};
    }
    for (int l = 1; l <= level; ++l) {
        const std::uint64_t half = params_.block_size(l - 1);
        const std::uint64_t half_mask = code_count(half) - 1;
        const std::uint64_t codes = code_count(params_.block_size(l));
        std::vector<std::vector<double>> next(params_.block_count(l));
        for (std::uint64_t b = 0; b < next.size(); ++b) {
            const auto& left = tables[2 * b];
            const auto& right = tables[2 * b + 1];
            auto& out = next[b];
            out.resize(static_cast<std::size_t>(codes));
            for (std::uint64_t c = 0; c < codes; ++c) {
                out[c] = left[c & half_mask] + right[c >> half] + scale(l) * epsilon(l, b, c);
            }
        }
        tables = std::move(next);
    }
    return tables;
}

double hrem_energy(const SpinConfiguration& config, const ModelParams& params,
                   const DisorderOracle& oracle)
{
    return HremSystem(params, oracle).energy(config);
}

Method hrem_enumeration_method(const ModelParams& params, const EnumerationOptions& options)
{
    validate(params);
    const std::uint64_t n = params.n_spins();
    if (n > 63 || (std::uint64_t{1} << n) > options.max_configs) {
        throw CapacityError("HREM depth " + std::to_string(params.depth) + " has 2^" +
                            std::to_string(n) +
                            " configurations, beyond the enumeration budget; use the Monte "
                            "Carlo path (mc-run)");
    }
    const std::uint64_t table_bytes = (std::uint64_t{1} << n) * sizeof(double);
    const bool table_fits =
        params.depth <= kMaxCachedLevel && table_bytes <= options.table_memory_bytes;
    switch (options.mode) {
    case EnumerationMode::Table:
        if (!table_fits) {
            throw CapacityError("table mode needs " + std::to_string(table_bytes) +
                                " bytes, over the table memory budget; use streaming mode");
        }
        return Method::ExactTable;
    case EnumerationMode::Streaming:
        return Method::ExactStream;
    case EnumerationMode::Auto:
        break;
    }
    return table_fits ? Method::ExactTable : Method::ExactStream;
}

std::vector<PartitionResult> hrem_partition(const ModelParams& params,
                                            const DisorderOracle& oracle,
                                            std::span<const double> betas,
                                            const EnumerationOptions& options, double top_weight)
{
    const Method method = hrem_enumeration_method(params, options);
    const HremSystem system(params, oracle, top_weight);
    const int depth = params.depth;
    const std::uint64_t n = params.n_spins();
    const std::uint64_t n_configs = std::uint64_t{1} << n;
    const double log_count = static_cast<double>(n) * std::log(2.0);

    if (method == Method::ExactTable) {
        const std::vector<double> table = system.block_energy_tables(depth).front();
        return enumerate_partition(n_configs, betas, log_count, options.workers,
                                   [&](std::uint64_t begin, std::span<double> out) {
                                       for (std::size_t i = 0; i < out.size(); ++i) {
                                           out[i] = table[begin + i];
                                       }
                                   });
    }

    // Streaming: sub-top halves from tables, top-level energy looked up per
    // configuration. Same arithmetic as the table path.
    const auto halves = system.block_energy_tables(depth - 1);
    const std::uint64_t half = params.block_size(depth - 1);
    const std::uint64_t half_mask = (std::uint64_t{1} << half) - 1;
    const double top_scale = system.scale(depth);
    return enumerate_partition(n_configs, betas, log_count, options.workers,
                               [&](std::uint64_t begin, std::span<double> out) {
                                   const auto& left = halves[0];
                                   const auto& right = halves[1];
                                   for (std::size_t i = 0; i < out.size(); ++i) {
                                       const std::uint64_t c = begin + i;
                                       out[i] = left[c & half_mask] + right[c >> half] +
                                                top_scale * system.epsilon(depth, 0, c);
                                   }
                               });
}

SampleRecord exact_log_partition(const ModelParams& params, const DisorderOracle& oracle,
                                 const EnumerationOptions& options)
{
    const double beta = params.beta;
    const PartitionResult r =
        hrem_partition(params, oracle, std::span<const double>(&beta, 1), options).front();
    SampleRecord rec;
    rec.model = ModelKind::Hrem;
    rec.depth = params.depth;
    rec.sigma = params.sigma;
    rec.beta = beta;
    rec.seed = oracle.seed();
    rec.method = hrem_enumeration_method(params, options);
    rec.n_spins = params.n_spins();
    rec.log_z = r.log_z;
    rec.mean_energy = r.mean_energy;
    rec.min_energy = r.min_energy;
    rec.log_z_per_spin = r.log_z / static_cast<double>(rec.n_spins);
    return rec;
}

double concentration_bound(int depth, double sigma, double beta) noexcept
{
    if (beta == 0.0) {
        return 0.0;
    }
    const double two_sigma = std::exp2(sigma);
    return 2.0 * std::exp(-std::exp2(depth / 2.0) * (two_sigma - 1.0) /
                          (2.0 * two_sigma * beta * beta));
}

double concentration_threshold(int depth) noexcept
{
    return std::exp2(-depth / 4.0);
}

} // namespace hglass
