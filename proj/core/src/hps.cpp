#include "hglass/hps.hpp"

#include "hglass/combinatorics.hpp"
#include "hglass/errors.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace hglass {

namespace {

constexpr std::uint64_t kMaxCachedCouplings = 1'000'000;
constexpr std::uint64_t kMaxIncidenceEntries = std::uint64_t{1} << 23;
constexpr std::uint64_t kRoutineSpins = 9;

double factorial(int p) noexcept
{
    double f = 1.0;
    for (int i = 2; i <= p; ++i) {
        f *= i;
    }
    return f;
}

std::vector<std::uint32_t> first_subset(int p)
{
    std::vector<std::uint32_t> s(static_cast<std::size_t>(p));
    std::iota(s.begin(), s.end(), 0u);
    return s;
}

} // namespace

double hps_level_scale(int level, double sigma, int p) noexcept
{
    return -std::sqrt(factorial(p)) /
           std::pow(static_cast<double>(p), level * (p - 2.0 * (1.0 - sigma)) / 2.0);
}

std::uint64_t hps_coupling_count(const ModelParams& params) noexcept
{
    std::uint64_t total = 0;
    for (int l = 1; l <= params.depth; ++l) {
        total += params.block_count(l) *
                 binomial(params.block_size(l), static_cast<std::uint64_t>(params.p));
    }
    return total;
}

HpsSystem::HpsSystem(const ModelParams& params, const DisorderOracle& oracle, double top_weight)
    : params_(params), oracle_(oracle), n_(static_cast<std::size_t>(params.n_spins()))
{
    if (params.kind != ModelKind::Hps) {
        throw RangeError("model", "HpsSystem needs HPS parameters");
    }
    validate(params);
    scales_.resize(static_cast<std::size_t>(params.depth) + 1, 0.0);
    for (int l = 1; l <= params.depth; ++l) {
        scales_[static_cast<std::size_t>(l)] = hps_level_scale(l, params.sigma, params.p);
    }
    if (params.depth >= 1) {
        scales_.back() *= top_weight;
    }

    fields_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        fields_[i] = oracle_.value(DisorderFamily::HpsField, 0, 0, i);
    }

    couplings_.resize(scales_.size());
    if (hps_coupling_count(params) < kMaxCachedCouplings) {
        const auto p = static_cast<std::uint64_t>(params.p);
        for (int l = 1; l <= params.depth; ++l) {
            const std::uint64_t tuples = binomial(params.block_size(l), p);
            const std::uint64_t blocks = params.block_count(l);
            auto& level = couplings_[static_cast<std::size_t>(l)];
            level.resize(static_cast<std::size_t>(blocks * tuples));
            for (std::uint64_t b = 0; b < blocks; ++b) {
                for (std::uint64_t r = 0; r < tuples; ++r) {
                    level[static_cast<std::size_t>(b * tuples + r)] =
                        oracle_.value(DisorderFamily::HpsCoupling, l, b, r);
                }
            }
        }
    }

    if (hps_coupling_count(params) * static_cast<std::uint64_t>(params.p) <=
        kMaxIncidenceEntries) {
        build_incidence();
    }
}

double HpsSystem::coupling(const CouplingIndex& index) const noexcept
{
    const auto& level = couplings_[static_cast<std::size_t>(index.level)];
    if (!level.empty()) {
        const std::uint64_t tuples = binomial(params_.block_size(index.level),
                                              static_cast<std::uint64_t>(params_.p));
        return level[static_cast<std::size_t>(index.block * tuples + index.rank)];
    }
    return oracle_.value(DisorderFamily::HpsCoupling, index.level, index.block, index.rank);
}

void HpsSystem::build_incidence()
{
    const auto p = static_cast<std::size_t>(params_.p);
    std::vector<std::size_t> counts(n_ + 1, 0);
    for (int l = 1; l <= params_.depth; ++l) {
        const std::uint64_t size = params_.block_size(l);
        const std::uint64_t per_site = binomial(size - 1, p - 1);
        for (std::size_t i = 0; i < n_; ++i) {
            counts[i + 1] += static_cast<std::size_t>(per_site);
        }
    }
    offset_.assign(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) {
        offset_[i + 1] = offset_[i] + counts[i + 1];
    }
    coeff_.resize(offset_.back());
    partners_.resize(offset_.back() * (p - 1));
    std::vector<std::size_t> fill(offset_.begin(), offset_.end() - 1);

    for (int l = 1; l <= params_.depth; ++l) {
        const std::uint64_t size = params_.block_size(l);
        for (std::uint64_t b = 0; b < params_.block_count(l); ++b) {
            const std::uint64_t base = b * size;
            auto subset = first_subset(params_.p);
            std::uint64_t rank = 0;
            do {
                const double c = scale(l) * coupling({l, b, rank});
                for (std::size_t m = 0; m < p; ++m) {
                    const std::size_t site = static_cast<std::size_t>(base + subset[m]);
                    const std::size_t slot = fill[site]++;
                    coeff_[slot] = c;
                    std::size_t k = 0;
                    for (std::size_t o = 0; o < p; ++o) {
                        if (o != m) {
                            partners_[slot * (p - 1) + k++] =
                                static_cast<std::uint32_t>(base + subset[o]);
                        }
                    }
                }
                ++rank;
            } while (next_colex(subset, static_cast<std::uint32_t>(size)));
        }
    }
}

double HpsSystem::block_interaction(const SpinConfiguration& config, int level,
                                    std::uint64_t block) const
{
    const std::uint64_t size = params_.block_size(level);
    const std::uint64_t base = block * size;
    auto subset = first_subset(params_.p);
    std::uint64_t rank = 0;
    double sum = 0.0;
    do {
        int product = 1;
        for (std::uint32_t s : subset) {
            product *= config.spin(static_cast<std::size_t>(base + s));
        }
        sum += coupling({level, block, rank}) * product;
        ++rank;
    } while (next_colex(subset, static_cast<std::uint32_t>(size)));
    return scale(level) * sum;
}

double HpsSystem::field_energy(const SpinConfiguration& config) const
{
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        sum += fields_[i] * config.spin(i);
    }
    return sum;
}

double HpsSystem::energy(const SpinConfiguration& config) const
{
    if (config.size() != n_) {
        throw DimensionError("HPS p=" + std::to_string(params_.p) + " depth " +
                             std::to_string(params_.depth) + " needs " + std::to_string(n_) +
                             " spins, got " + std::to_string(config.size()));
    }
    double total = field_energy(config);
    for (int l = 1; l <= params_.depth; ++l) {
        for (std::uint64_t b = 0; b < params_.block_count(l); ++b) {
            total += block_interaction(config, l, b);
        }
    }
    return total;
}

double HpsSystem::flip_delta(const SpinConfiguration& config, std::size_t site) const
{
    if (offset_.empty()) {
        SpinConfiguration flipped = config;
        flipped.flip(site);
        return energy(flipped) - energy(config);
    }
    const auto stride = static_cast<std::size_t>(params_.p - 1);
    double local = fields_[site];
    for (std::size_t e = offset_[site]; e < offset_[site + 1]; ++e) {
        int product = 1;
        for (std::size_t k = 0; k < stride; ++k) {
            product *= config.spin(partners_[e * stride + k]);
        }
        local += coeff_[e] * product;
    }
    return -2.0 * config.spin(site) * local;
}

double hps_energy(const SpinConfiguration& config, const ModelParams& params,
                  const DisorderOracle& oracle)
{
    return HpsSystem(params, oracle).energy(config);
}

OverlapPair::OverlapPair(SpinConfiguration first, SpinConfiguration second)
    : first_(std::move(first)), second_(std::move(second))
{
    if (first_.size() != second_.size()) {
        throw DimensionError("overlap pair needs configurations of equal length");
    }
}

double OverlapPair::overlap() const noexcept
{
    return hglass::overlap(first_, second_);
}

namespace {

void check_pair(const OverlapPair& pair, const ModelParams& params)
{
    if (params.kind != ModelKind::Hps) {
        throw RangeError("model", "eta covariance is defined for the HPS");
    }
    validate(params);
    if (params.depth < 1) {
        throw RangeError("K", "the top-level interaction needs depth >= 1");
    }
    if (pair.first().size() != params.n_spins()) {
        throw DimensionError("pair length " + std::to_string(pair.first().size()) +
                             " does not match p^K = " + std::to_string(params.n_spins()));
    }
}

} // namespace

double eta_covariance_exact(const OverlapPair& pair, const ModelParams& params)
{
    check_pair(pair, params);
    const double scale = hps_level_scale(params.depth, params.sigma, params.p);
    const std::uint64_t n = params.n_spins();
    const std::uint64_t plus = agreement_count(pair.first(), pair.second());
    return scale * scale *
           elementary_symmetric_pm1(n, plus, static_cast<std::uint64_t>(params.p));
}

double eta_covariance_asymptotic(const OverlapPair& pair, const ModelParams& params)
{
    check_pair(pair, params);
    return std::pow(static_cast<double>(params.p), 2.0 * params.depth * (1.0 - params.sigma)) *
           std::pow(pair.overlap(), params.p);
}

Estimate empirical_eta_covariance(const OverlapPair& pair, const ModelParams& params,
                                  std::size_t n_samples, const DisorderOracle& base)
{
    check_pair(pair, params);
    if (n_samples < 2) {
        throw RangeError("n", "need at least two coupling samples");
    }
    const int top = params.depth;
    const std::uint64_t size = params.n_spins();
    const double scale = hps_level_scale(top, params.sigma, params.p);

    // Per-tuple spin products for both configurations, in rank order.
    std::vector<std::int8_t> prod_a;
    std::vector<std::int8_t> prod_b;
    auto subset = first_subset(params.p);
    do {
        int a = 1;
        int b = 1;
        for (std::uint32_t s : subset) {
            a *= pair.first().spin(s);
            b *= pair.second().spin(s);
        }
        prod_a.push_back(static_cast<std::int8_t>(a));
        prod_b.push_back(static_cast<std::int8_t>(b));
    } while (next_colex(subset, static_cast<std::uint32_t>(size)));

    MeanAccumulator acc;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const DisorderOracle oracle =
            base.with_seed(derive_seed(base.seed(), SeedPurpose::DisorderSample, i));
        double eta_a = 0.0;
        double eta_b = 0.0;
        for (std::size_t r = 0; r < prod_a.size(); ++r) {
            const double j = oracle.value(DisorderFamily::HpsCoupling, top, 0, r);
            eta_a += j * prod_a[r];
            eta_b += j * prod_b[r];
        }
        acc.add(scale * eta_a * scale * eta_b);
    }
    return acc.estimate();
}

void check_hps_capacity(const ModelParams& params, const EnumerationOptions& options)
{
    validate(params);
    const std::uint64_t n = params.n_spins();
    if (n > kRoutineSpins && !options.long_run) {
        throw CapacityError("HPS with " + std::to_string(n) +
                            " spins is a long enumeration; enable the long-run flag or use "
                            "the Monte Carlo path (mc-run)");
    }
    if (n > 63 || (std::uint64_t{1} << n) > options.max_configs) {
        throw CapacityError("HPS with " + std::to_string(n) +
                            " spins exceeds the enumeration budget; use the Monte Carlo path "
                            "(mc-run)");
    }
}

std::vector<PartitionResult> hps_partition(const ModelParams& params,
                                           const DisorderOracle& oracle,
                                           std::span<const double> betas,
                                           const EnumerationOptions& options, double top_weight)
{
    check_hps_capacity(params, options);
    const HpsSystem system(params, oracle, top_weight);
    const std::uint64_t n = params.n_spins();
    const std::uint64_t n_configs = std::uint64_t{1} << n;

    // Each chunk walks the reflected Gray code from its first index, starting
    // from an exact energy and applying one single-spin delta per step.
    return enumerate_partition(
        n_configs, betas, static_cast<double>(n) * std::log(2.0), options.workers,
        [&](std::uint64_t begin, std::span<double> out) {
            SpinConfiguration config =
                SpinConfiguration::from_code(static_cast<std::size_t>(n), begin ^ (begin >> 1));
            double e = system.energy(config);
            out[0] = e;
            for (std::size_t k = 1; k < out.size(); ++k) {
                const auto site = static_cast<std::size_t>(std::countr_zero(begin + k));
                e += system.flip_delta(config, site);
                config.flip(site);
                out[k] = e;
            }
        });
}

SampleRecord hps_exact_log_partition(const ModelParams& params, const DisorderOracle& oracle,
                                     const EnumerationOptions& options)
{
    const double beta = params.beta;
    const PartitionResult r =
        hps_partition(params, oracle, std::span<const double>(&beta, 1), options).front();
    SampleRecord rec;
    rec.model = ModelKind::Hps;
    rec.depth = params.depth;
    rec.p = params.p;
    rec.sigma = params.sigma;
    rec.beta = beta;
    rec.seed = oracle.seed();
    rec.method = Method::ExactStream;
    rec.n_spins = params.n_spins();
    rec.log_z = r.log_z;
    rec.mean_energy = r.mean_energy;
    rec.min_energy = r.min_energy;
    rec.log_z_per_spin = r.log_z / static_cast<double>(rec.n_spins);
    return rec;
}

} // namespace hglass
