#include "hglass/disorder.hpp"

#include "hglass/combinatorics.hpp"
#include "hglass/errors.hpp"
#include "hglass/philox.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hglass {

namespace {

PhiloxCounter pack_key(const DisorderKey& key) noexcept
{
    return {static_cast<std::uint32_t>(key.local), static_cast<std::uint32_t>(key.local >> 32),
            static_cast<std::uint32_t>(key.block),
            (static_cast<std::uint32_t>(key.family) << 24) |
                static_cast<std::uint32_t>(key.level & 0xFFFF)};
}

std::uint64_t join(const PhiloxCounter& out) noexcept
{
    return (std::uint64_t{out[1]} << 32) | out[0];
}

} // namespace

double inverse_normal_cdf(double u)
{
    if (!(u > 0.0 && u < 1.0)) {
        if (u == 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        if (u == 1.0) {
            return std::numeric_limits<double>::infinity();
        }
        throw DomainError("inverse_normal_cdf argument outside [0, 1]");
    }
    // Acklam's rational approximation (relative error 1.15e-9), then one
    // Halley step against erfc, which brings it to double precision.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (u < p_low) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - p_low) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - u;
    const double g = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - g / (1.0 + 0.5 * x * g);
}

DisorderOracle::DisorderOracle(std::uint64_t master_seed, const ModelParams& params)
    : seed_(master_seed), params_(params)
{
}

DisorderOracle DisorderOracle::fixed_table(const ModelParams& params,
                                           std::map<DisorderKey, double> values)
{
    DisorderOracle out(0, params);
    out.mode_ = Mode::Table;
    out.table_ = std::make_shared<const std::map<DisorderKey, double>>(std::move(values));
    return out;
}

DisorderOracle DisorderOracle::with_seed(std::uint64_t seed) const
{
    DisorderOracle out = *this;
    out.seed_ = seed;
    return out;
}

DisorderOracle DisorderOracle::reshaped(const ModelParams& params) const
{
    DisorderOracle out = *this;
    out.params_ = params;
    return out;
}

void DisorderOracle::check_key(const DisorderKey& key) const
{
    const ModelParams& mp = params_;
    switch (key.family) {
    case DisorderFamily::Hrem:
        if (mp.kind != ModelKind::Hrem) {
            throw RangeError("family", "HREM key queried on an HPS oracle");
        }
        break;
    case DisorderFamily::HpsCoupling:
    case DisorderFamily::HpsField:
        if (mp.kind != ModelKind::Hps) {
            throw RangeError("family", "HPS key queried on an HREM oracle");
        }
        break;
    default:
        throw RangeError("family", "unknown disorder family " +
                                       std::to_string(static_cast<int>(key.family)));
    }

    if (key.level < 0 || key.level > mp.depth) {
        throw RangeError("level", std::to_string(key.level) + " not in [0, " +
                                      std::to_string(mp.depth) + "]");
    }

    if (key.family == DisorderFamily::HpsField) {
        if (key.level != 0 || key.block != 0) {
            throw RangeError(key.level != 0 ? "level" : "block",
                             "field keys use level 0, block 0");
        }
        if (key.local >= mp.n_spins()) {
            throw RangeError("local", "site " + std::to_string(key.local) + " >= " +
                                          std::to_string(mp.n_spins()));
        }
        return;
    }

    const std::uint64_t blocks = mp.block_count(key.level);
    if (key.block >= blocks) {
        throw RangeError("block", std::to_string(key.block) + " >= " + std::to_string(blocks) +
                                      " blocks at level " + std::to_string(key.level));
    }

    const std::uint64_t size = mp.block_size(key.level);
    if (key.family == DisorderFamily::Hrem) {
        if (size < 64 && key.local >= (std::uint64_t{1} << size)) {
            throw RangeError("local", "block code " + std::to_string(key.local) +
                                          " needs more than " + std::to_string(size) + " bits");
        }
        return;
    }

    if (key.level < 1) {
        throw RangeError("level", "couplings live on levels >= 1");
    }
    const std::uint64_t tuples = binomial(size, static_cast<std::uint64_t>(mp.p));
    if (key.local >= tuples) {
        throw RangeError("local", "tuple rank " + std::to_string(key.local) + " >= C(" +
                                      std::to_string(size) + ", " + std::to_string(mp.p) + ")");
    }
}

double DisorderOracle::gaussian_at(const DisorderKey& key) const
{
    check_key(key);
    return value(key.family, key.level, key.block, key.local);
}

double DisorderOracle::value(DisorderFamily family, int level, std::uint64_t block,
                             std::uint64_t local) const noexcept
{
    switch (mode_) {
    case Mode::Zero:
        return 0.0;
    case Mode::Table: {
        const auto it = table_->find(DisorderKey{family, level, block, local});
        return it == table_->end() ? 0.0 : it->second;
    }
    case Mode::Keyed:
        break;
    }
    return inverse_normal_cdf(
        bits_to_open_unit(keyed_bits(seed_, DisorderKey{family, level, block, local})));
}

std::uint64_t keyed_bits(std::uint64_t seed, const DisorderKey& key) noexcept
{
    return join(philox4x32(pack_key(key), philox_key(seed)));
}

double gaussian_at(const DisorderKey& key, const DisorderOracle& oracle)
{
    return oracle.gaussian_at(key);
}

DisorderOracle zero_override(const DisorderOracle& oracle)
{
    DisorderOracle out = oracle;
    out.mode_ = DisorderOracle::Mode::Zero;
    out.table_.reset();
    return out;
}

std::uint64_t derive_seed(std::uint64_t master, SeedPurpose purpose, std::uint64_t index) noexcept
{
    // Family byte 0xD0 is outside the disorder family range.
    const PhiloxCounter ctr = {static_cast<std::uint32_t>(index),
                               static_cast<std::uint32_t>(index >> 32),
                               static_cast<std::uint32_t>(purpose), 0xD0u << 24};
    return join(philox4x32(ctr, philox_key(master)));
}

} // namespace hglass
