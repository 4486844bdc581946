#pragma once

#include "hglass/params.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>

namespace hglass {

/// Disorder families. The numeric values are part of the key schema
/// (see docs/disorder-keys.md) and must not change.
enum class DisorderFamily : std::uint8_t {
    Hrem = 1,        // epsilon_l[block code]
    HpsCoupling = 2, // J for a p-tuple inside a level-l block, by colex rank
    HpsField = 3,    // h_i, local index = site
};

struct DisorderKey {
    DisorderFamily family = DisorderFamily::Hrem;
    int level = 0;
    std::uint64_t block = 0;
    std::uint64_t local = 0;

    auto operator<=>(const DisorderKey&) const = default;
};

/// Lazily evaluated quenched disorder. Every value is a pure function of
/// (master seed, key): a Philox4x32-10 block keyed by the seed is applied to
/// the packed key, and the 64 output bits go through the inverse normal CDF.
/// Nothing is stored, so disorder sets of any size behave as if materialized.
///
/// Two fixture modes exist for tests: `zero` returns 0 for every key, `table`
/// returns hand-fixed values (0 for keys missing from the table).
class DisorderOracle {
public:
    enum class Mode { Keyed, Zero, Table };

    DisorderOracle(std::uint64_t master_seed, const ModelParams& params);

    static DisorderOracle fixed_table(const ModelParams& params,
                                      std::map<DisorderKey, double> values);

    /// Range-checked lookup; throws RangeError naming the offending field.
    double gaussian_at(const DisorderKey& key) const;

    /// Unchecked lookup for hot loops whose indices are valid by construction.
    double value(DisorderFamily family, int level, std::uint64_t block,
                 std::uint64_t local) const noexcept;

    void check_key(const DisorderKey& key) const;

    std::uint64_t seed() const noexcept { return seed_; }
    const ModelParams& params() const noexcept { return params_; }
    Mode mode() const noexcept { return mode_; }

    /// Same mode and shape under another master seed (fixture modes ignore it).
    DisorderOracle with_seed(std::uint64_t seed) const;

    /// Same seed and mode, different shape (used to query sub-models).
    DisorderOracle reshaped(const ModelParams& params) const;

    friend DisorderOracle zero_override(const DisorderOracle& oracle);

private:
    std::uint64_t seed_;
    ModelParams params_;
    Mode mode_ = Mode::Keyed;
    std::shared_ptr<const std::map<DisorderKey, double>> table_;
};

double gaussian_at(const DisorderKey& key, const DisorderOracle& oracle);

/// Copy of `oracle` that yields 0 for every key.
DisorderOracle zero_override(const DisorderOracle& oracle);

/// Purposes for seeds derived from the master seed; domain-separated from the
/// disorder families.
enum class SeedPurpose : std::uint32_t {
    DisorderSample = 1, // disorder realization i of a quenched average
    ChainStream = 2,    // Monte Carlo chain / replica stream
    Auxiliary = 3,
};

/// 64-bit seed for item `index` of `purpose` under `master`.
std::uint64_t derive_seed(std::uint64_t master, SeedPurpose purpose, std::uint64_t index) noexcept;

/// Raw 64-bit keyed output (exposed for tests of the key encoding).
std::uint64_t keyed_bits(std::uint64_t seed, const DisorderKey& key) noexcept;

/// Standard normal quantile, accurate to a few ulp on (0, 1).
double inverse_normal_cdf(double u);

} // namespace hglass
