#pragma once

#include "hglass/disorder.hpp"
#include "hglass/enumerate.hpp"
#include "hglass/params.hpp"
#include "hglass/records.hpp"
#include "hglass/spins.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hglass {

/// Variance of the HREM energy of a fixed configuration, summed level by
/// level, together with its geometric upper bound 2^K 2^sigma / (2^sigma - 1)
/// (infinite for sigma <= 0).
struct Tau2 {
    double sum = 0.0;
    double bound = 0.0;
};

Tau2 variance_tau2(int depth, double sigma);

/// 2^(l (1 - sigma) / 2), the prefactor of the level-l random energies.
double hrem_level_scale(int level, double sigma) noexcept;

/// Hierarchical random energy model bound to one disorder realization.
///
/// The energy is the unrolled recursion
///     H(S) = sum_{l=0..K} sum_b 2^(l(1-sigma)/2) eps_l,b[code of block b],
/// where level-l block b holds spins [b 2^l, (b+1) 2^l). `top_weight`
/// multiplies the level-K term only (sqrt(t) for the interpolating
/// Hamiltonian). Levels whose block codes have at most 16 bits are cached.
class HremSystem {
public:
    HremSystem(const ModelParams& params, const DisorderOracle& oracle, double top_weight = 1.0);

    const ModelParams& params() const noexcept { return params_; }
    std::size_t n_spins() const noexcept { return n_; }

    /// Prefactor of level-l energies including the top weight.
    double scale(int level) const noexcept { return scales_[static_cast<std::size_t>(level)]; }

    /// Unit-variance random energy of block `block` at `level` in state `code`.
    double epsilon(int level, std::uint64_t block, std::uint64_t code) const noexcept;

    double energy(const SpinConfiguration& config) const;

    /// Energy change when `site` is flipped (2(K+1) energy lookups).
    double flip_delta(const SpinConfiguration& config, std::size_t site) const noexcept;

    /// Energy table of every level-`level` block: entry [block][code] is the
    /// full energy of the sub-system spanned by that block.
    std::vector<std::vector<double>> block_energy_tables(int level) const;

private:
    ModelParams params_;
    DisorderOracle oracle_;
    std::size_t n_;
    std::vector<double> scales_;
    // cache_[l][block << 2^l | code] for cached levels
    std::vector<std::vector<double>> cache_;
};

double hrem_energy(const SpinConfiguration& config, const ModelParams& params,
                   const DisorderOracle& oracle);

enum class EnumerationMode { Auto, Table, Streaming };

struct EnumerationOptions {
    EnumerationMode mode = EnumerationMode::Auto;
    // Upper bound on enumerated configurations (2^32 allows HREM K = 5).
    std::uint64_t max_configs = std::uint64_t{1} << 32;
    // Memory allowed for the full top-level energy table in table mode.
    std::uint64_t table_memory_bytes = std::uint64_t{1} << 20;
    // HPS systems above 9 spins only enumerate with this set.
    bool long_run = false;
    unsigned workers = 1;
};

/// Exact log Z, <H> and ground-state energy at each beta for one disorder
/// realization. Energies are computed once and shared across betas.
std::vector<PartitionResult> hrem_partition(const ModelParams& params,
                                            const DisorderOracle& oracle,
                                            std::span<const double> betas,
                                            const EnumerationOptions& options = {},
                                            double top_weight = 1.0);

/// Method actually used for a given request (throws CapacityError).
Method hrem_enumeration_method(const ModelParams& params, const EnumerationOptions& options);

SampleRecord exact_log_partition(const ModelParams& params, const DisorderOracle& oracle,
                                 const EnumerationOptions& options = {});

/// 2 exp(-2^(K/2) (2^sigma - 1) / (2 2^sigma beta^2)); 0 at beta = 0.
double concentration_bound(int depth, double sigma, double beta) noexcept;

/// Deviation threshold 2^(-K/4) of the concentration inequality.
double concentration_threshold(int depth) noexcept;

} // namespace hglass
