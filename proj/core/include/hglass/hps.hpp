#pragma once

#include "hglass/disorder.hpp"
#include "hglass/enumerate.hpp"
#include "hglass/hrem.hpp"
#include "hglass/params.hpp"
#include "hglass/records.hpp"
#include "hglass/spins.hpp"
#include "hglass/stats.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hglass {

/// Address of one p-body coupling: the p-tuple of block-local sites
/// (i_1 > ... > i_p) is stored as its colex rank.
struct CouplingIndex {
    int level = 1;
    std::uint64_t block = 0;
    std::uint64_t rank = 0;

    auto operator<=>(const CouplingIndex&) const = default;
};

/// -sqrt(p!) / p^(l (p - 2(1 - sigma)) / 2), the prefactor of level-l couplings.
double hps_level_scale(int level, double sigma, int p) noexcept;

/// Total number of couplings over all levels and blocks.
std::uint64_t hps_coupling_count(const ModelParams& params) noexcept;

/// Hierarchical p-spin model bound to one disorder realization.
///
/// Unrolled energy: sum_i h_i S_i plus, for every level l = 1..K and every
/// level-l block, the block's own p-body term scale_l sum J S...S over
/// tuples of sites inside the block. `top_weight` multiplies the level-K
/// term only. Couplings are cached when fewer than 10^6.
class HpsSystem {
public:
    HpsSystem(const ModelParams& params, const DisorderOracle& oracle, double top_weight = 1.0);

    const ModelParams& params() const noexcept { return params_; }
    std::size_t n_spins() const noexcept { return n_; }
    double scale(int level) const noexcept { return scales_[static_cast<std::size_t>(level)]; }

    double field(std::size_t site) const noexcept { return fields_[site]; }
    double coupling(const CouplingIndex& index) const noexcept;

    double energy(const SpinConfiguration& config) const;

    /// Interaction energy of one block at `level` (including its prefactor).
    double block_interaction(const SpinConfiguration& config, int level,
                             std::uint64_t block) const;

    double field_energy(const SpinConfiguration& config) const;

    double flip_delta(const SpinConfiguration& config, std::size_t site) const;

private:
    void build_incidence();

    ModelParams params_;
    DisorderOracle oracle_;
    std::size_t n_;
    std::vector<double> scales_;
    std::vector<double> fields_;
    std::vector<std::vector<double>> couplings_; // [level][block * C + rank], if cached
    // CSR incidence: for site i, entries [offset_[i], offset_[i+1]) hold the
    // scaled coupling and the p-1 partner sites of every tuple containing i.
    std::vector<std::size_t> offset_;
    std::vector<double> coeff_;
    std::vector<std::uint32_t> partners_;
};

double hps_energy(const SpinConfiguration& config, const ModelParams& params,
                  const DisorderOracle& oracle);

/// Two configurations of equal length.
class OverlapPair {
public:
    OverlapPair(SpinConfiguration first, SpinConfiguration second);

    const SpinConfiguration& first() const noexcept { return first_; }
    const SpinConfiguration& second() const noexcept { return second_; }
    double overlap() const noexcept;

private:
    SpinConfiguration first_;
    SpinConfiguration second_;
};

/// Exact covariance over the couplings of the top-level interaction energies
/// eta_K[S], eta_K[S']: (p!/p^(K(p-2(1-sigma)))) e_p(v) with v_i = S_i S'_i.
double eta_covariance_exact(const OverlapPair& pair, const ModelParams& params);

/// Large-volume approximation p^(2K(1-sigma)) Q^p of the same covariance.
double eta_covariance_asymptotic(const OverlapPair& pair, const ModelParams& params);

/// Monte Carlo estimate of the same covariance over `n_samples` coupling
/// realizations derived from `base` (mean of eta eta', known zero mean).
Estimate empirical_eta_covariance(const OverlapPair& pair, const ModelParams& params,
                                  std::size_t n_samples, const DisorderOracle& base);

/// Exact log Z, <H>, ground-state energy per beta (Gray-code streaming).
std::vector<PartitionResult> hps_partition(const ModelParams& params,
                                           const DisorderOracle& oracle,
                                           std::span<const double> betas,
                                           const EnumerationOptions& options = {},
                                           double top_weight = 1.0);

void check_hps_capacity(const ModelParams& params, const EnumerationOptions& options);

SampleRecord hps_exact_log_partition(const ModelParams& params, const DisorderOracle& oracle,
                                     const EnumerationOptions& options = {});

} // namespace hglass
