#pragma once

#include "hglass/disorder.hpp"
#include "hglass/enumerate.hpp"
#include "hglass/hrem.hpp"
#include "hglass/params.hpp"
#include "hglass/records.hpp"
#include "hglass/stats.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hglass {

/// Disorder realization i of a quenched average uses
/// base.with_seed(derive_seed(base.seed(), DisorderSample, i)).
DisorderOracle sample_oracle(const DisorderOracle& base, std::uint64_t index);

/// Exact enumeration of `n_samples` disorder realizations at several inverse
/// temperatures. All per-beta quantities of one sample come from the same
/// realization, so differences across beta (or across runs sharing a base
/// seed) are paired.
class QuenchedRun {
public:
    QuenchedRun(ModelParams params, std::vector<double> betas, Method method,
                std::vector<std::uint64_t> seeds,
                std::vector<std::vector<PartitionResult>> results);

    const ModelParams& params() const noexcept { return params_; }
    std::span<const double> betas() const noexcept { return betas_; }
    Method method() const noexcept { return method_; }
    std::size_t n_samples() const noexcept { return results_.size(); }
    std::uint64_t seed(std::size_t sample) const noexcept { return seeds_[sample]; }

    const PartitionResult& result(std::size_t sample, std::size_t beta_index) const noexcept
    {
        return results_[sample][beta_index];
    }

    /// 2^-K log Z (or p^-K log Z) of one realization.
    double log_z_per_spin(std::size_t sample, std::size_t beta_index) const noexcept;

    /// beta <H>/N + log Z/N of one realization.
    double entropy(std::size_t sample, std::size_t beta_index) const noexcept;

    Estimate free_energy(std::size_t beta_index) const;
    Estimate entropy(std::size_t beta_index) const;

    /// Sample mean of the per-spin ground-state energy.
    Estimate min_energy_per_spin(std::size_t beta_index) const;

    std::vector<SampleRecord> records() const;

private:
    ModelParams params_;
    std::vector<double> betas_;
    Method method_;
    std::vector<std::uint64_t> seeds_;
    std::vector<std::vector<PartitionResult>> results_;
};

/// Enumerates every sample (dispatching on params.kind). `options.workers`
/// is spent across samples, or inside the enumeration for a single sample.
QuenchedRun run_quenched(const ModelParams& params, std::span<const double> betas,
                         std::size_t n_samples, const DisorderOracle& base,
                         const EnumerationOptions& options = {}, double top_weight = 1.0);

/// Mean and standard error of the per-spin log Z at params.beta.
Estimate quenched_free_energy(const ModelParams& params, std::size_t n_samples,
                              const DisorderOracle& base, const EnumerationOptions& options = {});

Estimate hps_quenched_free_energy(const ModelParams& params, std::size_t n_samples,
                                  const DisorderOracle& base,
                                  const EnumerationOptions& options = {});

/// Finite-size entropy beta E<H>/N + f, paired per seed.
Estimate entropy_estimate(const ModelParams& params, std::size_t n_samples,
                          const DisorderOracle& base, const EnumerationOptions& options = {});

/// Quenched free energy of the Hamiltonian whose top-level term is scaled
/// by sqrt(t); t = 1 is the model itself, t = 0 decouples the halves.
Estimate interpolated_free_energy(const ModelParams& params, double t, std::size_t n_samples,
                                  const DisorderOracle& base,
                                  const EnumerationOptions& options = {});

struct ConcentrationResult {
    double fraction = 0.0;      // share of samples beyond the threshold
    double fraction_stderr = 0.0;
    double bound = 0.0;         // right-hand side of the tail inequality
    double threshold = 0.0;     // 2^(-K/4)
    double f_hat = 0.0;         // sample mean standing in for f
    std::size_t exceed = 0;
    std::size_t n = 0;
};

ConcentrationResult concentration_probe(const ModelParams& params, std::size_t n_samples,
                                        const DisorderOracle& base,
                                        const EnumerationOptions& options = {});

} // namespace hglass
