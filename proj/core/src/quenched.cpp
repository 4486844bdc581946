#include "hglass/quenched.hpp"

#include "hglass/errors.hpp"
#include "hglass/hps.hpp"
#include "hglass/parallel.hpp"

#include <cmath>
#include <string>

namespace hglass {

DisorderOracle sample_oracle(const DisorderOracle& base, std::uint64_t index)
{
    return base.with_seed(derive_seed(base.seed(), SeedPurpose::DisorderSample, index));
}

QuenchedRun::QuenchedRun(ModelParams params, std::vector<double> betas, Method method,
                         std::vector<std::uint64_t> seeds,
                         std::vector<std::vector<PartitionResult>> results)
    : params_(params), betas_(std::move(betas)), method_(method), seeds_(std::move(seeds)),
      results_(std::move(results))
{
}

double QuenchedRun::log_z_per_spin(std::size_t sample, std::size_t beta_index) const noexcept
{
    return results_[sample][beta_index].log_z / static_cast<double>(params_.n_spins());
}

double QuenchedRun::entropy(std::size_t sample, std::size_t beta_index) const noexcept
{
    const PartitionResult& r = results_[sample][beta_index];
    const auto n = static_cast<double>(params_.n_spins());
    return betas_[beta_index] * r.mean_energy / n + r.log_z / n;
}

Estimate QuenchedRun::free_energy(std::size_t beta_index) const
{
    MeanAccumulator acc;
    for (std::size_t i = 0; i < results_.size(); ++i) {
        acc.add(log_z_per_spin(i, beta_index));
    }
    return acc.estimate();
}

Estimate QuenchedRun::entropy(std::size_t beta_index) const
{
    MeanAccumulator acc;
    for (std::size_t i = 0; i < results_.size(); ++i) {
        acc.add(entropy(i, beta_index));
    }
    return acc.estimate();
}

Estimate QuenchedRun::min_energy_per_spin(std::size_t beta_index) const
{
    MeanAccumulator acc;
    const auto n = static_cast<double>(params_.n_spins());
    for (const auto& sample : results_) {
        acc.add(sample[beta_index].min_energy / n);
    }
    return acc.estimate();
}

std::vector<SampleRecord> QuenchedRun::records() const
{
    std::vector<SampleRecord> out;
    out.reserve(results_.size() * betas_.size());
    for (std::size_t j = 0; j < betas_.size(); ++j) {
        for (std::size_t i = 0; i < results_.size(); ++i) {
            SampleRecord r;
            r.model = params_.kind;
            r.depth = params_.depth;
            r.p = params_.kind == ModelKind::Hps ? params_.p : 0;
            r.sigma = params_.sigma;
            r.beta = betas_[j];
            r.sample_index = i;
            r.seed = seeds_[i];
            r.method = method_;
            r.n_spins = params_.n_spins();
            r.log_z = results_[i][j].log_z;
            r.mean_energy = results_[i][j].mean_energy;
            r.min_energy = results_[i][j].min_energy;
            r.log_z_per_spin = log_z_per_spin(i, j);
            out.push_back(r);
        }
    }
    return out;
}

QuenchedRun run_quenched(const ModelParams& params, std::span<const double> betas,
                         std::size_t n_samples, const DisorderOracle& base,
                         const EnumerationOptions& options, double top_weight)
{
    if (n_samples < 1) {
        throw RangeError("n", "need at least one disorder sample");
    }
    for (double b : betas) {
        if (!(b >= 0.0) || !std::isfinite(b)) {
            throw DomainError("beta must be a finite non-negative number");
        }
    }

    Method method = Method::ExactStream;
    if (params.kind == ModelKind::Hrem) {
        method = hrem_enumeration_method(params, options);
    } else {
        check_hps_capacity(params, options);
    }

    EnumerationOptions inner = options;
    unsigned outer_workers = 1;
    if (n_samples > 1) {
        outer_workers = options.workers;
        inner.workers = 1;
    }

    std::vector<std::uint64_t> seeds(n_samples);
    std::vector<std::vector<PartitionResult>> results(n_samples);
    parallel_for(n_samples, outer_workers, [&](std::size_t i) {
        const DisorderOracle oracle = sample_oracle(base, i);
        seeds[i] = oracle.seed();
        results[i] = params.kind == ModelKind::Hrem
                         ? hrem_partition(params, oracle, betas, inner, top_weight)
                         : hps_partition(params, oracle, betas, inner, top_weight);
    });
    return QuenchedRun(params, std::vector<double>(betas.begin(), betas.end()), method,
                       std::move(seeds), std::move(results));
}

namespace {

void require_samples(std::size_t n, std::size_t minimum)
{
    if (n < minimum) {
        throw RangeError("n", "need at least " + std::to_string(minimum) + " samples, got " +
                                  std::to_string(n));
    }
}

} // namespace

Estimate quenched_free_energy(const ModelParams& params, std::size_t n_samples,
                              const DisorderOracle& base, const EnumerationOptions& options)
{
    require_samples(n_samples, 2);
    const double beta = params.beta;
    return run_quenched(params, std::span<const double>(&beta, 1), n_samples, base, options)
        .free_energy(0);
}

Estimate hps_quenched_free_energy(const ModelParams& params, std::size_t n_samples,
                                  const DisorderOracle& base, const EnumerationOptions& options)
{
    if (params.kind != ModelKind::Hps) {
        throw RangeError("model", "expected HPS parameters");
    }
    return quenched_free_energy(params, n_samples, base, options);
}

Estimate entropy_estimate(const ModelParams& params, std::size_t n_samples,
                          const DisorderOracle& base, const EnumerationOptions& options)
{
    require_samples(n_samples, 2);
    const double beta = params.beta;
    return run_quenched(params, std::span<const double>(&beta, 1), n_samples, base, options)
        .entropy(0);
}

Estimate interpolated_free_energy(const ModelParams& params, double t, std::size_t n_samples,
                                  const DisorderOracle& base, const EnumerationOptions& options)
{
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError("interpolation parameter t must lie in [0, 1]");
    }
    require_samples(n_samples, 2);
    const double beta = params.beta;
    return run_quenched(params, std::span<const double>(&beta, 1), n_samples, base, options,
                        std::sqrt(t))
        .free_energy(0);
}

ConcentrationResult concentration_probe(const ModelParams& params, std::size_t n_samples,
                                        const DisorderOracle& base,
                                        const EnumerationOptions& options)
{
    require_samples(n_samples, 1000);
    const double beta = params.beta;
    const QuenchedRun run =
        run_quenched(params, std::span<const double>(&beta, 1), n_samples, base, options);

    ConcentrationResult out;
    out.n = n_samples;
    out.f_hat = run.free_energy(0).mean;
    out.threshold = concentration_threshold(params.depth);
    out.bound = concentration_bound(params.depth, params.sigma, beta);
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (std::abs(run.log_z_per_spin(i, 0) - out.f_hat) >= out.threshold) {
            ++out.exceed;
        }
    }
    out.fraction = static_cast<double>(out.exceed) / static_cast<double>(n_samples);
    out.fraction_stderr = binomial_stderr(out.fraction, n_samples);
    return out;
}

} // namespace hglass
