#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hglass {

struct Estimate {
    double mean = 0.0;
    double std_err = 0.0;
};

/// Welford running mean/variance. A constant input stream gives exactly zero
/// variance, which the beta = 0 exactness checks rely on.
class MeanAccumulator {
public:
    void add(double x) noexcept
    {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }

    // Unbiased sample variance; 0 for fewer than two samples.
    double variance() const noexcept
    {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    }

    double std_err() const noexcept;

    Estimate estimate() const noexcept { return {mean(), std_err()}; }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

Estimate mean_estimate(std::span<const double> values) noexcept;

/// Means of `bins` contiguous, equal-length bins (trailing remainder dropped).
std::vector<double> bin_means(std::span<const double> series, std::size_t bins);

/// Jackknife error of a statistic from its leave-one-bin-out values.
/// `full` is the statistic on the complete data and becomes the reported mean.
Estimate jackknife(std::span<const double> leave_one_out, double full) noexcept;

/// Mean of a correlated time series with a binned jackknife error bar.
Estimate jackknife_mean(std::span<const double> series, std::size_t bins = 16);

/// Kolmogorov-Smirnov statistic of `samples` against the standard normal CDF.
double ks_statistic_normal(std::vector<double> samples);

/// Asymptotic Kolmogorov survival function P(sqrt(n) D > x sqrt(n)).
double ks_pvalue(double statistic, std::size_t n) noexcept;

/// Upper-tail probability of a chi-square variate.
double chi_square_pvalue(double statistic, double dof);

/// Pearson chi-square of observed counts against expected probabilities.
double chi_square_statistic(std::span<const std::uint64_t> observed,
                            std::span<const double> probabilities);

/// Standard error of a binomial proportion estimate.
double binomial_stderr(double fraction, std::size_t n) noexcept;

double normal_cdf(double x) noexcept;

} // namespace hglass
