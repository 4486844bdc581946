#include "hglass/stats.hpp"

#include "hglass/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hglass {

double MeanAccumulator::std_err() const noexcept
{
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

Estimate mean_estimate(std::span<const double> values) noexcept
{
    MeanAccumulator acc;
    for (double v : values) {
        acc.add(v);
    }
    return acc.estimate();
}

std::vector<double> bin_means(std::span<const double> series, std::size_t bins)
{
    if (bins == 0 || series.size() < bins) {
        throw DomainError("need at least one sample per bin");
    }
    const std::size_t width = series.size() / bins;
    std::vector<double> out(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const auto first = series.begin() + static_cast<std::ptrdiff_t>(b * width);
        out[b] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(width), 0.0) /
                 static_cast<double>(width);
    }
    return out;
}

Estimate jackknife(std::span<const double> leave_one_out, double full) noexcept
{
    const std::size_t n = leave_one_out.size();
    if (n < 2) {
        return {full, 0.0};
    }
    const double avg = std::accumulate(leave_one_out.begin(), leave_one_out.end(), 0.0) /
                       static_cast<double>(n);
    double ss = 0.0;
    for (double v : leave_one_out) {
        ss += (v - avg) * (v - avg);
    }
    return {full, std::sqrt(ss * static_cast<double>(n - 1) / static_cast<double>(n))};
}

Estimate jackknife_mean(std::span<const double> series, std::size_t bins)
{
    const std::vector<double> means = bin_means(series, bins);
    const double total = std::accumulate(means.begin(), means.end(), 0.0);
    const auto nb = static_cast<double>(bins);
    std::vector<double> loo(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        loo[b] = (total - means[b]) / (nb - 1.0);
    }
    return jackknife(loo, total / nb);
}

double normal_cdf(double x) noexcept
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double ks_statistic_normal(std::vector<double> samples)
{
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = normal_cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_pvalue(double statistic, std::size_t n) noexcept
{
    const double x = statistic * std::sqrt(static_cast<double>(n));
    if (x < 0.2) {
        return 1.0;
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) {
            break;
        }
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double chi_square_pvalue(double statistic, double dof)
{
    if (dof <= 0.0) {
        throw DomainError("chi-square needs positive degrees of freedom");
    }
    return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

double chi_square_statistic(std::span<const std::uint64_t> observed,
                            std::span<const double> probabilities)
{
    if (observed.size() != probabilities.size()) {
        throw DimensionError("observed and expected have different lengths");
    }
    const double total =
        static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
    double chi2 = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = total * probabilities[i];
        const double diff = static_cast<double>(observed[i]) - expected;
        chi2 += diff * diff / expected;
    }
    return chi2;
}

double binomial_stderr(double fraction, std::size_t n) noexcept
{
    return n > 0 ? std::sqrt(fraction * (1.0 - fraction) / static_cast<double>(n)) : 0.0;
}

} // namespace hglass
